#ifndef GOALVAR_MODEL_H
#define GOALVAR_MODEL_H

#include "goalvar/kb.h"
#include "goalvar/skills.h"

namespace goalvar {

// Knowledge every operation shares: the concept hierarchy and the skills
// agents can execute.
struct Model {
    Ontology ontology;
    SkillRegistry skills;
};

// The shipped ontology and registry (data/ontology.json, data/skills.json),
// compiled into the library.
const Model &default_model();

}  // namespace goalvar

#endif
