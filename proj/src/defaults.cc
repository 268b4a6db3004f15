#include "goalvar/json_io.h"
#include "goalvar/model.h"

namespace goalvar {

namespace detail {
extern const char *const kOntologyDocument;
extern const char *const kRegistryDocument;
}  // namespace detail

Model model_from_json(const Json &ontology, const Json &registry) {
    Model model;
    model.ontology = ontology_from_json(ontology);
    model.skills = registry_from_json(model.ontology, registry);
    return model;
}

const Json &default_ontology_document() {
    static const Json doc = Json::parse(detail::kOntologyDocument);
    return doc;
}

const Json &default_registry_document() {
    static const Json doc = Json::parse(detail::kRegistryDocument);
    return doc;
}

const Model &default_model() {
    static const Model model = model_from_json(default_ontology_document(), default_registry_document());
    return model;
}

}  // namespace goalvar
