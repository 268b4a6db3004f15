// goalvar: headless driver for demonstrations, goal definition, planning,
// execution and the content-level benchmark grid.
//
// Exit codes: 0 success, 1 usage or file error, 2 invalid document or
// rejected request, 3 goal not satisfied (unsatisfiable plan or a
// NotSatisfied execution verdict).

#include "goalvar/bench.h"
#include "goalvar/service.h"

#include <CLI11.hpp>

#include <iostream>
#include <memory>

namespace {

using goalvar::Json;

constexpr int kOk = 0;
constexpr int kFileError = 1;
constexpr int kInvalid = 2;
constexpr int kNotSatisfied = 3;

struct Options {
    std::string ontology;
    std::string registry;
    std::string before;
    std::string after;
    std::string answers;
    std::string env;
    std::string variation;
    std::string plan;
    std::string config;
    std::string out;
    std::string transcript;
    std::string host = "127.0.0.1";
    int port = 8080;
    std::size_t runs = 10;
    std::uint64_t seed = 1;
    bool defaults = false;
};

goalvar::Model load_model(const Options &o) {
    const Json &ontology = o.ontology.empty() ? goalvar::default_ontology_document()
                                              : goalvar::read_json_file(o.ontology);
    const Json &registry = o.registry.empty() ? goalvar::default_registry_document()
                                              : goalvar::read_json_file(o.registry);
    return goalvar::model_from_json(ontology, registry);
}

void emit(const Options &o, const Json &doc) {
    if (o.out.empty())
        std::cout << goalvar::dump(doc);
    else
        goalvar::write_json_file(o.out, doc);
}

goalvar::EnvironmentState environment(const goalvar::Model &m, const std::string &path) {
    return goalvar::environment_from_json(m.ontology, goalvar::read_json_file(path));
}

// Accepts a plan document or a plan result carrying one.
goalvar::ExecutionPlan plan_file(const goalvar::Model &m, const std::string &path) {
    Json doc = goalvar::read_json_file(path);
    if (doc.is_object() && !doc.contains("steps") && doc.contains("plan"))
        return goalvar::plan_from_json(m, doc["plan"], "$.plan");
    return goalvar::plan_from_json(m, doc);
}

int cmd_diff(const Options &o) {
    goalvar::Model m = load_model(o);
    emit(o, goalvar::to_json(goalvar::diff_demonstration(m, environment(m, o.before), environment(m, o.after))));
    return kOk;
}

int cmd_define(const Options &o) {
    goalvar::Model m = load_model(o);
    std::map<std::string, goalvar::Answer> script;
    if (!o.answers.empty())
        script = goalvar::answer_script_from_json(goalvar::read_json_file(o.answers));
    goalvar::Session s = goalvar::Session::start(m, "cli", environment(m, o.before), environment(m, o.after));
    s = goalvar::run_script(m, s, script, o.defaults);
    if (!o.transcript.empty())
        goalvar::write_json_file(o.transcript, goalvar::transcript_to_json(s));
    emit(o, goalvar::to_json(*s.result()));
    std::cerr << s.transcript().size() << " questions\n";
    return kOk;
}

int cmd_plan(const Options &o) {
    goalvar::Model m = load_model(o);
    goalvar::Variation goal = goalvar::variation_from_json(goalvar::read_json_file(o.variation));
    goalvar::PlanResult r = goalvar::plan(m, environment(m, o.env), goal);
    emit(o, goalvar::to_json(r));
    std::cerr << (r.satisfiable ? "satisfiable" : "unsatisfiable") << ", " << r.plan.step_count() << " steps\n";
    return r.satisfiable ? kOk : kNotSatisfied;
}

int cmd_exec(const Options &o) {
    goalvar::Model m = load_model(o);
    goalvar::ExecutionPlan p = plan_file(m, o.plan);
    std::optional<goalvar::Variation> goal;
    if (!o.variation.empty())
        goal = goalvar::variation_from_json(goalvar::read_json_file(o.variation));
    goalvar::ExecutionTrace t = goalvar::execute(m, p, environment(m, o.env), goal);
    emit(o, goalvar::to_json(t));
    std::cerr << goalvar::to_string(t.verdict) << ", " << t.entries.size() << " skills, " << t.total_duration
              << " s\n";
    return t.verdict == goalvar::Verdict::NotSatisfied ? kNotSatisfied : kOk;
}

int cmd_bench(const Options &o) {
    goalvar::Model m = load_model(o);
    goalvar::BenchConfig config = goalvar::bench_config_from_json(m.ontology, goalvar::read_json_file(o.config));
    auto rows = goalvar::run_bench(m, config, o.runs, o.seed);
    emit(o, goalvar::bench_to_json(rows, o.runs, o.seed));
    std::size_t agree = 0;
    for (const auto &r : rows)
        agree += r.satisfiable == r.expected;
    std::cerr << agree << "/" << rows.size() << " scenarios match C3\n";
    return kOk;
}

int cmd_serve(const Options &o) {
    static std::unique_ptr<goalvar::Model> model;
    model = std::make_unique<goalvar::Model>(load_model(o));
    goalvar::Service service(*model);
    std::cerr << "listening on " << o.host << ":" << o.port << "\n";
    goalvar::serve_http(service, o.host, o.port);
    return kOk;
}

}  // namespace

int main(int argc, char **argv) {
    Options o;
    CLI::App app{"Goal definition and planning over variations"};
    app.require_subcommand(1);
    app.add_option("--ontology", o.ontology, "Ontology document (default: built in)")->check(CLI::ExistingFile);
    app.add_option("--registry", o.registry, "Action and skill registry (default: built in)")
        ->check(CLI::ExistingFile);

    auto *diff = app.add_subcommand("diff", "Changes between two environment snapshots");
    diff->add_option("--before", o.before)->required()->check(CLI::ExistingFile);
    diff->add_option("--after", o.after)->required()->check(CLI::ExistingFile);
    diff->add_option("--out", o.out);

    auto *define = app.add_subcommand("define", "Run a scripted goal-definition session");
    define->add_option("--before", o.before)->required()->check(CLI::ExistingFile);
    define->add_option("--after", o.after)->required()->check(CLI::ExistingFile);
    define->add_option("--answers", o.answers, "Answer script")->check(CLI::ExistingFile);
    define->add_flag("--defaults", o.defaults, "Take the default for unscripted questions");
    define->add_option("--transcript", o.transcript, "Write the session transcript here");
    define->add_option("--out", o.out);

    auto *plan = app.add_subcommand("plan", "Plan towards a goal variation");
    plan->add_option("--env", o.env)->required()->check(CLI::ExistingFile);
    plan->add_option("--variation", o.variation)->required()->check(CLI::ExistingFile);
    plan->add_option("--out", o.out);

    auto *exec = app.add_subcommand("exec", "Execute a plan in the state-level simulator");
    exec->add_option("--env", o.env)->required()->check(CLI::ExistingFile);
    exec->add_option("--plan", o.plan, "Plan or plan result")->required()->check(CLI::ExistingFile);
    exec->add_option("--variation", o.variation, "Goal to check afterwards")->check(CLI::ExistingFile);
    exec->add_option("--out", o.out);

    auto *bench = app.add_subcommand("bench", "Run the content-level scenario grid");
    bench->add_option("config", o.config, "Grid config")->required()->check(CLI::ExistingFile);
    bench->add_option("--runs", o.runs, "Planner runs per scenario")->capture_default_str();
    bench->add_option("--seed", o.seed, "Seed for the per-run scenario order")->capture_default_str();
    bench->add_option("--out", o.out);

    auto *serve = app.add_subcommand("serve", "Serve the /v1 API over HTTP");
    serve->add_option("--host", o.host)->capture_default_str();
    serve->add_option("--port", o.port)->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError &e) {
        int code = app.exit(e);
        return code == 0 ? kOk : kFileError;
    }

    try {
        if (*diff)
            return cmd_diff(o);
        if (*define)
            return cmd_define(o);
        if (*plan)
            return cmd_plan(o);
        if (*exec)
            return cmd_exec(o);
        if (*bench)
            return cmd_bench(o);
        return cmd_serve(o);
    } catch (const goalvar::Error &e) {
        std::cerr << "error [" << e.code() << "]";
        if (!e.path().empty())
            std::cerr << " at " << e.path();
        std::cerr << ": " << e.what() << "\n";
        return e.code() == "io_error" ? kFileError : kInvalid;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return kFileError;
    }
}
