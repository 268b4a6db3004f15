#include "goalvar/service.h"

#include <httplib.h>

namespace goalvar {

namespace {

class NotFoundError : public Error {
public:
    explicit NotFoundError(const std::string &message, std::string path = {})
        : Error("not_found", message, std::move(path)) {}
};

class StaleVersionError : public Error {
public:
    explicit StaleVersionError(const std::string &message, std::string path = {})
        : Error("stale_version", message, std::move(path)) {}
};

const Json &member(const Json &body, const char *key) {
    if (!body.is_object())
        throw ValidationError({Issue{"$", "expected an object"}});
    auto it = body.find(key);
    if (it == body.end())
        throw ValidationError({Issue{std::string("$.") + key, "missing field"}});
    return *it;
}

Response error_response(int status, const Error &e) {
    Json doc{{"code", e.code()}, {"path", e.path()}, {"message", e.what()}};
    return {status, dump(doc)};
}

int status_of(const Error &e) {
    const std::string &code = e.code();
    if (code == "validation_error" || code == "parse_error")
        return 400;
    if (code == "not_found")
        return 404;
    if (code == "stale_version")
        return 409;
    return 422;
}

std::vector<std::string> split(const std::string &path) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (start <= path.size()) {
        std::size_t end = path.find('/', start);
        if (end == std::string::npos)
            end = path.size();
        if (end > start)
            out.push_back(path.substr(start, end - start));
        start = end + 1;
    }
    return out;
}

}  // namespace

std::optional<Session> SessionStore::find(const std::string &id) const {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = sessions_.find(id);
    if (it == sessions_.end())
        return std::nullopt;
    return it->second;
}

bool SessionStore::commit(const Session &next, std::uint64_t expected_version) {
    std::lock_guard<std::mutex> lock(mutex_);
    auto it = sessions_.find(next.id());
    if (it == sessions_.end() || it->second.version() != expected_version)
        return false;
    it->second = next;
    return true;
}

std::size_t SessionStore::size() const {
    std::lock_guard<std::mutex> lock(mutex_);
    return sessions_.size();
}

Session Service::load(const std::string &id) const {
    auto s = store_.find(id);
    if (!s)
        throw NotFoundError("unknown session '" + id + "'", id);
    return *s;
}

Json Service::create_session(const Json &body) {
    EnvironmentState before = environment_from_json(model_.ontology, member(body, "before"), "$.before");
    EnvironmentState after = environment_from_json(model_.ontology, member(body, "after"), "$.after");
    Session s = store_.create([&](const std::string &id) { return Session::start(model_, id, before, after); });
    return to_json(s);
}

Json Service::get_session(const std::string &id) const {
    return to_json(load(id));
}

Json Service::post_answer(const std::string &id, const Json &body) {
    Session current = load(id);
    Answer answer = answer_from_json(member(body, "answer"), "$.answer");
    if (auto it = body.find("version"); it != body.end() && !it->is_null()) {
        if (!it->is_number_unsigned())
            throw ValidationError({Issue{"$.version", "expected a non-negative integer"}});
        if (it->get<std::uint64_t>() != current.version())
            throw StaleVersionError("session '" + id + "' is at version " + std::to_string(current.version()),
                                    "$.version");
    }
    Session next = current.answer(model_, answer);
    if (!store_.commit(next, current.version()))
        throw StaleVersionError("session '" + id + "' changed while the answer was applied", "$.version");
    return to_json(next);
}

Json Service::get_transcript(const std::string &id) const {
    return transcript_to_json(load(id));
}

Json Service::compare(const Json &body) const {
    EnvironmentState env = environment_from_json(model_.ontology, member(body, "environment"), "$.environment");
    Variation variation = variation_from_json(member(body, "variation"), "$.variation");
    validate(model_.ontology, variation, ValueKind::Environment);
    Json out{{"comparison", to_json(compare_to_variation(model_.ontology, Value::environment(env), variation))}};
    if (const auto *ev = variation.get_if<EnvironmentVariation>())
        out["environment"] = to_json(compare_environment(model_.ontology, env, *ev));
    return out;
}

Json Service::plan(const Json &body) const {
    EnvironmentState env = environment_from_json(model_.ontology, member(body, "environment"), "$.environment");
    Variation variation = variation_from_json(member(body, "variation"), "$.variation");
    return to_json(goalvar::plan(model_, env, variation));
}

Json Service::execute(const Json &body) const {
    EnvironmentState env = environment_from_json(model_.ontology, member(body, "environment"), "$.environment");
    ExecutionPlan p = plan_from_json(model_, member(body, "plan"), "$.plan");
    std::optional<Variation> goal;
    if (auto it = body.find("variation"); it != body.end() && !it->is_null())
        goal = variation_from_json(*it, "$.variation");
    return to_json(goalvar::execute(model_, p, env, goal));
}

Response Service::handle(const std::string &method, const std::string &path, const std::string &body) {
    try {
        std::vector<std::string> parts = split(path);
        if (parts.size() < 2 || parts[0] != "v1")
            throw NotFoundError("no route for '" + path + "'", path);
        auto parsed = [&] { return parse_json(body); };
        auto route = [&](const char *m) { return method == m; };

        const std::string &resource = parts[1];
        if (resource == "sessions") {
            if (parts.size() == 2 && route("POST"))
                return {201, dump(create_session(parsed()))};
            if (parts.size() == 3 && route("GET"))
                return {200, dump(get_session(parts[2]))};
            if (parts.size() == 4 && parts[3] == "answers" && route("POST"))
                return {200, dump(post_answer(parts[2], parsed()))};
            if (parts.size() == 4 && parts[3] == "transcript" && route("GET"))
                return {200, dump(get_transcript(parts[2]))};
        } else if (parts.size() == 2 && route("POST")) {
            if (resource == "compare")
                return {200, dump(compare(parsed()))};
            if (resource == "plan")
                return {200, dump(plan(parsed()))};
            if (resource == "execute")
                return {200, dump(execute(parsed()))};
        }
        throw NotFoundError("no route for " + method + " '" + path + "'", path);
    } catch (const Error &e) {
        return error_response(status_of(e), e);
    } catch (const std::exception &e) {
        return error_response(500, Error("internal_error", e.what()));
    }
}

struct HttpServer::Impl {
    httplib::Server server;
};

HttpServer::HttpServer(Service &service) : impl_(std::make_unique<Impl>()) {
    auto forward = [&service](const httplib::Request &req, httplib::Response &res) {
        auto type = req.get_header_value("Content-Type");
        if (!req.body.empty() && type.find("json") == std::string::npos) {
            Json doc{{"code", "unsupported_media_type"}, {"path", ""}, {"message", "send application/json"}};
            res.status = 415;
            res.set_content(dump(doc), "application/json");
            return;
        }
        Response r = service.handle(req.method, req.path, req.body);
        res.status = r.status;
        res.set_content(r.body, "application/json");
    };
    impl_->server.Get(R"(/v1/.*)", forward);
    impl_->server.Post(R"(/v1/.*)", forward);
}

HttpServer::~HttpServer() = default;

int HttpServer::bind(const std::string &host, int port) {
    if (port == 0)
        return impl_->server.bind_to_any_port(host);
    return impl_->server.bind_to_port(host, port) ? port : -1;
}

void HttpServer::run() { impl_->server.listen_after_bind(); }

void HttpServer::stop() { impl_->server.stop(); }

void serve_http(Service &service, const std::string &host, int port) {
    HttpServer server(service);
    if (server.bind(host, port) < 0)
        throw Error("io_error", "cannot listen on " + host + ":" + std::to_string(port));
    server.run();
}

}  // namespace goalvar
