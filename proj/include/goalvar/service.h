#ifndef GOALVAR_SERVICE_H
#define GOALVAR_SERVICE_H

#include "goalvar/goal_session.h"
#include "goalvar/json_io.h"

#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

namespace goalvar {

// Goal-definition sessions by id. Updates are optimistic: a caller reads a
// session, derives its successor and commits only if nobody else committed
// in between.
class SessionStore {
public:
    // Assigns the next id ("s1", "s2", ...) and stores the session `make`
    // builds for it.
    template <typename Make>
    Session create(Make make) {
        std::string id;
        {
            std::lock_guard<std::mutex> lock(mutex_);
            id = "s" + std::to_string(++next_id_);
        }
        Session s = make(id);
        std::lock_guard<std::mutex> lock(mutex_);
        sessions_.insert_or_assign(id, s);
        return s;
    }

    std::optional<Session> find(const std::string &id) const;

    // False when the stored version is no longer `expected_version`.
    bool commit(const Session &next, std::uint64_t expected_version);

    std::size_t size() const;

private:
    mutable std::mutex mutex_;
    std::uint64_t next_id_ = 0;
    std::map<std::string, Session> sessions_;
};

struct Response {
    int status = 200;
    std::string body;  // JSON text
};

// The system boundary: documents in, documents out. Each endpoint is a thin
// wrapper around the library call of the same name.
//
//   POST /v1/sessions                    {"before": env, "after": env}
//   GET  /v1/sessions/{id}
//   POST /v1/sessions/{id}/answers       {"answer": a, "version": n?}
//   GET  /v1/sessions/{id}/transcript
//   POST /v1/compare                     {"environment": env, "variation": v}
//   POST /v1/plan                        {"environment": env, "variation": v}
//   POST /v1/execute                     {"environment": env, "plan": p, "variation": v?}
//
// Failures answer {"code", "path", "message"}: 400 for malformed documents,
// 404 for unknown sessions or routes, 409 for stale session versions and 422
// for requests the domain rejects.
class Service {
public:
    explicit Service(const Model &model) : model_(model) {}

    Response handle(const std::string &method, const std::string &path, const std::string &body);

    Json create_session(const Json &body);
    Json get_session(const std::string &id) const;
    Json post_answer(const std::string &id, const Json &body);
    Json get_transcript(const std::string &id) const;
    Json compare(const Json &body) const;
    Json plan(const Json &body) const;
    Json execute(const Json &body) const;

    const SessionStore &sessions() const { return store_; }

private:
    Session load(const std::string &id) const;

    const Model &model_;
    SessionStore store_;
};

// HTTP front end for a Service. Requests with a body must be JSON (415
// otherwise).
class HttpServer {
public:
    explicit HttpServer(Service &service);
    ~HttpServer();
    HttpServer(const HttpServer &) = delete;
    HttpServer &operator=(const HttpServer &) = delete;

    // Binds `host`; port 0 picks a free one. Returns the bound port, or -1.
    int bind(const std::string &host, int port);
    // Accepts requests until stop() is called.
    void run();
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// Serves `service` over HTTP until the process ends.
void serve_http(Service &service, const std::string &host, int port);

}  // namespace goalvar

#endif
