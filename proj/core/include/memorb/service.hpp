#pragma once

#include <memory>
#include <string>

#include "memorb/engine.hpp"

namespace memorb {

// JSON-over-HTTP facade:
//   POST /v1/episodes  {"trajectory": {...}, "memory_context"?, "now"?}
//   POST /v1/retrieve  {"query", "context"?, "k"?, "requesting_user"?}
//   GET  /v1/orbs/{id}
//   GET  /v1/health
//   GET  /v1/stats
class Service {
public:
    explicit Service(Engine& engine);
    ~Service();

    // Blocks serving until stop(). Throws StorageError on bind failure.
    void serve(const std::string& host, int port);

    // Starts on an OS-assigned port and returns it. Test/embedding helper.
    int start_async(const std::string& host);
    void stop();

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

// JSON codecs shared by the service and the CLI.
Json trajectory_to_json(const Trajectory& t);
Trajectory trajectory_from_json(const Json& j);  // throws Error on bad shape
Json retrieval_result_to_json(const RetrievalResult& r, const Engine& engine);
Json ingest_result_to_json(const IngestResult& r);
Json stats_to_json(const EngineStats& s);

}  // namespace memorb
