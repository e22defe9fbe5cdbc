#pragma once

#include <filesystem>
#include <memory>
#include <optional>
#include <shared_mutex>
#include <string>

#include "memorb/distiller.hpp"
#include "memorb/embedder.hpp"
#include "memorb/llm.hpp"
#include "memorb/metadata_store.hpp"
#include "memorb/retriever.hpp"
#include "memorb/vector_store.hpp"

namespace memorb {

struct EngineConfig {
    std::filesystem::path data_dir;  // empty -> in-memory only
    size_t dim = 768;
    size_t k_default = 5;
    bool cross_user = true;
    size_t recent_m = 5;  // reflect-over-recent window
    std::string llm_endpoint;    // empty -> deterministic scripted adapter
    std::string llm_token;
    std::string embed_endpoint;  // empty -> deterministic hashing embedder
};

struct IngestResult {
    std::string orb_id;
    bool created = false;
    ReflectionValidationReport validation;
};

struct EngineStats {
    size_t orb_count = 0;
    size_t vector_count = 0;
    size_t dim = 0;
    size_t k_default = 0;
    bool cross_user = true;
};

// One memory layer instance: both stores, the embedder, and the LLM
// adapter, behind ingest/retrieve/fetch entry points shared by the HTTP
// service, the CLI, and the evaluation harness.
class Engine {
public:
    explicit Engine(EngineConfig config);
    Engine(EngineConfig config, std::shared_ptr<LlmAdapter> adapter,
           std::shared_ptr<Embedder> embedder);

    // Distill + save + embed + index, atomically with respect to readers.
    IngestResult ingest_episode(const Trajectory& trajectory,
                                const std::string& memory_context = "",
                                std::optional<Instant> now = std::nullopt);

    RetrievalResult retrieve(const RetrievalRequest& request) const;
    std::optional<Orb> fetch_orb(const std::string& id) const;
    EngineStats stats() const;

    // Summaries over the newest orbs, for appending to the next prompt.
    std::string reflect_recent() const;

    void snapshot();

    const EngineConfig& config() const { return config_; }
    LlmAdapter& adapter() { return *adapter_; }
    const Embedder& embedder() const { return *embedder_; }

private:
    void reindex_missing_vectors();

    EngineConfig config_;
    std::shared_ptr<LlmAdapter> adapter_;
    std::shared_ptr<Embedder> embedder_;
    MetadataStore metadata_;
    VectorStore vectors_;
    mutable std::shared_mutex ingest_mutex_;  // readers see whole orbs only
};

}  // namespace memorb
