#include "memorb/engine.hpp"

#include "memorb/errors.hpp"

namespace memorb {

namespace {

std::shared_ptr<LlmAdapter> adapter_from_config(const EngineConfig& c) {
    if (!c.llm_endpoint.empty())
        return std::make_shared<RemoteLlmAdapter>(c.llm_endpoint, c.llm_token);
    return make_default_scripted_adapter();
}

std::shared_ptr<Embedder> embedder_from_config(const EngineConfig& c) {
    if (!c.embed_endpoint.empty())
        return std::make_shared<RemoteEmbedder>(c.embed_endpoint, c.dim);
    return std::make_shared<HashingEmbedder>(c.dim);
}

Json vector_metadata(const Orb& orb) {
    Json meta = Json::object();
    meta["emotion"] = orb.emotion;
    meta["timestamp"] = orb.timestamp.to_rfc3339();
    if (orb.context.contains("user_id")) meta["user_id"] = orb.context["user_id"];
    return meta;
}

}  // namespace

Engine::Engine(EngineConfig config)
    : Engine(config, adapter_from_config(config), embedder_from_config(config)) {}

Engine::Engine(EngineConfig config, std::shared_ptr<LlmAdapter> adapter,
               std::shared_ptr<Embedder> embedder)
    : config_(std::move(config)),
      adapter_(std::move(adapter)),
      embedder_(std::move(embedder)),
      metadata_(config_.data_dir),
      vectors_(config_.dim, config_.data_dir) {
    if (embedder_->dim() != config_.dim)
        throw DimMismatchError("engine: embedder dim != configured dim");
    reindex_missing_vectors();
}

// The orb log is the durability source of truth; vectors.bin only exists
// after a snapshot. Re-embed whatever the vector store is missing.
void Engine::reindex_missing_vectors() {
    if (metadata_.size() == vectors_.size()) return;
    for (const Orb& orb : metadata_.most_recent(metadata_.size())) {
        std::string doc = render_document(orb);
        vectors_.add_embedding(
            {orb.id, doc, embedder_->embed(doc), vector_metadata(orb)});
    }
}

IngestResult Engine::ingest_episode(const Trajectory& trajectory,
                                    const std::string& memory_context,
                                    std::optional<Instant> now) {
    if (!trajectory.complete())
        throw IncompleteTrajectoryError("ingest: trajectory incomplete");

    Orb orb = generate_orb(trajectory, *adapter_, memory_context,
                           now.value_or(Instant::now()));

    IngestResult result;
    result.orb_id = orb.id;
    result.validation =
        validate_reflection(orb.outcome, trajectory.final_reward().success());

    std::string doc = render_document(orb);
    EmbeddingVector vec = embedder_->embed(doc);

    // one writer lane: readers observe either both stores updated or neither
    std::unique_lock lock(ingest_mutex_);
    result.created = metadata_.save_orb(orb) == StoredFlag::created;
    vectors_.add_embedding({orb.id, std::move(doc), std::move(vec),
                            vector_metadata(orb)});
    return result;
}

RetrievalResult Engine::retrieve(const RetrievalRequest& request) const {
    std::shared_lock lock(ingest_mutex_);
    return memorb::retrieve(request, *adapter_, *embedder_, vectors_,
                            config_.cross_user);
}

std::optional<Orb> Engine::fetch_orb(const std::string& id) const {
    std::shared_lock lock(ingest_mutex_);
    return metadata_.fetch_orb(id);
}

EngineStats Engine::stats() const {
    std::shared_lock lock(ingest_mutex_);
    return {metadata_.size(), vectors_.size(), config_.dim, config_.k_default,
            config_.cross_user};
}

std::string Engine::reflect_recent() const {
    std::vector<Orb> recent;
    {
        std::shared_lock lock(ingest_mutex_);
        recent = metadata_.most_recent(config_.recent_m);
    }
    return reflect_over_recent(*adapter_, recent, config_.recent_m);
}

void Engine::snapshot() {
    std::unique_lock lock(ingest_mutex_);
    metadata_.snapshot();
    vectors_.snapshot();
}

}  // namespace memorb
