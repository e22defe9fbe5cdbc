#pragma once

#include <filesystem>
#include <shared_mutex>
#include <string>
#include <unordered_map>
#include <vector>

#include "memorb/embedder.hpp"
#include "memorb/orb.hpp"

namespace memorb {

struct VectorRecord {
    std::string orb_id;   // hex64
    std::string document; // from render_document
    EmbeddingVector vector;
    Json metadata = Json::object();  // at minimum: emotion, timestamp
};

struct RetrievalHit {
    std::string orb_id;
    std::string document;
    Json metadata;
    double score = 0.0;  // raw inner product
};

struct RetrievalResult {
    std::vector<RetrievalHit> hits;  // score desc, ties by orb_id asc
    size_t k_requested = 0;
};

// Flat exact maximum-inner-product index with metadata, persisted to
// "vectors.bin". Re-adding an orb_id replaces the prior record.
class VectorStore {
public:
    explicit VectorStore(size_t dim = 768, std::filesystem::path data_dir = {});

    size_t dim() const { return dim_; }
    size_t size() const;

    void add_embedding(VectorRecord record);  // throws DimMismatchError
    RetrievalResult query_topk(const EmbeddingVector& query, size_t k) const;

    void snapshot();  // writes vectors.bin
    void load();      // throws FormatVersionError / StorageError

    static constexpr const char* kVectorsFile = "vectors.bin";
    static constexpr uint32_t kFormatVersion = 1;

private:
    size_t dim_;
    std::filesystem::path data_dir_;
    mutable std::shared_mutex mutex_;
    std::vector<VectorRecord> records_;
    std::unordered_map<std::string, size_t> index_by_id_;
};

}  // namespace memorb
