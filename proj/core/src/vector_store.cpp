#include "memorb/vector_store.hpp"

#include <algorithm>
#include <cstring>
#include <fstream>

#include <mutex>

#include "memorb/errors.hpp"

namespace memorb {

namespace fs = std::filesystem;

namespace {

constexpr char kMagic[4] = {'M', 'O', 'R', 'B'};

template <typename T>
void write_pod(std::ofstream& out, T v) {
    out.write(reinterpret_cast<const char*>(&v), sizeof(v));
}

template <typename T>
T read_pod(std::ifstream& in) {
    T v{};
    in.read(reinterpret_cast<char*>(&v), sizeof(v));
    if (!in) throw StorageError("vectors.bin truncated");
    return v;
}

}  // namespace

VectorStore::VectorStore(size_t dim, fs::path data_dir)
    : dim_(dim), data_dir_(std::move(data_dir)) {
    if (dim_ == 0) throw DomainError("vector store dim must be positive");
    if (!data_dir_.empty()) {
        std::error_code ec;
        fs::create_directories(data_dir_, ec);
        if (ec) throw StorageError("cannot create data dir");
        if (fs::exists(data_dir_ / kVectorsFile)) load();
    }
}

size_t VectorStore::size() const {
    std::shared_lock lock(mutex_);
    return records_.size();
}

void VectorStore::add_embedding(VectorRecord record) {
    if (record.vector.size() != dim_)
        throw DimMismatchError("add_embedding: vector dim " +
                               std::to_string(record.vector.size()) +
                               " != store dim " + std::to_string(dim_));
    std::unique_lock lock(mutex_);
    auto it = index_by_id_.find(record.orb_id);
    if (it != index_by_id_.end()) {
        records_[it->second] = std::move(record);
    } else {
        index_by_id_.emplace(record.orb_id, records_.size());
        records_.push_back(std::move(record));
    }
}

RetrievalResult VectorStore::query_topk(const EmbeddingVector& query,
                                        size_t k) const {
    if (query.size() != dim_)
        throw DimMismatchError("query_topk: query dim mismatch");
    if (k == 0) throw DomainError("query_topk: k must be >= 1");

    std::shared_lock lock(mutex_);
    struct Scored {
        double score;
        size_t idx;
    };
    std::vector<Scored> scored;
    scored.reserve(records_.size());
    for (size_t i = 0; i < records_.size(); ++i)
        scored.push_back({dot(query, records_[i].vector), i});

    auto better = [&](const Scored& a, const Scored& b) {
        if (a.score != b.score) return a.score > b.score;
        return records_[a.idx].orb_id < records_[b.idx].orb_id;
    };
    size_t take = std::min(k, scored.size());
    std::partial_sort(scored.begin(), scored.begin() + take, scored.end(),
                      better);

    RetrievalResult result;
    result.k_requested = k;
    result.hits.reserve(take);
    for (size_t i = 0; i < take; ++i) {
        const VectorRecord& r = records_[scored[i].idx];
        result.hits.push_back({r.orb_id, r.document, r.metadata,
                               scored[i].score});
    }
    return result;
}

void VectorStore::snapshot() {
    if (data_dir_.empty()) return;
    std::shared_lock lock(mutex_);
    fs::path tmp = data_dir_ / (std::string(kVectorsFile) + ".tmp");
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out) throw StorageError("cannot write vectors.bin");
        out.write(kMagic, 4);
        write_pod(out, kFormatVersion);
        write_pod(out, uint32_t(dim_));
        write_pod(out, uint64_t(records_.size()));
        for (const VectorRecord& r : records_) {
            std::string meta = r.metadata.dump();
            write_pod(out, uint16_t(r.orb_id.size()));
            out.write(r.orb_id.data(), std::streamsize(r.orb_id.size()));
            write_pod(out, uint32_t(r.document.size()));
            out.write(r.document.data(), std::streamsize(r.document.size()));
            write_pod(out, uint32_t(meta.size()));
            out.write(meta.data(), std::streamsize(meta.size()));
            out.write(reinterpret_cast<const char*>(r.vector.data()),
                      std::streamsize(r.vector.size() * sizeof(float)));
        }
        out.flush();
        if (!out) throw StorageError("vectors.bin write failed");
    }
    fs::rename(tmp, data_dir_ / kVectorsFile);
}

void VectorStore::load() {
    if (data_dir_.empty()) return;
    std::unique_lock lock(mutex_);
    std::ifstream in(data_dir_ / kVectorsFile, std::ios::binary);
    if (!in) throw StorageError("cannot open vectors.bin");
    char magic[4];
    in.read(magic, 4);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw FormatVersionError("vectors.bin: bad magic");
    uint32_t version = read_pod<uint32_t>(in);
    if (version != kFormatVersion)
        throw FormatVersionError("vectors.bin: unknown version " +
                                 std::to_string(version));
    uint32_t dim = read_pod<uint32_t>(in);
    if (dim != dim_)
        throw DimMismatchError("vectors.bin: dim " + std::to_string(dim) +
                               " != configured " + std::to_string(dim_));
    uint64_t count = read_pod<uint64_t>(in);

    records_.clear();
    index_by_id_.clear();
    records_.reserve(count);
    for (uint64_t i = 0; i < count; ++i) {
        VectorRecord r;
        uint16_t id_len = read_pod<uint16_t>(in);
        r.orb_id.resize(id_len);
        in.read(r.orb_id.data(), id_len);
        uint32_t doc_len = read_pod<uint32_t>(in);
        r.document.resize(doc_len);
        in.read(r.document.data(), doc_len);
        uint32_t meta_len = read_pod<uint32_t>(in);
        std::string meta(meta_len, '\0');
        in.read(meta.data(), meta_len);
        r.vector.resize(dim_);
        in.read(reinterpret_cast<char*>(r.vector.data()),
                std::streamsize(dim_ * sizeof(float)));
        if (!in) throw StorageError("vectors.bin truncated record");
        try {
            r.metadata = Json::parse(meta);
        } catch (const Json::exception&) {
            throw StorageError("vectors.bin: bad metadata JSON");
        }
        index_by_id_[r.orb_id] = records_.size();
        records_.push_back(std::move(r));
    }
}

}  // namespace memorb
