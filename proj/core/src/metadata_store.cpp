#include "memorb/metadata_store.hpp"

#include <algorithm>

#include "memorb/errors.hpp"

namespace memorb {

namespace fs = std::filesystem;

MetadataStore::MetadataStore(fs::path data_dir) : data_dir_(std::move(data_dir)) {
    if (data_dir_.empty()) return;
    std::error_code ec;
    fs::create_directories(data_dir_, ec);
    if (ec) throw StorageError("cannot create data dir: " + data_dir_.string());
    load();
    log_.open(data_dir_ / kLogFile, std::ios::app);
    if (!log_) throw StorageError("cannot open orb log for append");
}

StoredFlag MetadataStore::save_orb(const Orb& orb) {
    if (!orb_valid(orb)) throw Error("save_orb: invalid orb");
    std::unique_lock lock(mutex_);
    auto [it, inserted] = orbs_.insert_or_assign(orb.id, orb);
    if (inserted) insert_seq_[orb.id] = next_seq_++;
    append_log(orb);
    return inserted ? StoredFlag::created : StoredFlag::updated;
}

std::optional<Orb> MetadataStore::fetch_orb(const std::string& id) const {
    if (!is_hex64(id)) throw MalformedIdError("fetch_orb: id is not hex64");
    std::shared_lock lock(mutex_);
    auto it = orbs_.find(id);
    if (it == orbs_.end()) return std::nullopt;
    return it->second;
}

size_t MetadataStore::size() const {
    std::shared_lock lock(mutex_);
    return orbs_.size();
}

void MetadataStore::append_log(const Orb& orb) {
    if (data_dir_.empty()) return;
    if (!log_.is_open()) {
        log_.open(data_dir_ / kLogFile, std::ios::app);
        if (!log_) throw StorageError("cannot open orb log for append");
    }
    log_ << orb_to_json(orb).dump() << '\n';
    log_.flush();
    if (!log_) throw StorageError("orb log write failed");
}

void MetadataStore::snapshot() {
    if (data_dir_.empty()) return;
    std::unique_lock lock(mutex_);
    fs::path tmp = data_dir_ / (std::string(kSnapshotFile) + ".tmp");
    {
        std::ofstream out(tmp, std::ios::trunc);
        if (!out) throw StorageError("cannot write orb snapshot");
        // map iteration order (id ascending) keeps snapshots byte-stable
        std::vector<const Orb*> ordered;
        ordered.reserve(orbs_.size());
        for (auto& [id, orb] : orbs_) ordered.push_back(&orb);
        std::sort(ordered.begin(), ordered.end(),
                  [&](const Orb* a, const Orb* b) {
                      return insert_seq_.at(a->id) < insert_seq_.at(b->id);
                  });
        for (const Orb* orb : ordered) out << orb_to_json(*orb).dump() << '\n';
        out.flush();
        if (!out) throw StorageError("orb snapshot write failed");
    }
    fs::rename(tmp, data_dir_ / kSnapshotFile);
    log_.close();
    std::ofstream trunc(data_dir_ / kLogFile, std::ios::trunc);
    trunc.close();
    log_.open(data_dir_ / kLogFile, std::ios::app);
    if (!log_) throw StorageError("cannot reopen orb log");
}

void MetadataStore::load_jsonl(const fs::path& file) {
    std::ifstream in(file);
    if (!in) return;
    std::string line;
    size_t lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (line.empty()) continue;
        Json j;
        try {
            j = Json::parse(line);
        } catch (const Json::exception&) {
            throw StorageError(file.string() + ":" + std::to_string(lineno) +
                               ": bad JSON line");
        }
        Orb orb = orb_from_json(j);
        auto [it, inserted] = orbs_.insert_or_assign(orb.id, orb);
        if (inserted) insert_seq_[orb.id] = next_seq_++;
    }
}

void MetadataStore::load() {
    if (data_dir_.empty()) return;
    std::unique_lock lock(mutex_);
    orbs_.clear();
    insert_seq_.clear();
    next_seq_ = 0;
    load_jsonl(data_dir_ / kSnapshotFile);
    load_jsonl(data_dir_ / kLogFile);
}

std::vector<Orb> MetadataStore::most_recent(size_t m) const {
    std::shared_lock lock(mutex_);
    std::vector<const Orb*> ordered;
    ordered.reserve(orbs_.size());
    for (auto& [id, orb] : orbs_) ordered.push_back(&orb);
    std::sort(ordered.begin(), ordered.end(), [&](const Orb* a, const Orb* b) {
        if (a->timestamp != b->timestamp) return a->timestamp < b->timestamp;
        return insert_seq_.at(a->id) < insert_seq_.at(b->id);
    });
    size_t take = std::min(m, ordered.size());
    std::vector<Orb> out;
    out.reserve(take);
    for (size_t i = ordered.size() - take; i < ordered.size(); ++i)
        out.push_back(*ordered[i]);
    return out;
}

}  // namespace memorb
