#pragma once

#include <filesystem>
#include <fstream>
#include <map>
#include <mutex>
#include <optional>
#include <shared_mutex>
#include <string>

#include "memorb/orb.hpp"

namespace memorb {

enum class StoredFlag { created, updated };

// Orb metadata store: upsert-by-id map, durably backed by an append-only
// JSONL log plus an optional compacted snapshot. With an empty directory
// path the store is purely in-memory.
class MetadataStore {
public:
    explicit MetadataStore(std::filesystem::path data_dir = {});

    StoredFlag save_orb(const Orb& orb);                 // throws StorageError
    std::optional<Orb> fetch_orb(const std::string& id) const;  // throws MalformedIdError
    size_t size() const;

    // Writes orbs.snapshot.jsonl and truncates the log.
    void snapshot();
    // Reconstructs state from snapshot + log; last write per id wins.
    void load();

    // Ordered by timestamp ascending (insertion time for equal stamps);
    // used by the reflect-over-recent pipeline.
    std::vector<Orb> most_recent(size_t m) const;

    static constexpr const char* kLogFile = "orbs.jsonl";
    static constexpr const char* kSnapshotFile = "orbs.snapshot.jsonl";

private:
    void append_log(const Orb& orb);
    void load_jsonl(const std::filesystem::path& file);

    std::filesystem::path data_dir_;
    mutable std::shared_mutex mutex_;
    std::map<std::string, Orb> orbs_;
    uint64_t next_seq_ = 0;
    std::map<std::string, uint64_t> insert_seq_;  // id -> arrival order
    std::ofstream log_;
};

}  // namespace memorb
