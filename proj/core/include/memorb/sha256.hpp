#pragma once

#include <cstdint>
#include <string>
#include <string_view>

namespace memorb {

// Self-contained SHA-256 (FIPS 180-4). Streaming interface so callers can
// hash delimited field sequences without concatenating into a buffer.
class Sha256 {
public:
    Sha256();

    void update(const void* data, size_t len);
    void update(std::string_view s) { update(s.data(), s.size()); }

    // Finalizes and returns the 64-char lowercase hex digest. The object
    // must not be reused afterwards.
    std::string hex_digest();

    static std::string hash_hex(std::string_view s);

private:
    void process_block(const uint8_t* block);

    uint32_t state_[8];
    uint64_t total_len_ = 0;
    uint8_t buffer_[64];
    size_t buffer_len_ = 0;
};

}  // namespace memorb
