#pragma once

#include <chrono>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace memorb {

// UTC instant with microsecond precision. Wire form is RFC 3339 with
// fractional seconds, e.g. "2025-09-05T15:22:44.418306Z".
struct Instant {
    int64_t micros_since_epoch = 0;

    static Instant now();
    static Instant from_micros(int64_t us) { return Instant{us}; }

    std::string to_rfc3339() const;
    static std::optional<Instant> parse_rfc3339(std::string_view s);

    auto operator<=>(const Instant&) const = default;
};

}  // namespace memorb
