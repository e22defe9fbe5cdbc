#pragma once

#include <string>
#include <string_view>

#include "memorb/orb.hpp"

namespace memorb {

// Minimal JSON-over-HTTP client helpers. base_url is "host:port" or
// "http://host:port". Throws TransportError on connection or non-2xx.
Json http_post_json(const std::string& base_url, const std::string& path,
                    const Json& body, const std::string& auth_token = "");

Json http_get_json(const std::string& base_url, const std::string& path);

}  // namespace memorb
