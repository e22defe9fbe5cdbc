#include "memorb/http_client.hpp"

#include "memorb/errors.hpp"

#include <httplib.h>

namespace memorb {

namespace {

std::string normalize_base(const std::string& base_url) {
    if (base_url.rfind("http://", 0) == 0 || base_url.rfind("https://", 0) == 0)
        return base_url;
    return "http://" + base_url;
}

Json parse_body(const httplib::Result& res, const std::string& what) {
    if (!res)
        throw TransportError(what + ": connection failed (" +
                             httplib::to_string(res.error()) + ")");
    if (res->status < 200 || res->status >= 300)
        throw TransportError(what + ": HTTP " + std::to_string(res->status));
    try {
        return Json::parse(res->body);
    } catch (const Json::exception&) {
        throw TransportError(what + ": response is not valid JSON");
    }
}

}  // namespace

Json http_post_json(const std::string& base_url, const std::string& path,
                    const Json& body, const std::string& auth_token) {
    httplib::Client cli(normalize_base(base_url));
    cli.set_connection_timeout(10);
    cli.set_read_timeout(60);
    httplib::Headers headers;
    if (!auth_token.empty())
        headers.emplace("Authorization", "Bearer " + auth_token);
    auto res = cli.Post(path, headers, body.dump(), "application/json");
    return parse_body(res, "POST " + path);
}

Json http_get_json(const std::string& base_url, const std::string& path) {
    httplib::Client cli(normalize_base(base_url));
    cli.set_connection_timeout(10);
    cli.set_read_timeout(60);
    auto res = cli.Get(path);
    return parse_body(res, "GET " + path);
}

}  // namespace memorb
