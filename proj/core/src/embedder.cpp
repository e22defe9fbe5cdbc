#include "memorb/embedder.hpp"

#include <cctype>

#include <cmath>

#include "memorb/errors.hpp"
#include "memorb/http_client.hpp"

#include <json.hpp>

namespace memorb {

namespace {

// Seeded 64-bit FNV-1a with a splitmix64 finalizer for avalanche.
// 0x5EED0B5 is the fixed embedder seed; changing it changes every vector.
constexpr uint64_t kHashSeed = 0x5EED0B5ULL;

uint64_t hash_feature(std::string_view s) {
    uint64_t h = 0xcbf29ce484222325ULL ^ kHashSeed;
    for (unsigned char c : s) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    h += 0x9e3779b97f4a7c15ULL;
    h = (h ^ (h >> 30)) * 0xbf58476d1ce4e5b9ULL;
    h = (h ^ (h >> 27)) * 0x94d049bb133111ebULL;
    return h ^ (h >> 31);
}

void add_feature(std::vector<double>& acc, std::string_view feature) {
    uint64_t h = hash_feature(feature);
    size_t bucket = size_t(h % acc.size());
    double sign = (h >> 63) ? -1.0 : 1.0;
    acc[bucket] += sign;
}

std::vector<std::string_view> split_words(std::string_view text) {
    std::vector<std::string_view> words;
    size_t i = 0;
    while (i < text.size()) {
        while (i < text.size() && std::isspace((unsigned char)text[i])) ++i;
        size_t start = i;
        while (i < text.size() && !std::isspace((unsigned char)text[i])) ++i;
        if (i > start) words.push_back(text.substr(start, i - start));
    }
    return words;
}

}  // namespace

HashingEmbedder::HashingEmbedder(size_t dim) : dim_(dim) {
    if (dim_ == 0) throw DomainError("embedding dim must be positive");
}

EmbeddingVector HashingEmbedder::embed(std::string_view text) const {
    std::vector<double> acc(dim_, 0.0);

    // word 3-grams
    auto words = split_words(text);
    std::string buf;
    for (size_t i = 0; i + 3 <= words.size(); ++i) {
        buf.assign("w3:");
        buf += words[i];
        buf += '\x1f';
        buf += words[i + 1];
        buf += '\x1f';
        buf += words[i + 2];
        add_feature(acc, buf);
    }

    // character 4-grams over the raw text
    for (size_t i = 0; i + 4 <= text.size(); ++i) {
        buf.assign("c4:");
        buf.append(text.substr(i, 4));
        add_feature(acc, buf);
    }

    double norm_sq = 0.0;
    for (double v : acc) norm_sq += v * v;
    EmbeddingVector out(dim_, 0.0f);
    if (norm_sq > 0.0) {
        double inv = 1.0 / std::sqrt(norm_sq);
        for (size_t i = 0; i < dim_; ++i) out[i] = float(acc[i] * inv);
    }
    return out;
}

RemoteEmbedder::RemoteEmbedder(std::string endpoint, size_t dim,
                               std::string auth_token)
    : endpoint_(std::move(endpoint)), dim_(dim),
      auth_token_(std::move(auth_token)) {}

EmbeddingVector RemoteEmbedder::embed(std::string_view text) const {
    Json body;
    body["text"] = std::string(text);
    Json resp = http_post_json(endpoint_, "/v1/embed", body, auth_token_);
    if (!resp.contains("embedding") || !resp["embedding"].is_array())
        throw TransportError("embed endpoint returned no embedding array");
    EmbeddingVector v = resp["embedding"].get<EmbeddingVector>();
    if (v.size() != dim_)
        throw DimMismatchError("remote embedding dim mismatch");
    return v;
}

double dot(const EmbeddingVector& a, const EmbeddingVector& b) {
    double s = 0.0;
    for (size_t i = 0; i < a.size(); ++i) s += double(a[i]) * double(b[i]);
    return s;
}

double l2_norm(const EmbeddingVector& v) { return std::sqrt(dot(v, v)); }

double cosine(const EmbeddingVector& a, const EmbeddingVector& b) {
    double na = l2_norm(a), nb = l2_norm(b);
    if (na == 0.0 || nb == 0.0) return 0.0;
    return dot(a, b) / (na * nb);
}

}  // namespace memorb
