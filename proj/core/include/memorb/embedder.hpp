#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

namespace memorb {

using EmbeddingVector = std::vector<float>;

// Text -> fixed-dimension vector. The same instance must be used at
// indexing and at query time; implementations must be deterministic.
class Embedder {
public:
    virtual ~Embedder() = default;
    virtual size_t dim() const = 0;
    virtual EmbeddingVector embed(std::string_view text) const = 0;
};

// Deterministic test embedder: signed feature hashing of word 3-grams and
// character 4-grams into dim buckets, then L2 normalization. Empty text
// (or text producing no features) yields the zero vector.
class HashingEmbedder final : public Embedder {
public:
    explicit HashingEmbedder(size_t dim = 768);

    size_t dim() const override { return dim_; }
    EmbeddingVector embed(std::string_view text) const override;

private:
    size_t dim_;
};

// Remote embedder client: HTTP POST {"text": ...} -> {"embedding": [...]}.
// Satisfies the same determinism contract as long as the remote side does.
class RemoteEmbedder final : public Embedder {
public:
    RemoteEmbedder(std::string endpoint, size_t dim, std::string auth_token = "");

    size_t dim() const override { return dim_; }
    EmbeddingVector embed(std::string_view text) const override;  // throws TransportError

private:
    std::string endpoint_;
    size_t dim_;
    std::string auth_token_;
};

double dot(const EmbeddingVector& a, const EmbeddingVector& b);
double l2_norm(const EmbeddingVector& v);
double cosine(const EmbeddingVector& a, const EmbeddingVector& b);

}  // namespace memorb
