#include <benchmark/benchmark.h>

#include <cstdio>
#include <cmath>
#include <random>
#include <string>

#include "memorb/embedder.hpp"
#include "memorb/orb.hpp"
#include "memorb/vector_store.hpp"

using namespace memorb;

namespace {

void fill_store(VectorStore& store, size_t count, size_t dim,
                std::mt19937_64& rng) {
    std::normal_distribution<float> gauss(0.0f, 1.0f);
    for (size_t i = 0; i < count; ++i) {
        VectorRecord r;
        char id[80];
        std::snprintf(id, sizeof(id), "%064zx", i);
        r.orb_id = id;
        r.document = "doc " + std::to_string(i);
        r.vector.resize(dim);
        float norm_sq = 0.0f;
        for (auto& x : r.vector) {
            x = gauss(rng);
            norm_sq += x * x;
        }
        for (auto& x : r.vector) x /= std::sqrt(norm_sq);
        store.add_embedding(r);
    }
}

void BM_query_topk(benchmark::State& state) {
    std::mt19937_64 rng(42);
    size_t count = size_t(state.range(0));
    const size_t dim = 768;
    VectorStore store(dim);
    fill_store(store, count, dim, rng);
    std::normal_distribution<float> gauss(0.0f, 1.0f);
    EmbeddingVector query(dim);
    for (auto& x : query) x = gauss(rng);
    for (auto _ : state) {
        auto result = store.query_topk(query, 5);
        benchmark::DoNotOptimize(result);
    }
    state.SetItemsProcessed(int64_t(state.iterations()) * int64_t(count));
}
BENCHMARK(BM_query_topk)->Arg(1000)->Arg(10000)->Arg(50000);

void BM_embed(benchmark::State& state) {
    HashingEmbedder embedder(768);
    std::string text =
        "I failed in this mission because the refund was issued before the "
        "courier confirmed the return pickup for the damaged kettle order.\n"
        "New Plan: wait for the pickup confirmation before issuing refunds.";
    for (auto _ : state) {
        auto v = embedder.embed(text);
        benchmark::DoNotOptimize(v);
    }
    state.SetBytesProcessed(int64_t(state.iterations()) *
                            int64_t(text.size()));
}
BENCHMARK(BM_embed);

void BM_compute_id(benchmark::State& state) {
    std::string obs(512, 'x');
    for (auto _ : state) {
        auto id = compute_id(obs, "neutral", "I failed in this mission.");
        benchmark::DoNotOptimize(id);
    }
}
BENCHMARK(BM_compute_id);

}  // namespace

BENCHMARK_MAIN();
