#pragma once

#include <optional>
#include <string>
#include <vector>

#include "memorb/embedder.hpp"
#include "memorb/llm.hpp"
#include "memorb/vector_store.hpp"

namespace memorb {

struct RetrievalRequest {
    std::string query;                       // current user message
    std::string context;                     // running dialogue context
    size_t k = 5;
    std::optional<std::string> requesting_user;
};

struct AugmentedPrompt {
    std::string text;
    std::vector<std::string> injected_orb_ids;
};

// Rewrite stage: prompts the adapter to compress query + context into a
// concise retrieval-oriented question. Empty context omits the context block.
std::string rewrite_query(LlmAdapter& model, const std::string& query,
                          const std::string& context);

// Full three-stage pipeline: rewrite, embed, exact top-k. No user
// filtering: cross-user retrieval is the default. With cross_user=false
// (ablation), k is forced to 1 regardless of request.k.
RetrievalResult retrieve(const RetrievalRequest& request, LlmAdapter& model,
                         const Embedder& embedder, const VectorStore& store,
                         bool cross_user = true);

// Prepends a memory block to the base prompt. orb_texts must align with
// result.hits (one injected text per hit, rank order preserved).
AugmentedPrompt augment_prompt(const std::string& base,
                               const RetrievalResult& result,
                               const std::vector<std::string>& orb_texts);

}  // namespace memorb
