#include "memorb/retriever.hpp"

#include "memorb/errors.hpp"
#include "memorb/prompt_template.hpp"

namespace memorb {

std::string rewrite_query(LlmAdapter& model, const std::string& query,
                          const std::string& context) {
    if (query.empty()) throw DomainError("rewrite_query: empty query");
    std::string prompt =
        context.empty()
            ? render_template(templates::kRewritePromptNoContext,
                              {{"query", query}})
            : render_template(templates::kRewritePrompt,
                              {{"query", query}, {"context", context}});
    return model.complete(prompt);
}

RetrievalResult retrieve(const RetrievalRequest& request, LlmAdapter& model,
                         const Embedder& embedder, const VectorStore& store,
                         bool cross_user) {
    if (request.k == 0) throw DomainError("retrieve: k must be >= 1");
    std::string rewritten = rewrite_query(model, request.query, request.context);
    EmbeddingVector query_vec = embedder.embed(rewritten);
    size_t k = cross_user ? request.k : 1;
    return store.query_topk(query_vec, k);
}

AugmentedPrompt augment_prompt(const std::string& base,
                               const RetrievalResult& result,
                               const std::vector<std::string>& orb_texts) {
    if (orb_texts.size() != result.hits.size())
        throw DomainError("augment_prompt: orb_texts misaligned with hits");

    AugmentedPrompt out;
    if (result.hits.empty()) {
        out.text = base;
        return out;
    }
    out.text = "## Relevant past reflections\n";
    for (size_t i = 0; i < result.hits.size(); ++i) {
        const std::string& id = result.hits[i].orb_id;
        out.text += "- [" + id.substr(0, 8) + "] " + orb_texts[i] + "\n";
        out.injected_orb_ids.push_back(id);
    }
    out.text += "\n";
    out.text += base;
    return out;
}

}  // namespace memorb
