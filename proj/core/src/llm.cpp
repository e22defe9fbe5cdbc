#include "memorb/llm.hpp"

#include "memorb/errors.hpp"
#include "memorb/http_client.hpp"

namespace memorb {

RemoteLlmAdapter::RemoteLlmAdapter(std::string endpoint, std::string auth_token)
    : endpoint_(std::move(endpoint)), auth_token_(std::move(auth_token)) {}

std::string RemoteLlmAdapter::complete(const std::string& prompt) {
    Json body;
    body["prompt"] = prompt;
    Json resp = http_post_json(endpoint_, "/v1/complete", body, auth_token_);
    if (!resp.contains("completion") || !resp["completion"].is_string())
        throw TransportError("LLM endpoint returned no completion");
    std::string text = resp["completion"].get<std::string>();
    if (text.empty()) throw TransportError("LLM endpoint returned empty text");
    return text;
}

std::string extract_query_from_rewrite_prompt(const std::string& prompt) {
    static const std::string kMarker = "Current query:\n";
    size_t pos = prompt.rfind(kMarker);
    if (pos == std::string::npos) return "";
    std::string q = prompt.substr(pos + kMarker.size());
    while (!q.empty() && (q.back() == '\n' || q.back() == ' ')) q.pop_back();
    return q;
}

namespace {

std::string extract_section(const std::string& prompt, const std::string& header) {
    size_t pos = prompt.find(header);
    if (pos == std::string::npos) return "";
    size_t start = pos + header.size();
    size_t end = prompt.find("\n\n", start);
    std::string s = prompt.substr(start, end == std::string::npos
                                             ? std::string::npos
                                             : end - start);
    while (!s.empty() && s.back() == '\n') s.pop_back();
    return s;
}

std::string default_complete(const std::string& prompt) {
    // Rewrite prompts: identity transform on the carried query.
    std::string q = extract_query_from_rewrite_prompt(prompt);
    if (!q.empty()) return q;

    // Reflection prompts: emit a format-conforming reflection.
    if (prompt.find("Overall result:") != std::string::npos) {
        bool success = prompt.find("Overall result: Success") != std::string::npos;
        std::string scenario = extract_section(prompt, "Task Scenario\n");
        std::string head = success ? "I succeeded in this mission"
                                   : "I failed in this mission";
        std::string reflection = head + " while handling: " + scenario + ". ";
        if (success) {
            reflection +=
                "The chosen tool sequence satisfied the customer request. "
                "New Plan: keep the current tool sequence and verify "
                "parameters before each call.";
        } else {
            reflection +=
                "Key decision points went wrong during execution. "
                "New Plan: re-check tool selection and input parameters for "
                "this scenario before acting.";
        }
        return reflection;
    }

    // Recent-reflection summaries: fold the listed outcomes into one line.
    std::string recent = extract_section(prompt, "Recent reflections:\n");
    if (!recent.empty()) {
        std::string para = "Recent strategy summary: ";
        for (char c : recent) para += (c == '\n') ? ' ' : c;
        return para;
    }

    return "OK";
}

}  // namespace

std::shared_ptr<LlmAdapter> make_default_scripted_adapter() {
    return std::make_shared<ScriptedAdapter>(default_complete);
}

}  // namespace memorb
