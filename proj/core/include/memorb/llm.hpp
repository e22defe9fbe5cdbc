#pragma once

#include <functional>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace memorb {

// Text-completion adapter. No training surface exists on purpose: the
// backing model stays frozen. Implementations declare their own
// thread-safety; scripted backends are immutable and fully shareable.
class LlmAdapter {
public:
    virtual ~LlmAdapter() = default;
    virtual std::string complete(const std::string& prompt) = 0;  // may throw TransportError
};

// Deterministic backend driven by a pure prompt -> completion function.
class ScriptedAdapter final : public LlmAdapter {
public:
    using Fn = std::function<std::string(const std::string&)>;
    explicit ScriptedAdapter(Fn fn) : fn_(std::move(fn)) {}

    std::string complete(const std::string& prompt) override { return fn_(prompt); }

private:
    Fn fn_;
};

// Wraps another adapter and records every prompt it sees. Test utility.
class RecordingAdapter final : public LlmAdapter {
public:
    explicit RecordingAdapter(std::shared_ptr<LlmAdapter> inner)
        : inner_(std::move(inner)) {}

    std::string complete(const std::string& prompt) override {
        {
            std::lock_guard lock(mutex_);
            prompts_.push_back(prompt);
        }
        return inner_->complete(prompt);
    }

    std::vector<std::string> prompts() const {
        std::lock_guard lock(mutex_);
        return prompts_;
    }

private:
    std::shared_ptr<LlmAdapter> inner_;
    mutable std::mutex mutex_;
    std::vector<std::string> prompts_;
};

// HTTP backend: POST {"prompt": ...} -> {"completion": ...}.
class RemoteLlmAdapter final : public LlmAdapter {
public:
    RemoteLlmAdapter(std::string endpoint, std::string auth_token = "");

    std::string complete(const std::string& prompt) override;

private:
    std::string endpoint_;
    std::string auth_token_;
};

// Default local backend when no LLM endpoint is configured: emits a
// deterministic, format-conforming reflection keyed off the rendered
// prompt (scenario excerpt + success flag). For rewrite-style prompts it
// echoes the text after the final "Current query:" marker, making the
// rewrite stage an identity transform.
std::shared_ptr<LlmAdapter> make_default_scripted_adapter();

// Extracts the query text a rewrite prompt carries; empty if no marker.
std::string extract_query_from_rewrite_prompt(const std::string& prompt);

}  // namespace memorb
