#pragma once

#include <memory>
#include <string>
#include <vector>

#include "memorb/llm.hpp"
#include "memorb/orb.hpp"

namespace memorb {

struct ReflectionPromptInputs {
    std::string platform;
    std::string shop_id;
    std::string user_id;
    std::string scenario_desc;
    std::string formatted_messages;
    double action_reward = 0.0;
    double search_reward = 0.0;
    double output_reward = 0.0;
    double reward = 0.0;
    std::string memory_context;  // may be empty
};

struct ReflectionValidationReport {
    bool prefix_ok = false;
    bool new_plan_ok = false;
    std::vector<std::string> errors;

    bool ok() const { return prefix_ok && new_plan_ok; }
};

// Lexicon-based deterministic emotion tagger. Substring match,
// case-insensitive; negative entries outrank positive on conflict.
struct EmotionLexicon {
    std::vector<std::string> negative{"frustrat", "angry", "annoy", "terrible"};
    std::vector<std::string> positive{"thank", "great", "satisf"};
};

std::string tag_emotion(std::string_view utterance,
                        const EmotionLexicon& lexicon = {});

// Renders execution-history lines ("User: ..." / "Assistant: ...") for the
// reflection prompt.
std::string format_messages(const Trajectory& trajectory);

std::string render_reflection_prompt(const ReflectionPromptInputs& inputs);

// Renders the prompt for a complete trajectory and returns the adapter's
// completion verbatim. Format enforcement lives in validate_reflection.
std::string policy_reflection(LlmAdapter& model, const Trajectory& trajectory,
                              const std::string& memory_context);

ReflectionValidationReport validate_reflection(std::string_view text,
                                               bool success);

// Algorithm: obs = utterances joined "\n"; emotion from the final
// utterance; outcome from policy_reflection; context carries the reward
// components plus trajectory identifiers.
Orb generate_orb(const Trajectory& trajectory, LlmAdapter& model,
                 const std::string& memory_context, Instant now);

// Summarizes the outcome texts of the min(m, |recent|) newest orbs into a
// concise paragraph. Empty input returns "" without touching the adapter.
std::string reflect_over_recent(LlmAdapter& model,
                                const std::vector<Orb>& recent, size_t m);

// Reward values rendered for prompts: shortest decimal ("0.6", "1", "0.25").
std::string format_reward(double v);

}  // namespace memorb
