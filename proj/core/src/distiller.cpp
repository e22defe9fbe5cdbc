#include "memorb/distiller.hpp"

#include <algorithm>
#include <cctype>
#include <cstdio>

#include "memorb/errors.hpp"
#include "memorb/prompt_template.hpp"

namespace memorb {

namespace {

std::string to_lower(std::string_view s) {
    std::string out(s);
    std::transform(out.begin(), out.end(), out.begin(),
                   [](unsigned char c) { return char(std::tolower(c)); });
    return out;
}

bool matches_any(const std::string& lowered,
                 const std::vector<std::string>& entries) {
    for (const std::string& e : entries)
        if (lowered.find(e) != std::string::npos) return true;
    return false;
}

}  // namespace

std::string tag_emotion(std::string_view utterance,
                        const EmotionLexicon& lexicon) {
    std::string lowered = to_lower(utterance);
    if (matches_any(lowered, lexicon.negative)) return "frustrated";
    if (matches_any(lowered, lexicon.positive)) return "satisfied";
    return "neutral";
}

std::string format_messages(const Trajectory& trajectory) {
    std::string out;
    for (const Turn& turn : trajectory.turns) {
        out += "User: " + turn.user_utterance + "\n";
        if (!turn.agent_action.empty())
            out += "Assistant: " + turn.agent_action + "\n";
    }
    if (!out.empty()) out.pop_back();
    return out;
}

std::string format_reward(double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%g", v);
    return buf;
}

std::string render_reflection_prompt(const ReflectionPromptInputs& inputs) {
    bool success = inputs.reward > 0.5;
    std::map<std::string, std::string> values{
        {"platform", inputs.platform},
        {"shop_id", inputs.shop_id},
        {"user_id", inputs.user_id},
        {"scenario_desc", inputs.scenario_desc},
        {"formatted_messages", inputs.formatted_messages},
        {"action_reward", format_reward(inputs.action_reward)},
        {"search_reward", format_reward(inputs.search_reward)},
        {"output_reward", format_reward(inputs.output_reward)},
        {"overall_result", success ? "Success" : "Failure"},
        {"memory_context", inputs.memory_context.empty()
                               ? "No historical reflection"
                               : inputs.memory_context},
        {"result_verb", success ? "succeeded" : "failed"},
    };
    return render_template(templates::kReflectionPrompt, values);
}

std::string policy_reflection(LlmAdapter& model, const Trajectory& trajectory,
                              const std::string& memory_context) {
    if (!trajectory.complete())
        throw IncompleteTrajectoryError(
            "policy_reflection: final turn carries no reward");
    const RewardDetail& r = trajectory.final_reward();
    ReflectionPromptInputs inputs;
    inputs.platform = trajectory.platform;
    inputs.shop_id = trajectory.shop_id;
    inputs.user_id = trajectory.user_id;
    inputs.scenario_desc = trajectory.scenario;
    inputs.formatted_messages = format_messages(trajectory);
    inputs.action_reward = r.action;
    inputs.search_reward = r.search;
    inputs.output_reward = r.output;
    inputs.reward = r.reward;
    inputs.memory_context = memory_context;
    return model.complete(render_reflection_prompt(inputs));
}

ReflectionValidationReport validate_reflection(std::string_view text,
                                               bool success) {
    ReflectionValidationReport report;
    size_t start = text.find_first_not_of(" \t\r\n");
    std::string_view body =
        start == std::string_view::npos ? std::string_view{} : text.substr(start);

    const std::string_view expected_prefix =
        success ? "I succeeded in this mission" : "I failed in this mission";
    report.prefix_ok = body.substr(0, expected_prefix.size()) == expected_prefix;
    if (!report.prefix_ok)
        report.errors.push_back("reflection must begin with \"" +
                                std::string(expected_prefix) + "\"");

    // the plan must come after the mission statement, wherever that sits
    size_t prefix_pos = report.prefix_ok ? 0 : body.find(expected_prefix);
    size_t plan_from =
        prefix_pos == std::string_view::npos ? 0 : prefix_pos + expected_prefix.size();
    size_t plan_pos = body.find("New Plan:", plan_from);
    report.new_plan_ok = plan_pos != std::string_view::npos;
    if (!report.new_plan_ok)
        report.errors.push_back("reflection must contain a \"New Plan:\" summary");
    return report;
}

Orb generate_orb(const Trajectory& trajectory, LlmAdapter& model,
                 const std::string& memory_context, Instant now) {
    if (!trajectory.complete())
        throw IncompleteTrajectoryError(
            "generate_orb: trajectory has no final reward");
    if (trajectory.turns.empty())
        throw IncompleteTrajectoryError("generate_orb: empty trajectory");

    std::string obs;
    for (size_t i = 0; i < trajectory.turns.size(); ++i) {
        if (i > 0) obs += '\n';
        obs += trajectory.turns[i].user_utterance;
    }
    std::string emotion = tag_emotion(trajectory.turns.back().user_utterance);
    std::string outcome = policy_reflection(model, trajectory, memory_context);

    const RewardDetail& r = trajectory.final_reward();
    Json context = Json::object();
    context["reward"] = r.reward;
    context["action"] = r.action;
    context["search"] = r.search;
    context["output"] = r.output;
    context["user_id"] = trajectory.user_id;
    context["shop_id"] = trajectory.shop_id;
    context["platform"] = trajectory.platform;
    context["scenario"] = trajectory.scenario;

    return make_orb(std::move(obs), std::move(emotion), std::move(outcome),
                    std::move(context), now);
}

std::string reflect_over_recent(LlmAdapter& model,
                                const std::vector<Orb>& recent, size_t m) {
    if (m == 0) throw DomainError("reflect_over_recent: m must be >= 1");
    if (recent.empty()) return "";
    size_t take = std::min(m, recent.size());
    std::string reflections;
    // newest last in `recent`; keep the newest `take`
    for (size_t i = recent.size() - take; i < recent.size(); ++i) {
        reflections += "- " + recent[i].outcome;
        if (i + 1 < recent.size()) reflections += '\n';
    }
    std::string prompt = render_template(templates::kRecentSummaryPrompt,
                                         {{"reflections", reflections}});
    return model.complete(prompt);
}

}  // namespace memorb
