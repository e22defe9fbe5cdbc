#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "memorb/clock.hpp"

#include <json.hpp>

namespace memorb {

using Json = nlohmann::json;          // object keys kept sorted (canonical)
using OrderedJson = nlohmann::ordered_json;  // insertion order (wire encoding)

// Structured per-episode scores. success is derived (reward > 0.5), never
// stored as a field of its own.
struct RewardDetail {
    double reward = 0.0;
    double action = 0.0;
    double search = 0.0;
    double output = 0.0;

    bool success() const { return reward > 0.5; }
    bool valid() const;

    bool operator==(const RewardDetail&) const = default;
};

struct Turn {
    std::string user_utterance;
    std::string agent_action;  // includes rendered tool-call records
    std::optional<RewardDetail> reward;  // typically only on the final turn
};

struct Trajectory {
    std::vector<Turn> turns;
    std::string scenario;
    std::string user_id;
    std::string shop_id;
    std::string platform;

    // An episode is complete when the final turn carries a RewardDetail.
    bool complete() const {
        return !turns.empty() && turns.back().reward.has_value();
    }
    const RewardDetail& final_reward() const { return *turns.back().reward; }
};

// The memory unit. Immutable value; id is content-addressed over
// (obs, emotion, outcome).
struct Orb {
    std::string id;       // 64-char lowercase hex SHA-256
    std::string obs;      // concatenated user utterances / system prompt
    std::string emotion;  // categorical label, e.g. "frustrated"
    std::string outcome;  // distilled policy reflection
    Json context = Json::object();  // flat map of string -> scalar-or-string
    Instant timestamp;

    bool operator==(const Orb&) const = default;
};

// --- orb_core operations ---------------------------------------------------

// Canonical context rendering: keys sorted bytewise, compact JSON, "{}"
// for the empty map. Insertion order never affects the output.
std::string context_to_string(const Json& context);

// SHA-256 over obs || 0x1F || emotion || 0x1F || outcome, lowercase hex.
std::string compute_id(std::string_view obs, std::string_view emotion,
                       std::string_view outcome);

// Document serialization for embedding/indexing:
//   obs \n emotion \n outcome \n context_to_string(context)
// timestamp and id are deliberately excluded.
std::string render_document(const Orb& orb);

// Builds an Orb with a freshly computed id.
Orb make_orb(std::string obs, std::string emotion, std::string outcome,
             Json context, Instant timestamp);

bool is_hex64(std::string_view s);
bool emotion_label_valid(std::string_view s);  // [a-z][a-z_]*

// Checks every Orb invariant (content address, non-empty fields, label shape).
bool orb_valid(const Orb& orb);

// Wire/persistence encoding: keys id, obs, emotion, outcome, context,
// timestamp, in that order.
OrderedJson orb_to_json(const Orb& orb);
Orb orb_from_json(const Json& j);  // throws Error on malformed input

}  // namespace memorb
