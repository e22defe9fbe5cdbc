#include "memorb/orb.hpp"

#include "memorb/errors.hpp"
#include "memorb/sha256.hpp"

namespace memorb {

bool RewardDetail::valid() const {
    auto in01 = [](double v) { return v >= 0.0 && v <= 1.0; };
    return in01(reward) && in01(action) && in01(search) && in01(output);
}

std::string context_to_string(const Json& context) {
    if (!context.is_object()) throw Error("context must be a JSON object");
    // nlohmann::json objects are std::map-backed, so dump() is already
    // sorted bytewise and insertion-order independent.
    return context.dump();
}

std::string compute_id(std::string_view obs, std::string_view emotion,
                       std::string_view outcome) {
    static constexpr char kFieldSep = '\x1f';
    Sha256 h;
    h.update(obs);
    h.update(&kFieldSep, 1);
    h.update(emotion);
    h.update(&kFieldSep, 1);
    h.update(outcome);
    return h.hex_digest();
}

std::string render_document(const Orb& orb) {
    std::string doc;
    doc.reserve(orb.obs.size() + orb.emotion.size() + orb.outcome.size() + 16);
    doc += orb.obs;
    doc += '\n';
    doc += orb.emotion;
    doc += '\n';
    doc += orb.outcome;
    doc += '\n';
    doc += context_to_string(orb.context);
    return doc;
}

Orb make_orb(std::string obs, std::string emotion, std::string outcome,
             Json context, Instant timestamp) {
    Orb orb;
    orb.id = compute_id(obs, emotion, outcome);
    orb.obs = std::move(obs);
    orb.emotion = std::move(emotion);
    orb.outcome = std::move(outcome);
    orb.context = std::move(context);
    orb.timestamp = timestamp;
    return orb;
}

bool is_hex64(std::string_view s) {
    if (s.size() != 64) return false;
    for (char c : s) {
        bool ok = (c >= '0' && c <= '9') || (c >= 'a' && c <= 'f');
        if (!ok) return false;
    }
    return true;
}

bool emotion_label_valid(std::string_view s) {
    if (s.empty()) return false;
    if (s[0] < 'a' || s[0] > 'z') return false;
    for (char c : s.substr(1)) {
        if (!((c >= 'a' && c <= 'z') || c == '_')) return false;
    }
    return true;
}

bool orb_valid(const Orb& orb) {
    if (!is_hex64(orb.id)) return false;
    if (orb.obs.empty() || orb.outcome.empty()) return false;
    if (!emotion_label_valid(orb.emotion)) return false;
    if (!orb.context.is_object()) return false;
    return orb.id == compute_id(orb.obs, orb.emotion, orb.outcome);
}

OrderedJson orb_to_json(const Orb& orb) {
    OrderedJson j;
    j["id"] = orb.id;
    j["obs"] = orb.obs;
    j["emotion"] = orb.emotion;
    j["outcome"] = orb.outcome;
    j["context"] = orb.context;
    j["timestamp"] = orb.timestamp.to_rfc3339();
    return j;
}

Orb orb_from_json(const Json& j) {
    if (!j.is_object()) throw Error("orb JSON must be an object");
    Orb orb;
    try {
        orb.id = j.at("id").get<std::string>();
        orb.obs = j.at("obs").get<std::string>();
        orb.emotion = j.at("emotion").get<std::string>();
        orb.outcome = j.at("outcome").get<std::string>();
        orb.context = j.at("context");
        auto ts = Instant::parse_rfc3339(j.at("timestamp").get<std::string>());
        if (!ts) throw Error("bad timestamp");
        orb.timestamp = *ts;
    } catch (const Json::exception& e) {
        throw Error(std::string("malformed orb JSON: ") + e.what());
    }
    if (!orb_valid(orb)) throw Error("orb JSON violates invariants");
    return orb;
}

}  // namespace memorb
