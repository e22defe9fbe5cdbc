#include "memorb/service.hpp"

#include <thread>

#include "memorb/errors.hpp"

#include <httplib.h>

namespace memorb {

Json trajectory_to_json(const Trajectory& t) {
    Json j;
    j["scenario"] = t.scenario;
    j["user_id"] = t.user_id;
    j["shop_id"] = t.shop_id;
    j["platform"] = t.platform;
    Json turns = Json::array();
    for (const Turn& turn : t.turns) {
        Json jt;
        jt["user_utterance"] = turn.user_utterance;
        jt["agent_action"] = turn.agent_action;
        if (turn.reward) {
            jt["reward"] = {{"reward", turn.reward->reward},
                            {"action", turn.reward->action},
                            {"search", turn.reward->search},
                            {"output", turn.reward->output}};
        }
        turns.push_back(std::move(jt));
    }
    j["turns"] = std::move(turns);
    return j;
}

Trajectory trajectory_from_json(const Json& j) {
    Trajectory t;
    try {
        t.scenario = j.value("scenario", "");
        t.user_id = j.value("user_id", "");
        t.shop_id = j.value("shop_id", "");
        t.platform = j.value("platform", "");
        if (!j.contains("turns") || !j["turns"].is_array() || j["turns"].empty())
            throw Error("trajectory needs a non-empty turns array");
        for (const Json& jt : j["turns"]) {
            Turn turn;
            turn.user_utterance = jt.at("user_utterance").get<std::string>();
            if (turn.user_utterance.empty())
                throw Error("turn user_utterance must be non-empty");
            turn.agent_action = jt.value("agent_action", "");
            if (jt.contains("reward")) {
                const Json& jr = jt["reward"];
                RewardDetail r{jr.at("reward").get<double>(),
                               jr.at("action").get<double>(),
                               jr.at("search").get<double>(),
                               jr.at("output").get<double>()};
                if (!r.valid())
                    throw Error("reward components must lie in [0,1]");
                turn.reward = r;
            }
            t.turns.push_back(std::move(turn));
        }
    } catch (const Json::exception& e) {
        throw Error(std::string("malformed trajectory JSON: ") + e.what());
    }
    return t;
}

Json retrieval_result_to_json(const RetrievalResult& r, const Engine& engine) {
    Json j;
    j["k_requested"] = r.k_requested;
    Json hits = Json::array();
    for (const RetrievalHit& hit : r.hits) {
        Json jh;
        jh["orb_id"] = hit.orb_id;
        auto orb = engine.fetch_orb(hit.orb_id);
        jh["text"] = orb ? orb->outcome : hit.document;
        jh["metadata"] = hit.metadata;
        jh["score"] = hit.score;
        hits.push_back(std::move(jh));
    }
    j["hits"] = std::move(hits);
    return j;
}

Json ingest_result_to_json(const IngestResult& r) {
    Json j;
    j["orb_id"] = r.orb_id;
    j["created"] = r.created;
    j["validation"] = {{"prefix_ok", r.validation.prefix_ok},
                       {"new_plan_ok", r.validation.new_plan_ok},
                       {"errors", r.validation.errors}};
    return j;
}

Json stats_to_json(const EngineStats& s) {
    return Json{{"orb_count", s.orb_count},
                {"vector_count", s.vector_count},
                {"dim", s.dim},
                {"k_default", s.k_default},
                {"cross_user", s.cross_user}};
}

struct Service::Impl {
    Engine& engine;
    httplib::Server server;
    std::thread thread;

    explicit Impl(Engine& e) : engine(e) { install_routes(); }

    static void reply_json(httplib::Response& res, int status, const Json& j) {
        res.status = status;
        res.set_content(j.dump(), "application/json");
    }

    static void reply_error(httplib::Response& res, int status,
                            const std::string& message) {
        reply_json(res, status, Json{{"error", message}});
    }

    void install_routes() {
        server.Post("/v1/episodes", [this](const httplib::Request& req,
                                           httplib::Response& res) {
            Json body;
            try {
                body = Json::parse(req.body);
            } catch (const Json::exception&) {
                return reply_error(res, 400, "body is not valid JSON");
            }
            try {
                if (!body.contains("trajectory"))
                    return reply_error(res, 400, "missing trajectory");
                Trajectory t = trajectory_from_json(body["trajectory"]);
                std::string memory_context = body.value("memory_context", "");
                std::optional<Instant> now;
                if (body.contains("now")) {
                    now = Instant::parse_rfc3339(body["now"].get<std::string>());
                    if (!now) return reply_error(res, 400, "bad now timestamp");
                }
                IngestResult r = engine.ingest_episode(t, memory_context, now);
                reply_json(res, 200, ingest_result_to_json(r));
            } catch (const IncompleteTrajectoryError& e) {
                reply_error(res, 400, e.what());
            } catch (const TransportError& e) {
                reply_error(res, 502, e.what());
            } catch (const StorageError& e) {
                reply_error(res, 500, e.what());
            } catch (const Error& e) {
                reply_error(res, 400, e.what());
            }
        });

        server.Post("/v1/retrieve", [this](const httplib::Request& req,
                                           httplib::Response& res) {
            Json body;
            try {
                body = Json::parse(req.body);
            } catch (const Json::exception&) {
                return reply_error(res, 400, "body is not valid JSON");
            }
            try {
                RetrievalRequest r;
                if (!body.contains("query") || !body["query"].is_string() ||
                    body["query"].get<std::string>().empty())
                    return reply_error(res, 400, "missing query");
                r.query = body["query"].get<std::string>();
                r.context = body.value("context", "");
                r.k = engine.config().k_default;
                if (body.contains("k")) {
                    if (!body["k"].is_number_integer() ||
                        body["k"].get<int64_t>() < 1)
                        return reply_error(res, 400, "k must be >= 1");
                    r.k = size_t(body["k"].get<int64_t>());
                }
                if (body.contains("requesting_user"))
                    r.requesting_user = body["requesting_user"].get<std::string>();
                RetrievalResult result = engine.retrieve(r);
                reply_json(res, 200, retrieval_result_to_json(result, engine));
            } catch (const TransportError& e) {
                reply_error(res, 502, e.what());
            } catch (const Error& e) {
                reply_error(res, 400, e.what());
            }
        });

        server.Get(R"(/v1/orbs/([0-9a-zA-Z]+))",
                   [this](const httplib::Request& req, httplib::Response& res) {
                       std::string id = req.matches[1];
                       if (!is_hex64(id))
                           return reply_error(res, 400, "malformed orb id");
                       auto orb = engine.fetch_orb(id);
                       if (!orb) return reply_error(res, 404, "orb not found");
                       res.status = 200;
                       res.set_content(orb_to_json(*orb).dump(),
                                       "application/json");
                   });

        server.Get("/v1/health",
                   [](const httplib::Request&, httplib::Response& res) {
                       reply_json(res, 200, Json{{"status", "ok"}});
                   });

        server.Get("/v1/stats",
                   [this](const httplib::Request&, httplib::Response& res) {
                       reply_json(res, 200, stats_to_json(engine.stats()));
                   });
    }
};

Service::Service(Engine& engine) : impl_(std::make_unique<Impl>(engine)) {}

Service::~Service() { stop(); }

void Service::serve(const std::string& host, int port) {
    if (!impl_->server.listen(host, port))
        throw StorageError("cannot bind " + host + ":" + std::to_string(port));
}

int Service::start_async(const std::string& host) {
    int port = impl_->server.bind_to_any_port(host);
    if (port < 0) throw StorageError("cannot bind any port on " + host);
    impl_->thread = std::thread([this] { impl_->server.listen_after_bind(); });
    impl_->server.wait_until_ready();
    return port;
}

void Service::stop() {
    if (!impl_) return;
    impl_->server.stop();
    if (impl_->thread.joinable()) impl_->thread.join();
}

}  // namespace memorb
