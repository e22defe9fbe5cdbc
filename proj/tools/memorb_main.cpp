// memorb: operator CLI for the orb memory layer.
//
//   memorb ingest <trajectory.json>      distill + store one episode
//   memorb query --q <text> [--k N]      ranked retrieval
//   memorb eval --tasks suite.json       multi-trial protocol + reports
//   memorb serve                         HTTP service
//   memorb snapshot                      compact persistence files
//   memorb stats                         store counters
//
// Config precedence: flags > environment > --config file.

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "memorb/engine.hpp"
#include "memorb/errors.hpp"
#include "memorb/evalkit.hpp"
#include "memorb/service.hpp"

using namespace memorb;

namespace {

constexpr int kExitParse = 2;
constexpr int kExitAdapter = 3;
constexpr int kExitStorage = 4;
constexpr int kExitBind = 5;

struct CliConfig {
    std::string data_dir;
    size_t dim = 768;
    size_t k = 5;
    bool cross_user = true;
    std::string listen_addr = "127.0.0.1:8077";
    std::string llm_endpoint;
    std::string llm_token;
    std::string embed_endpoint;
};

bool parse_bool(const std::string& s) {
    return s == "1" || s == "true" || s == "yes" || s == "on";
}

void apply_kv(CliConfig& cfg, const std::string& key, const std::string& value) {
    if (key == "DATA_DIR") cfg.data_dir = value;
    else if (key == "EMBED_DIM") cfg.dim = size_t(std::stoul(value));
    else if (key == "TOPK_DEFAULT") cfg.k = size_t(std::stoul(value));
    else if (key == "CROSS_USER") cfg.cross_user = parse_bool(value);
    else if (key == "LISTEN_ADDR") cfg.listen_addr = value;
    else if (key == "LLM_ENDPOINT") cfg.llm_endpoint = value;
    else if (key == "LLM_TOKEN") cfg.llm_token = value;
    else if (key == "EMBED_ENDPOINT") cfg.embed_endpoint = value;
    // unknown keys are ignored so config files can carry extra entries
}

void load_config_file(CliConfig& cfg, const std::string& path) {
    std::ifstream in(path);
    if (!in) throw StorageError("cannot read config file: " + path);
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty() || line[0] == '#') continue;
        size_t eq = line.find('=');
        if (eq == std::string::npos) continue;
        std::string key = line.substr(0, eq);
        std::string value = line.substr(eq + 1);
        while (!key.empty() && key.back() == ' ') key.pop_back();
        while (!value.empty() && value.front() == ' ') value.erase(0, 1);
        apply_kv(cfg, key, value);
    }
}

void load_env(CliConfig& cfg) {
    for (const char* key : {"DATA_DIR", "EMBED_DIM", "TOPK_DEFAULT",
                            "CROSS_USER", "LISTEN_ADDR", "LLM_ENDPOINT",
                            "LLM_TOKEN", "EMBED_ENDPOINT"}) {
        if (const char* v = std::getenv(key)) apply_kv(cfg, key, v);
    }
}

EngineConfig to_engine_config(const CliConfig& cfg) {
    EngineConfig ec;
    ec.data_dir = cfg.data_dir;
    ec.dim = cfg.dim;
    ec.k_default = cfg.k;
    ec.cross_user = cfg.cross_user;
    ec.llm_endpoint = cfg.llm_endpoint;
    ec.llm_token = cfg.llm_token;
    ec.embed_endpoint = cfg.embed_endpoint;
    return ec;
}

int cmd_ingest(const CliConfig& cfg, const std::string& file, bool as_json,
               const std::string& now_str) {
    Json body;
    {
        std::ifstream in(file);
        if (!in) {
            std::cerr << "cannot open trajectory file: " << file << "\n";
            return kExitParse;
        }
        try {
            in >> body;
        } catch (const Json::exception& e) {
            std::cerr << "trajectory JSON parse error: " << e.what() << "\n";
            return kExitParse;
        }
    }
    try {
        // accept either a bare trajectory object or {"trajectory": ...}
        const Json& jt = body.contains("trajectory") ? body["trajectory"] : body;
        Trajectory t = trajectory_from_json(jt);
        std::string memory_context = body.value("memory_context", "");
        std::optional<Instant> now;
        if (!now_str.empty()) {
            now = Instant::parse_rfc3339(now_str);
            if (!now) {
                std::cerr << "bad --now timestamp\n";
                return kExitParse;
            }
        }
        Engine engine(to_engine_config(cfg));
        IngestResult r = engine.ingest_episode(t, memory_context, now);
        if (as_json) {
            std::cout << ingest_result_to_json(r).dump() << "\n";
        } else {
            std::cout << r.orb_id << "\n";
            std::cout << "created=" << (r.created ? "true" : "false")
                      << " prefix_ok=" << (r.validation.prefix_ok ? "true" : "false")
                      << " new_plan_ok=" << (r.validation.new_plan_ok ? "true" : "false")
                      << "\n";
            for (const std::string& e : r.validation.errors)
                std::cout << "validation: " << e << "\n";
        }
        return 0;
    } catch (const IncompleteTrajectoryError& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    } catch (const TransportError& e) {
        std::cerr << e.what() << "\n";
        return kExitAdapter;
    } catch (const StorageError& e) {
        std::cerr << e.what() << "\n";
        return kExitStorage;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    }
}

int cmd_query(const CliConfig& cfg, const std::string& q,
              const std::string& context, size_t k, bool as_json) {
    try {
        Engine engine(to_engine_config(cfg));
        RetrievalRequest req;
        req.query = q;
        req.context = context;
        req.k = k;
        RetrievalResult result = engine.retrieve(req);
        if (as_json) {
            std::cout << retrieval_result_to_json(result, engine).dump() << "\n";
            return 0;
        }
        if (result.hits.empty()) {
            std::cout << "0 hits\n";
            return 0;
        }
        for (size_t i = 0; i < result.hits.size(); ++i) {
            const RetrievalHit& hit = result.hits[i];
            auto orb = engine.fetch_orb(hit.orb_id);
            std::string text = orb ? orb->outcome : hit.document;
            if (text.size() > 96) text = text.substr(0, 93) + "...";
            for (char& c : text)
                if (c == '\n') c = ' ';
            char line[160];
            std::snprintf(line, sizeof(line), "%2zu  %.6f  %s  %s", i + 1,
                          hit.score, hit.orb_id.substr(0, 8).c_str(),
                          text.c_str());
            std::cout << line << "\n";
        }
        return 0;
    } catch (const TransportError& e) {
        std::cerr << e.what() << "\n";
        return kExitAdapter;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitStorage;
    }
}

int cmd_eval(const CliConfig& cfg, const std::string& suite_path, int trials,
             bool no_memory, uint64_t seed, const std::string& out_dir,
             bool as_json) {
    std::vector<TaskSpec> tasks;
    try {
        tasks = load_task_suite(suite_path);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    }
    try {
        EngineConfig ec = to_engine_config(cfg);
        ec.data_dir.clear();  // protocol runs start from an empty bank
        Engine engine(ec, make_eval_reflection_adapter(tasks),
                      std::make_shared<HashingEmbedder>(ec.dim));
        auto records = run_protocol(tasks, trials, !no_memory, seed, engine);

        SuccessRateTables tables = success_rate_tables(records);
        std::filesystem::create_directories(out_dir);
        {
            std::ofstream out(std::filesystem::path(out_dir) / "success_rates.csv");
            out << tables_to_csv(tables);
        }
        {
            std::ofstream out(std::filesystem::path(out_dir) / "trial_matrix.csv");
            out << records_to_csv(records);
        }
        Json reports = Json::array();
        for (int k = 1; k <= trials; ++k)
            reports.push_back(pass_k_report_to_json(aggregate_pass_k(records, k)));
        {
            std::ofstream out(std::filesystem::path(out_dir) / "pass_k.json");
            out << reports.dump(2) << "\n";
        }
        if (as_json) {
            Json summary;
            summary["pass_k"] = reports;
            summary["per_trial"] = tables.per_trial;
            summary["cumulative"] = tables.cumulative;
            std::cout << summary.dump() << "\n";
        } else {
            for (const Json& r : reports) {
                char line[64];
                std::snprintf(line, sizeof(line), "pass^%d = %.6f",
                              int(r["k"].get<int>()),
                              r["expectation"].get<double>());
                std::cout << line << "\n";
            }
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitStorage;
    }
}

int cmd_serve(const CliConfig& cfg) {
    try {
        Engine engine(to_engine_config(cfg));
        std::string host = cfg.listen_addr;
        int port = 8077;
        size_t colon = host.rfind(':');
        if (colon != std::string::npos) {
            port = std::stoi(host.substr(colon + 1));
            host = host.substr(0, colon);
        }
        Service service(engine);
        std::cerr << "memorb serving on " << host << ":" << port << "\n";
        service.serve(host, port);
        return 0;
    } catch (const StorageError& e) {
        std::cerr << e.what() << "\n";
        return kExitBind;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitStorage;
    }
}

int cmd_snapshot(const CliConfig& cfg) {
    try {
        Engine engine(to_engine_config(cfg));
        engine.snapshot();
        std::cout << "snapshot written to " << cfg.data_dir << "\n";
        return 0;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitStorage;
    }
}

int cmd_stats(const CliConfig& cfg, bool as_json) {
    try {
        Engine engine(to_engine_config(cfg));
        EngineStats s = engine.stats();
        if (as_json) {
            std::cout << stats_to_json(s).dump() << "\n";
        } else {
            std::cout << "orb_count=" << s.orb_count
                      << " vector_count=" << s.vector_count << " dim=" << s.dim
                      << " k_default=" << s.k_default
                      << " cross_user=" << (s.cross_user ? "true" : "false")
                      << "\n";
        }
        return 0;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitStorage;
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"memorb: verbal-reinforcement memory layer for frozen LLM agents"};
    app.require_subcommand(1);

    CliConfig cfg;
    std::string config_file;
    app.add_option("--config", config_file, "key=value config file");
    // flag holders; applied after env/file so flags win
    std::string flag_data_dir, flag_llm, flag_embed, flag_listen;
    int64_t flag_dim = -1, flag_k = -1;
    int flag_cross_user = -1;
    app.add_option("--data-dir", flag_data_dir, "persistence directory");
    app.add_option("--dim", flag_dim, "embedding dimension (default 768)");
    app.add_option("--k", flag_k, "default top-k (default 5)");
    app.add_option("--cross-user", flag_cross_user,
                   "cross-user retrieval (1) or k=1 ablation (0)");
    app.add_option("--llm-endpoint", flag_llm, "remote LLM endpoint");
    app.add_option("--embed-endpoint", flag_embed, "remote embedder endpoint");
    app.add_option("--listen", flag_listen, "serve address host:port");
    bool as_json = false;
    app.add_flag("--json", as_json, "machine-readable JSON output");

    auto* ingest = app.add_subcommand("ingest", "distill and store an episode");
    std::string trajectory_file, now_str;
    ingest->add_option("file", trajectory_file, "trajectory JSON file")->required();
    ingest->add_option("--now", now_str, "inject ingest timestamp (RFC 3339)");

    auto* query = app.add_subcommand("query", "retrieve ranked reflections");
    std::string q_text, q_context;
    int64_t q_k = -1;
    query->add_option("--q", q_text, "query text")->required();
    query->add_option("--context", q_context, "dialogue context");
    query->add_option("--k", q_k, "top-k for this query");

    auto* eval = app.add_subcommand("eval", "run the multi-trial protocol");
    std::string suite_path, out_dir = "eval-out";
    int trials = 10;
    bool no_memory = false;
    uint64_t seed = 42;
    eval->add_option("--tasks", suite_path, "task suite JSON")->required();
    eval->add_option("--trials", trials, "trial count (default 10)");
    eval->add_flag("--no-memory", no_memory, "disable retrieval and ingestion");
    eval->add_option("--seed", seed, "protocol RNG seed");
    eval->add_option("--out", out_dir, "report output directory");

    auto* serve = app.add_subcommand("serve", "start the HTTP service");
    auto* snapshot = app.add_subcommand("snapshot", "compact persistence files");
    auto* stats = app.add_subcommand("stats", "print store counters");
    (void)serve;
    (void)snapshot;
    (void)stats;

    CLI11_PARSE(app, argc, argv);

    try {
        if (!config_file.empty()) load_config_file(cfg, config_file);
        load_env(cfg);
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return kExitParse;
    }
    if (!flag_data_dir.empty()) cfg.data_dir = flag_data_dir;
    if (flag_dim > 0) cfg.dim = size_t(flag_dim);
    if (flag_k > 0) cfg.k = size_t(flag_k);
    if (flag_cross_user >= 0) cfg.cross_user = flag_cross_user != 0;
    if (!flag_llm.empty()) cfg.llm_endpoint = flag_llm;
    if (!flag_embed.empty()) cfg.embed_endpoint = flag_embed;
    if (!flag_listen.empty()) cfg.listen_addr = flag_listen;

    if (app.got_subcommand("ingest"))
        return cmd_ingest(cfg, trajectory_file, as_json, now_str);
    if (app.got_subcommand("query"))
        return cmd_query(cfg, q_text, q_context,
                         q_k > 0 ? size_t(q_k) : cfg.k, as_json);
    if (app.got_subcommand("eval"))
        return cmd_eval(cfg, suite_path, trials, no_memory, seed, out_dir,
                        as_json);
    if (app.got_subcommand("serve")) return cmd_serve(cfg);
    if (app.got_subcommand("snapshot")) return cmd_snapshot(cfg);
    if (app.got_subcommand("stats")) return cmd_stats(cfg, as_json);
    return kExitParse;
}
