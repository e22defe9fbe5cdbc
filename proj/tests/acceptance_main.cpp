// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure. Oracles here are independent of the code under test (full-sort
// top-k, exact binomial ratios, Monte-Carlo subset sampling).

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <memory>
#include <string>
#include <vector>

#include "memorb/distiller.hpp"
#include "memorb/engine.hpp"
#include "memorb/evalkit.hpp"
#include "memorb/orb.hpp"
#include "memorb/service.hpp"

#include <httplib.h>

#include "test_util.hpp"

using namespace memorb;
using testutil::TestRng;
namespace fs = std::filesystem;

namespace {

int g_failures = 0;

void report(int criterion, const std::string& name, bool ok,
            const std::string& detail = "") {
    std::printf("[%s] criterion %d: %s%s%s\n", ok ? "PASS" : "FAIL", criterion,
                name.c_str(), detail.empty() ? "" : " -- ", detail.c_str());
    if (!ok) ++g_failures;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
}

Trajectory synth_trajectory(const std::string& utterance, double reward,
                            const std::string& user = "u1") {
    Trajectory t;
    t.scenario = "synthetic acceptance scenario";
    t.user_id = user;
    t.shop_id = "s1";
    t.platform = "marketplace";
    Turn turn;
    turn.user_utterance = utterance;
    turn.agent_action = "attempted standard resolution";
    turn.reward = RewardDetail{reward, reward, 1.0, 1.0};
    t.turns.push_back(turn);
    return t;
}

std::string random_words(TestRng& rng, int n) {
    static const char* kWords[] = {
        "refund",  "parcel",   "kettle",   "invoice", "warranty", "courier",
        "voucher", "exchange", "tracking", "receipt", "delayed",  "damaged",
        "billing", "account",  "delivery", "address", "missing",  "label"};
    std::string s;
    for (int i = 0; i < n; ++i) {
        if (i) s += " ";
        s += kWords[rng.next() % (sizeof(kWords) / sizeof(kWords[0]))];
    }
    return s;
}

// --- criterion 1: retrieval exactness ---------------------------------

void criterion_1() {
    auto t0 = std::chrono::steady_clock::now();
    const size_t dim = 768;
    TestRng rng(101);
    bool all_exact = true;
    std::string detail;
    for (int store_idx = 0; store_idx < 50 && all_exact; ++store_idx) {
        size_t count = 50 + rng.next() % 1951;  // up to 2000 records
        VectorStore store(dim);
        std::vector<VectorRecord> records;
        records.reserve(count);
        for (size_t i = 0; i < count; ++i) {
            VectorRecord r;
            char id[80];
            std::snprintf(id, sizeof(id), "%016llx%048d",
                          (unsigned long long)rng.next(), 0);
            r.orb_id = id;
            r.document = "doc " + std::to_string(i);
            r.vector = testutil::random_unit_vector(rng, dim);
            store.add_embedding(r);
            records.push_back(std::move(r));
        }
        for (int q = 0; q < 20; ++q) {
            auto query = testutil::random_unit_vector(rng, dim);
            auto got = store.query_topk(query, 5);
            auto want = testutil::oracle_topk(records, query, 5);
            if (got.hits.size() != want.size()) {
                all_exact = false;
                detail = "hit count mismatch";
                break;
            }
            for (size_t i = 0; i < want.size(); ++i) {
                if (got.hits[i].orb_id != want[i].orb_id) {
                    all_exact = false;
                    detail = "order mismatch at store " +
                             std::to_string(store_idx);
                    break;
                }
            }
            if (!all_exact) break;
        }
    }
    double elapsed = seconds_since(t0);
    bool timed = elapsed < 10.0;
    char buf[96];
    std::snprintf(buf, sizeof(buf), "50 stores x 20 queries, %.2f s", elapsed);
    report(1, "retrieval matches brute-force top-5 oracle",
           all_exact && timed, detail.empty() ? buf : detail);
}

// --- criterion 2: pass^k correctness ----------------------------------

void criterion_2() {
    bool ok = true;
    std::string detail;
    const int n = 10;
    for (int c = 0; c <= n && ok; ++c) {
        for (int k : {1, 3, 5, 10}) {
            double got = pass_k(c, n, k);
            double want = testutil::exact_binomial_pass_k(c, n, k);
            double denom = want == 0.0 ? 1.0 : std::fabs(want);
            if (std::fabs(got - want) / denom >= 1e-12) {
                ok = false;
                detail = "exact mismatch at c=" + std::to_string(c) +
                         " k=" + std::to_string(k);
                break;
            }
            double mc = testutil::mc_pass_k(c, n, k, 100000,
                                            uint64_t(c * 131 + k));
            if (std::fabs(got - mc) >= 0.01) {
                ok = false;
                detail = "MC oracle mismatch at c=" + std::to_string(c) +
                         " k=" + std::to_string(k);
                break;
            }
        }
    }
    for (int k : {1, 3, 5, 10}) {
        if (pass_k(n, n, k) != 1.0) ok = false;
        if (k > 1 && pass_k(k - 1, n, k) != 0.0) ok = false;
    }
    if (pass_k(0, n, 1) != 0.0) ok = false;
    report(2, "pass^k matches exact binomial and Monte-Carlo oracles", ok,
           detail);
}

// --- criterion 3: content addressing + idempotent ingest --------------

void criterion_3() {
    EngineConfig cfg;
    cfg.dim = 256;
    Engine engine(cfg);
    Instant fixed{1700000000000000};

    Trajectory t = synth_trajectory("the kettle arrived shattered", 0.0);
    auto a = engine.ingest_episode(t, "", fixed);
    auto b = engine.ingest_episode(t, "", fixed);
    bool ok = a.created && !b.created && a.orb_id == b.orb_id &&
              engine.stats().orb_count == 1;

    TestRng rng(303);
    std::string detail;
    for (int i = 0; i < 500 && ok; ++i) {
        // ~25% duplicates by reusing a small utterance pool
        std::string utterance = (rng.next() % 4 == 0)
                                    ? "recurring case " +
                                          std::to_string(rng.next() % 20)
                                    : random_words(rng, 6);
        double reward = (rng.next() % 2) ? 1.0 : 0.0;
        engine.ingest_episode(synth_trajectory(utterance, reward), "",
                              Instant{fixed.micros_since_epoch + i});
        auto s = engine.stats();
        if (s.orb_count != s.vector_count) {
            ok = false;
            detail = "count divergence after ingest " + std::to_string(i);
        }
    }
    auto s = engine.stats();
    report(3, "idempotent ingest keeps orb_count == vector_count", ok,
           detail.empty() ? std::to_string(s.orb_count) + " orbs after 502 ingests"
                          : detail);
}

// --- criterion 4: persistence round trip ------------------------------

void criterion_4() {
    fs::path dir = fs::temp_directory_path() /
                   ("memorb-accept-" + std::to_string(::getpid()));
    fs::remove_all(dir);
    bool ok = true;
    std::string detail;
    std::vector<std::string> ids;
    std::string golden_orbs, golden_retrievals;

    {
        EngineConfig cfg;
        cfg.data_dir = dir;
        cfg.dim = 256;
        Engine engine(cfg);
        TestRng rng(404);
        for (int i = 0; i < 1000; ++i) {
            auto r = engine.ingest_episode(
                synth_trajectory(random_words(rng, 7) + " #" +
                                     std::to_string(i),
                                 (i % 3 == 0) ? 1.0 : 0.0),
                "", Instant{1700000000000000 + i});
            ids.push_back(r.orb_id);
        }
        engine.snapshot();
        for (const auto& id : ids) {
            auto orb = engine.fetch_orb(id);
            if (!orb) { ok = false; detail = "missing orb pre-reload"; break; }
            golden_orbs += orb_to_json(*orb).dump() + "\n";
        }
        TestRng qrng(405);
        for (int q = 0; q < 20; ++q) {
            RetrievalRequest req;
            req.query = random_words(qrng, 5);
            req.k = 5;
            golden_retrievals +=
                retrieval_result_to_json(engine.retrieve(req), engine).dump() +
                "\n";
        }
    }

    if (ok) {
        EngineConfig cfg;
        cfg.data_dir = dir;
        cfg.dim = 256;
        Engine engine(cfg);
        std::string reload_orbs, reload_retrievals;
        for (const auto& id : ids) {
            auto orb = engine.fetch_orb(id);
            if (!orb) { ok = false; detail = "missing orb post-reload"; break; }
            reload_orbs += orb_to_json(*orb).dump() + "\n";
        }
        TestRng qrng(405);
        for (int q = 0; q < 20; ++q) {
            RetrievalRequest req;
            req.query = random_words(qrng, 5);
            req.k = 5;
            reload_retrievals +=
                retrieval_result_to_json(engine.retrieve(req), engine).dump() +
                "\n";
        }
        if (ok && reload_orbs != golden_orbs) {
            ok = false;
            detail = "orb serialization differs after reload";
        }
        if (ok && reload_retrievals != golden_retrievals) {
            ok = false;
            detail = "retrieval results differ after reload";
        }
    }
    fs::remove_all(dir);
    report(4, "1,000-orb snapshot/load reproduces fetch and retrieval bytes",
           ok, detail);
}

// --- criterion 5: reflection format -----------------------------------

void criterion_5() {
    bool ok = true;
    std::string detail;
    TestRng rng(505);
    int accepted = 0, rejected = 0;
    for (int i = 0; i < 200; ++i) {
        bool success = rng.next() % 2;
        int variant = int(rng.next() % 5);
        std::string prefix = success ? "I succeeded in this mission"
                                     : "I failed in this mission";
        std::string body = " because of " + random_words(rng, 3) + ".\n";
        std::string plan = "New Plan: " + random_words(rng, 4) + ".";
        std::string text;
        bool expect_valid = false;
        switch (variant) {
            case 0:  // conforming
                text = prefix + body + plan;
                expect_valid = true;
                break;
            case 1:  // conforming with leading whitespace
                text = "  \n" + prefix + body + plan;
                expect_valid = true;
                break;
            case 2:  // wrong prefix for the flag
                text = (success ? "I failed in this mission"
                                : "I succeeded in this mission") +
                       body + plan;
                break;
            case 3:  // missing New Plan section
                text = prefix + body + "Next time do better.";
                break;
            case 4:  // plan appears before the prefix
                text = plan + "\n" + prefix + body;
                break;
        }
        auto r = validate_reflection(text, success);
        if (r.ok() != expect_valid) {
            ok = false;
            detail = "validator disagreed on variant " +
                     std::to_string(variant) + " case " + std::to_string(i);
            break;
        }
        (expect_valid ? accepted : rejected)++;
    }

    ReflectionPromptInputs in;
    in.platform = "marketplace";
    in.shop_id = "s1";
    in.user_id = "u1";
    in.scenario_desc = "buyer asks about a late parcel";
    in.formatted_messages = "User: where is my parcel\nAssistant: checking";
    in.action_reward = 0.6;
    in.search_reward = 0.6;
    in.output_reward = 0.6;
    in.reward = 0.6;
    std::string prompt = render_reflection_prompt(in);
    if (prompt.find("Success") == std::string::npos) {
        ok = false;
        detail = "reward 0.6 prompt lacks Success";
    }
    in.reward = 0.4;
    prompt = render_reflection_prompt(in);
    if (prompt.find("Failure") == std::string::npos) {
        ok = false;
        detail = "reward 0.4 prompt lacks Failure";
    }
    in.memory_context.clear();
    prompt = render_reflection_prompt(in);
    if (prompt.find("No historical reflection") == std::string::npos) {
        ok = false;
        detail = "empty memory context not rendered";
    }
    report(5, "reflection validator and prompt rendering", ok,
           detail.empty() ? std::to_string(accepted) + " accepted / " +
                                std::to_string(rejected) + " rejected"
                          : detail);
}

// --- criteria 6 + 7: transfer protocol and the k=1 ablation -----------

std::unique_ptr<Engine> make_protocol_engine(
    const std::vector<TaskSpec>& tasks, bool cross_user) {
    EngineConfig cfg;
    cfg.dim = 256;
    cfg.k_default = 5;
    cfg.cross_user = cross_user;
    return std::make_unique<Engine>(cfg, make_eval_reflection_adapter(tasks),
                                    std::make_shared<HashingEmbedder>(cfg.dim));
}

double run_suite_t10(const std::vector<TaskSpec>& tasks, bool memory_enabled,
                     bool cross_user, std::vector<double>* cumulative_out,
                     std::vector<TrialRecord>* records_out) {
    auto engine = make_protocol_engine(tasks, cross_user);
    auto records = run_protocol(tasks, 10, memory_enabled, 42, *engine);
    auto tables = success_rate_tables(records);
    if (cumulative_out) *cumulative_out = tables.cumulative;
    if (records_out) *records_out = std::move(records);
    return tables.cumulative.back();
}

double g_t10_memory = -1.0;  // carried from criterion 6 into criterion 7

void criterion_6() {
    auto t0 = std::chrono::steady_clock::now();
    auto tasks = make_transfer_suite(50);
    bool ok = true;
    std::string detail;

    std::vector<double> cumulative;
    g_t10_memory = run_suite_t10(tasks, true, true, &cumulative, nullptr);
    if (g_t10_memory < 0.95) {
        ok = false;
        detail = "memory-enabled T10 " + std::to_string(g_t10_memory);
    }
    for (size_t i = 1; i < cumulative.size(); ++i)
        if (cumulative[i] < cumulative[i - 1]) {
            ok = false;
            detail = "cumulative curve not monotone";
        }

    double t10_off = run_suite_t10(tasks, false, true, nullptr, nullptr);
    if (t10_off > 0.30) {
        ok = false;
        detail = "memory-disabled T10 " + std::to_string(t10_off);
    }

    // cross-user variant: both tasks need the same cue, only u1's task runs
    // into it first, and u2's task must succeed at trial 2 off u1's orb
    std::vector<TaskSpec> pair{
        {"xa", "shared billing dispute over a duplicate charge",
         "escalate with dispute form DF-7", 1.0, "u1"},
        {"xb", "shared billing dispute over a duplicate charge",
         "escalate with dispute form DF-7", 1.0, "u2"}};
    auto engine = make_protocol_engine(pair, true);
    auto records = run_protocol(pair, 2, true, 42, *engine);
    bool xb_trial2 = false;
    for (const auto& r : records)
        if (r.task_id == "xb" && r.trial_index == 2 && r.success)
            xb_trial2 = true;
    if (!xb_trial2) {
        ok = false;
        detail = "cross-user task did not succeed by trial 2";
    }

    double elapsed = seconds_since(t0);
    if (elapsed >= 30.0) {
        ok = false;
        detail = "too slow: " + std::to_string(elapsed) + " s";
    }
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "T10 on=%.3f off=%.3f cross-user ok, %.2f s", g_t10_memory,
                  t10_off, elapsed);
    report(6, "learn-from-failure transfer protocol", ok,
           detail.empty() ? buf : detail);
}

void criterion_7() {
    auto tasks = make_transfer_suite(50);
    bool ok = true;
    std::string detail;

    auto engine = make_protocol_engine(tasks, false);
    auto recs = run_protocol(tasks, 10, true, 42, *engine);
    double t10_ablated = success_rate_tables(recs).cumulative.back();

    // the populated ablated engine must cap every retrieval at one hit
    TestRng rng(707);
    for (int q = 0; q < 100; ++q) {
        RetrievalRequest req;
        req.query = tasks[rng.next() % tasks.size()].scenario;
        req.k = 5;  // requested k is overridden by the ablation
        auto result = engine->retrieve(req);
        if (result.hits.size() > 1) {
            ok = false;
            detail = "ablated retrieval returned " +
                     std::to_string(result.hits.size()) + " hits";
            break;
        }
    }

    if (g_t10_memory < 0.0) {
        ok = false;
        detail = "criterion 6 baseline missing";
    } else if (!(t10_ablated < g_t10_memory)) {
        ok = false;
        detail = "ablated T10 " + std::to_string(t10_ablated) +
                 " not below " + std::to_string(g_t10_memory);
    }
    char buf[96];
    std::snprintf(buf, sizeof(buf), "T10 ablated=%.3f vs k=5 %.3f",
                  t10_ablated, g_t10_memory);
    report(7, "cross_user=false behaves as the k=1 ablation", ok,
           detail.empty() ? buf : detail);
}

// --- criterion 8: service parity --------------------------------------

void criterion_8() {
    EngineConfig cfg;
    cfg.dim = 128;
    cfg.k_default = 5;
    Engine direct(cfg);
    Engine behind_http(cfg);
    Service service(behind_http);
    int port = service.start_async("127.0.0.1");
    httplib::Client client("127.0.0.1", port);
    client.set_connection_timeout(5);
    client.set_read_timeout(5);

    bool ok = true;
    std::string detail;
    TestRng rng(808);
    std::vector<std::string> known_ids;
    int op_counts[4] = {0, 0, 0, 0};

    for (int op = 0; op < 1000 && ok; ++op) {
        switch (rng.next() % 4) {
            case 0: {  // ingest
                ++op_counts[0];
                std::string utterance = (rng.next() % 3 == 0 && !known_ids.empty())
                                            ? "repeat case " +
                                                  std::to_string(rng.next() % 30)
                                            : random_words(rng, 6);
                double reward = (rng.next() % 2) ? 1.0 : 0.0;
                Trajectory t = synth_trajectory(utterance, reward,
                                                (rng.next() % 2) ? "u1" : "u2");
                Instant now{1700000000000000 + op};
                Json body{{"trajectory", trajectory_to_json(t)},
                          {"now", now.to_rfc3339()}};
                auto res = client.Post("/v1/episodes", body.dump(),
                                       "application/json");
                if (!res || res->status != 200) {
                    ok = false;
                    detail = "HTTP ingest failed at op " + std::to_string(op);
                    break;
                }
                auto want = ingest_result_to_json(
                    direct.ingest_episode(t, "", now));
                if (Json::parse(res->body) != want) {
                    ok = false;
                    detail = "ingest response diverged at op " +
                             std::to_string(op);
                    break;
                }
                known_ids.push_back(want["orb_id"].get<std::string>());
                break;
            }
            case 1: {  // retrieve
                ++op_counts[1];
                RetrievalRequest req;
                req.query = random_words(rng, 4);
                req.k = 1 + rng.next() % 7;
                Json body{{"query", req.query}, {"k", req.k}};
                auto res = client.Post("/v1/retrieve", body.dump(),
                                       "application/json");
                if (!res || res->status != 200) {
                    ok = false;
                    detail = "HTTP retrieve failed at op " + std::to_string(op);
                    break;
                }
                auto want =
                    retrieval_result_to_json(direct.retrieve(req), direct);
                if (Json::parse(res->body) != want) {
                    ok = false;
                    detail = "retrieve response diverged at op " +
                             std::to_string(op);
                }
                break;
            }
            case 2: {  // fetch orb
                ++op_counts[2];
                std::string id = known_ids.empty()
                                     ? std::string(64, 'a')
                                     : known_ids[rng.next() % known_ids.size()];
                auto res = client.Get("/v1/orbs/" + id);
                auto orb = direct.fetch_orb(id);
                if (!res) {
                    ok = false;
                    detail = "HTTP fetch failed";
                    break;
                }
                if (orb) {
                    if (res->status != 200 ||
                        Json::parse(res->body) != orb_to_json(*orb)) {
                        ok = false;
                        detail = "orb fetch diverged at op " +
                                 std::to_string(op);
                    }
                } else if (res->status != 404) {
                    ok = false;
                    detail = "expected 404 at op " + std::to_string(op);
                }
                break;
            }
            case 3: {  // stats
                ++op_counts[3];
                auto res = client.Get("/v1/stats");
                if (!res || res->status != 200 ||
                    Json::parse(res->body) != stats_to_json(direct.stats())) {
                    ok = false;
                    detail = "stats diverged at op " + std::to_string(op);
                }
                break;
            }
        }
    }
    service.stop();
    char buf[128];
    std::snprintf(buf, sizeof(buf),
                  "%d ingest / %d retrieve / %d fetch / %d stats ops",
                  op_counts[0], op_counts[1], op_counts[2], op_counts[3]);
    report(8, "HTTP service matches direct library calls", ok,
           detail.empty() ? buf : detail);
}

}  // namespace

int main() {
    criterion_1();
    criterion_2();
    criterion_3();
    criterion_4();
    criterion_5();
    criterion_6();
    criterion_7();
    criterion_8();
    if (g_failures) {
        std::printf("%d criterion failure(s)\n", g_failures);
        return 1;
    }
    std::printf("all acceptance criteria passed\n");
    return 0;
}
