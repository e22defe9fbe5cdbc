#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "memorb/engine.hpp"

namespace memorb {

// Synthetic benchmark task. required_cue is the strategy phrase that
// unlocks deterministic success once it shows up in retrieved memory.
struct TaskSpec {
    std::string task_id;
    std::string scenario;
    std::string required_cue;
    double difficulty = 1.0;  // in [0,1]; base success prob is 0.2*(1-difficulty)
    std::string user_id;
};

struct TrialRecord {
    std::string task_id;
    int trial_index = 1;  // 1-based
    bool success = false;
    RewardDetail reward_detail;
};

struct PassKReport {
    int k = 1;
    std::map<std::string, double> per_task;
    double expectation = 0.0;
};

// C(c,k) / C(n,k), exact multiplicative evaluation; 0 when k > c.
double pass_k(int c, int n, int k);  // throws DomainError on bad arguments

// Per task: c = successes over its n trials. Expectation is the unweighted
// mean over tasks. All tasks must have the same trial count.
PassKReport aggregate_pass_k(const std::vector<TrialRecord>& records, int k);

struct SuccessRateTables {
    std::vector<double> per_trial;   // fraction of tasks succeeding at trial T
    std::vector<double> cumulative;  // fraction succeeding in some trial <= T
};

SuccessRateTables success_rate_tables(const std::vector<TrialRecord>& records);

// Multi-trial protocol over a scripted agent. Within each trial every task
// runs once (no skipping of previously-solved tasks); after the trial each
// episode is distilled and ingested. Memory persists across trials.
std::vector<TrialRecord> run_protocol(const std::vector<TaskSpec>& tasks,
                                      int trials, bool memory_enabled,
                                      uint64_t seed, Engine& engine);

// The reflection backend the protocol runner scripts: failures emit the
// task's required_cue inside the "New Plan:" section, successes do not.
std::shared_ptr<LlmAdapter> make_eval_reflection_adapter(
    std::vector<TaskSpec> tasks);

// Task suite file I/O (JSON list of TaskSpec).
std::vector<TaskSpec> load_task_suite(const std::string& path);
void save_task_suite(const std::vector<TaskSpec>& tasks,
                     const std::string& path);

// 50-task suite used by the transfer demonstrations: 25 scenario-sharing
// pairs, two users per pair, distinct cues, difficulty 1.
std::vector<TaskSpec> make_transfer_suite(size_t n_tasks = 50);

// Report serialization.
Json pass_k_report_to_json(const PassKReport& r);
std::string tables_to_csv(const SuccessRateTables& t);
std::string records_to_csv(const std::vector<TrialRecord>& records);

}  // namespace memorb
