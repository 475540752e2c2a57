#pragma once

// Experiment grid, regret-bound validation, the hindsight oracle and report
// files. The CLI in tools/ is a thin layer over these functions.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "asax/experts.hpp"
#include "asax/hedge.hpp"
#include "asax/simulator.hpp"
#include "asax/workloads.hpp"
#include "json.hpp"

namespace asax {

// Bad input: configuration, documents, arguments. The CLI exits with 1.
class ValidationError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Unreadable or unwritable files. The CLI exits with 2.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExperimentConfig {
  std::vector<int> cluster_sizes{64};
  std::vector<Strategy> strategies{Strategy::space_sharing_backfill, Strategy::static_50,
                                   Strategy::asax};
  int repeats = 1;
  std::uint64_t base_seed = 1;
  std::vector<std::uint64_t> seeds;  // overrides base_seed + repeats when non-empty

  std::string workload = "standard_mix";  // or a workload document path
  MixOptions mix;

  std::string expert_file;  // empty: built-in standard library
  std::size_t action_count = 10;
  std::optional<LearningRateSchedule> schedule;  // default: sqrt(ln n / t)

  InterferenceModel interference;
  double decision_tick = 10.0;       // seconds
  double throughput_window = 30.0;   // seconds
  double static_quota = 0.5;

  std::string output_dir;
  int threads = 0;  // 0: hardware concurrency

  std::vector<std::uint64_t> seed_list() const;
  // Throws ValidationError.
  void validate() const;
};

// Relative paths in the document resolve against base_dir.
ExperimentConfig config_from_json(const nlohmann::json& doc,
                                  const std::filesystem::path& base_dir = {});
nlohmann::json to_json(const ExperimentConfig& config);
ExperimentConfig load_config_file(const std::filesystem::path& path);

// Builds the simulator configuration for one grid cell.
SimConfig make_sim_config(const ExperimentConfig& config, const ExpertEnsembleSpec& experts,
                          int cluster_cores, Strategy strategy, std::uint64_t seed);

struct MetricSummary {
  std::string name;
  double mean = 0.0;
  double std = 0.0;  // sample standard deviation
  std::optional<double> normalized;  // mean / space-sharing mean at the same size
};

struct ComparisonRow {
  int cluster_cores = 0;
  Strategy strategy = Strategy::space_sharing_backfill;
  std::size_t runs = 0;
  std::vector<MetricSummary> metrics;

  const MetricSummary& metric(const std::string& name) const;
};

struct ComparisonReport {
  std::vector<ComparisonRow> rows;
  int workload_cores = 0;  // sum of requested cores in the workload
};

// Per-run scalar metrics in a fixed order: waiting_h, response_h,
// runtime_h, makespan_h, cpu_util_cluster, cpu_util_allocated, mem_util,
// loss, degradation, then degradation_<template> for each template present.
std::vector<std::pair<std::string, double>> record_metrics(const RunRecord& record);

struct ExperimentResult {
  std::vector<RunRecord> records;  // sorted by (size, strategy, seed)
  ComparisonReport report;
};

ExperimentResult run_experiment(const ExperimentConfig& config);

// Order-independent reduction over records.
ComparisonReport aggregate(std::vector<RunRecord> records, int workload_cores);

// ---------------------------------------------------------------------------
// Regret

struct RegretOptions {
  std::size_t n = 2;
  std::size_t m = 4;
  StreamKind kind = StreamKind::adversarial;
  double gap = 0.2;
  std::size_t horizon = 10000;
  std::vector<std::uint64_t> seeds{0};
  std::optional<LearningRateSchedule> schedule;
  LearnerOptions learner;
  bool keep_curves = false;
};

struct SeedRegret {
  std::uint64_t seed = 0;
  std::size_t rounds = 0;
  std::size_t violations = 0;
  double max_ratio = 0.0;
  double final_excess = 0.0;
  double final_bound = 0.0;
  std::vector<double> final_alpha;
  std::vector<RegretPoint> curve;
};

struct RegretReport {
  RegretOptions options;
  std::vector<SeedRegret> seeds;
  std::size_t violations = 0;
  double max_ratio = 0.0;
  bool pass = false;
};

// Runs the learner over a stream for its whole horizon and closes the last
// partial round.
AsaxLearner run_stream(LossStream& stream, const LearningRateSchedule& schedule,
                       const LearnerOptions& options, std::uint64_t seed);

SeedRegret check_regret_seed(const RegretOptions& options, std::uint64_t seed);
RegretReport validate_regret(const RegretOptions& options, int threads = 0);

HindsightResult hindsight_oracle(const RegretLedger& ledger);

nlohmann::json ledger_to_json(const RegretLedger& ledger);
RegretLedger ledger_from_json(const nlohmann::json& doc);

// ---------------------------------------------------------------------------
// Output

// Creates the directory if needed and proves it is writable. Throws IoError.
void ensure_writable_dir(const std::filesystem::path& dir);

// 6 significant digits.
std::string fmt6(double v);

// jobs.csv, report.json, regret.csv and one ledger per asax run under
// ledgers/. Throws std::invalid_argument on an empty record set.
void emit_reports(const std::vector<RunRecord>& records, const ComparisonReport& report,
                  const std::filesystem::path& dir, const LearningRateSchedule& schedule);

nlohmann::json report_to_json(const ComparisonReport& report);

void write_regret_report(const RegretReport& report, const std::filesystem::path& dir);

}  // namespace asax
