// asax: experiment runner for the co-scheduling simulator.
//
//   asax run    [--config FILE] [--seed N] [--out DIR] [--strategy NAME] [--cluster-cores N]
//   asax regret [--n N] [--m M] [--stream KIND] [--horizon T] [--seeds K] [--seed N] [--out DIR]
//   asax oracle LEDGER [--out DIR]
//   asax gen    experts|workload|config [--seed N] [--m M] [--out DIR]
//
// Exit status: 0 success, 1 validation failure, 2 I/O error.

#include <cstdio>
#include <fstream>
#include <limits>

#include "CLI11.hpp"
#include "asax/harness.hpp"

namespace fs = std::filesystem;
using namespace asax;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInvalid = 1;
constexpr int kExitIo = 2;

void write_json(const fs::path& path, const nlohmann::json& doc) {
  std::ofstream out(path);
  if (!out || !(out << doc.dump(2) << '\n')) throw IoError("cannot write " + path.string());
}

int cmd_run(const std::string& config_path, std::optional<std::uint64_t> seed, const std::string& out,
            const std::string& strategy, std::optional<int> cores) {
  ExperimentConfig config = config_path.empty() ? ExperimentConfig{} : load_config_file(config_path);
  if (seed) {
    config.base_seed = *seed;
    config.seeds.clear();
  }
  if (!out.empty()) config.output_dir = out;
  if (!strategy.empty()) config.strategies = {parse_strategy(strategy)};
  if (cores) config.cluster_sizes = {*cores};
  if (config.output_dir.empty()) config.output_dir = "asax_out";

  config.validate();
  ensure_writable_dir(config.output_dir);
  const ExperimentResult result = run_experiment(config);
  const std::size_t n_experts =
      config.expert_file.empty() ? 4 : load_experts_file(config.expert_file).size();
  emit_reports(result.records, result.report, config.output_dir,
               config.schedule.value_or(LearningRateSchedule::default_for(n_experts)));

  for (const auto& row : result.report.rows) {
    const auto& w = row.metric("waiting_h");
    const auto& u = row.metric("cpu_util_cluster");
    const auto& mk = row.metric("makespan_h");
    std::printf("%4d cores  %-24s runs=%zu  waiting=%sh  cpu=%s  makespan=%sh\n", row.cluster_cores,
                to_string(row.strategy).c_str(), row.runs, fmt6(w.mean).c_str(), fmt6(u.mean).c_str(),
                fmt6(mk.mean).c_str());
  }
  std::printf("wrote %s\n", config.output_dir.c_str());
  return kExitOk;
}

int cmd_regret(RegretOptions options, std::uint64_t seed, std::size_t seed_count, const std::string& mutation,
               const std::string& out) {
  if (!out.empty()) ensure_writable_dir(out);
  options.seeds.clear();
  for (std::size_t k = 0; k < seed_count; ++k) options.seeds.push_back(seed + k);
  if (mutation == "negate-gamma")
    options.learner.negate_gamma = true;
  else if (mutation == "no-cap")
    options.learner.risk_cap = std::numeric_limits<double>::infinity();
  else if (mutation != "none")
    throw ValidationError("unknown mutation '" + mutation + "'");
  options.keep_curves = !out.empty();

  const RegretReport report = validate_regret(options);
  if (!out.empty()) write_regret_report(report, out);
  std::printf("n=%zu m=%zu %s horizon=%zu seeds=%zu  violations=%zu  max E/bound=%s  %s\n", options.n,
              options.m, to_string(options.kind).c_str(), options.horizon, options.seeds.size(),
              report.violations, fmt6(report.max_ratio).c_str(), report.pass ? "PASS" : "FAIL");
  return report.pass ? kExitOk : kExitInvalid;
}

int cmd_oracle(const std::string& ledger_path, const std::string& out) {
  if (!out.empty()) ensure_writable_dir(out);
  std::ifstream in(ledger_path);
  if (!in) throw IoError("cannot read ledger " + ledger_path);
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(in);
  } catch (const nlohmann::json::parse_error& e) {
    throw ValidationError(ledger_path + ": " + e.what());
  }
  const RegretLedger ledger = ledger_from_json(doc);
  if (ledger.entries().empty()) throw ValidationError("ledger has no entries");
  const HindsightResult best = hindsight_oracle(ledger);
  const double mixture = mixture_risk(ledger, ledger.rounds().size());
  std::printf("cases=%zu rounds=%zu best_expert=%zu hindsight_risk=%s mixture_risk=%s excess=%s\n",
              ledger.entries().size(), ledger.rounds().size(), best.expert, fmt6(best.risk).c_str(),
              fmt6(mixture).c_str(), fmt6(mixture - best.risk).c_str());
  if (!out.empty())
    write_json(fs::path(out) / "oracle.json", {{"cases", ledger.entries().size()},
                                               {"rounds", ledger.rounds().size()},
                                               {"best_expert", best.expert},
                                               {"hindsight_risk", best.risk},
                                               {"mixture_risk", mixture},
                                               {"excess_risk", mixture - best.risk}});
  return kExitOk;
}

int cmd_gen(const std::string& what, std::uint64_t seed, std::size_t m, const std::string& out) {
  const fs::path dir = out.empty() ? fs::path(".") : fs::path(out);
  ensure_writable_dir(dir);
  if (what == "experts") {
    write_json(dir / "standard_experts.json", to_json(standard_library(m)));
  } else if (what == "workload") {
    const WorkloadMix mix = standard_mix(seed);
    write_json(dir / "workload.json", to_json(mix));
    std::printf("%zu jobs, %d requested cores in total\n", mix.jobs.size(), mix.total_cores());
  } else if (what == "config") {
    ExperimentConfig c;
    c.cluster_sizes = {64, 128, 256};
    c.repeats = 3;
    c.base_seed = seed;
    write_json(dir / "experiment.json", to_json(c));
  } else {
    throw ValidationError("gen: expected experts, workload or config");
  }
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"ASA_X co-scheduling simulator and regret harness"};
  app.require_subcommand(1);

  std::string config_path, out, strategy;
  std::uint64_t seed = 0;
  int cluster_cores = 0;

  auto* run = app.add_subcommand("run", "Run an experiment grid");
  run->add_option("--config", config_path, "Experiment config (JSON)");
  auto* run_seed = run->add_option("--seed", seed, "Base seed");
  run->add_option("--out", out, "Output directory");
  run->add_option("--strategy", strategy, "Only this strategy");
  auto* run_cores = run->add_option("--cluster-cores", cluster_cores, "Only this cluster size");

  RegretOptions ropt;
  std::string stream = "adversarial", mutation = "none";
  std::size_t seed_count = 10;
  double c_scale = 0.0;
  std::string schedule_kind;
  auto* regret = app.add_subcommand("regret", "Check the excess-risk bound on synthetic streams");
  regret->add_option("--n", ropt.n, "Experts")->default_val(2);
  regret->add_option("--m", ropt.m, "Actions")->default_val(4);
  regret->add_option("--stream", stream, "stochastic or adversarial")->default_val("adversarial");
  regret->add_option("--gap", ropt.gap, "Stochastic gap")->default_val(0.2);
  regret->add_option("--horizon", ropt.horizon, "Decisions per seed")->default_val(10000);
  regret->add_option("--seeds", seed_count, "Number of seeds")->default_val(10);
  regret->add_option("--seed", seed, "First seed");
  regret->add_option("--schedule", schedule_kind, "constant or inverse-sqrt");
  regret->add_option("--c", c_scale, "Learning-rate scale");
  regret->add_option("--mutation", mutation, "none, negate-gamma or no-cap")->default_val("none");
  regret->add_option("--out", out, "Output directory");

  std::string ledger_path;
  auto* oracle = app.add_subcommand("oracle", "Audit a ledger against the hindsight-best expert");
  oracle->add_option("ledger", ledger_path, "Ledger JSON")->required();
  oracle->add_option("--out", out, "Output directory");

  std::string what;
  std::size_t m = 10;
  auto* gen = app.add_subcommand("gen", "Write expert, workload or config files");
  gen->add_option("what", what, "experts, workload or config")->required();
  gen->add_option("--seed", seed, "Seed");
  gen->add_option("--m", m, "Action count for experts")->default_val(10);
  gen->add_option("--out", out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitInvalid;
  }

  try {
    if (*run)
      return cmd_run(config_path, run_seed->count() ? std::optional(seed) : std::nullopt, out, strategy,
                     run_cores->count() ? std::optional(cluster_cores) : std::nullopt);
    if (*regret) {
      ropt.kind = parse_stream_kind(stream);
      if (!schedule_kind.empty())
        ropt.schedule = LearningRateSchedule::parse(schedule_kind, c_scale > 0.0 ? c_scale : 1.0);
      return cmd_regret(ropt, seed, seed_count, mutation, out);
    }
    if (*oracle) return cmd_oracle(ledger_path, out);
    if (*gen) return cmd_gen(what, seed, m, out);
  } catch (const IoError& e) {
    std::fprintf(stderr, "asax: %s\n", e.what());
    return kExitIo;
  } catch (const ValidationError& e) {
    std::fprintf(stderr, "asax: %s\n", e.what());
    return kExitInvalid;
  } catch (const ExpertSchemaError& e) {
    std::fprintf(stderr, "asax: %s\n", e.what());
    return kExitInvalid;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "asax: %s\n", e.what());
    return kExitInvalid;
  } catch (const std::runtime_error& e) {
    std::fprintf(stderr, "asax: %s\n", e.what());
    return kExitIo;
  }
  return kExitOk;
}
