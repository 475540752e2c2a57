#include "asax/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <mutex>
#include <numeric>
#include <thread>

namespace asax {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

int resolve_threads(int requested, std::size_t tasks) {
  int t = requested > 0 ? requested : static_cast<int>(std::thread::hardware_concurrency());
  t = std::max(1, t);
  return static_cast<int>(std::min<std::size_t>(static_cast<std::size_t>(t), std::max<std::size_t>(1, tasks)));
}

// Runs fn(i) for i in [0, count) on a small pool. The first exception is
// rethrown after all workers stop.
template <class Fn>
void parallel_for(std::size_t count, int threads, Fn fn) {
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  std::mutex error_mutex;
  auto worker = [&] {
    for (;;) {
      const std::size_t i = next.fetch_add(1);
      if (i >= count) return;
      try {
        fn(i);
      } catch (...) {
        std::lock_guard lock(error_mutex);
        if (!error) error = std::current_exception();
        next.store(count);
      }
    }
  };
  const int n = resolve_threads(threads, count);
  std::vector<std::thread> pool;
  for (int k = 1; k < n; ++k) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

double sample_std(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / (v.size() - 1));
}

double six(double v) {
  if (!std::isfinite(v)) return v;
  return std::stod(fmt6(v));
}

}  // namespace

std::string fmt6(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Configuration

std::vector<std::uint64_t> ExperimentConfig::seed_list() const {
  if (!seeds.empty()) return seeds;
  std::vector<std::uint64_t> s;
  for (int r = 0; r < repeats; ++r) s.push_back(base_seed + static_cast<std::uint64_t>(r));
  return s;
}

void ExperimentConfig::validate() const {
  if (repeats < 1) throw ValidationError("config: repeats must be >= 1");
  if (cluster_sizes.empty()) throw ValidationError("config: cluster_sizes is empty");
  if (strategies.empty()) throw ValidationError("config: strategies is empty");
  for (int c : cluster_sizes) {
    try {
      ClusterSpec::with_total_cores(c);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(std::string("config: ") + e.what());
    }
  }
  if (workload != "standard_mix" && !fs::exists(workload))
    throw ValidationError("config: workload file '" + workload + "' does not exist");
  if (!expert_file.empty() && !fs::exists(expert_file))
    throw ValidationError("config: expert file '" + expert_file + "' does not exist");
  if (expert_file.empty() && action_count < 2) throw ValidationError("config: action_count must be >= 2");
  if (!(decision_tick > 0.0)) throw ValidationError("config: decision_tick must be positive");
  if (!(throughput_window > 0.0)) throw ValidationError("config: throughput_window must be positive");
  if (!(static_quota > 0.0 && static_quota < 1.0)) throw ValidationError("config: static_quota outside (0,1)");
  if (!(mix.walltime_factor > 0.0)) throw ValidationError("config: walltime_factor must be positive");
  if (!(mix.submit_window >= 0.0)) throw ValidationError("config: submit_window must be >= 0");
  try {
    interference.validate();
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
}

ExperimentConfig config_from_json(const json& doc, const fs::path& base_dir) {
  if (!doc.is_object()) throw ValidationError("config: expected an object");
  static const std::vector<std::string> known = {
      "cluster_sizes", "strategies",     "repeats",           "base_seed",     "seeds",
      "workload",      "submit_window",  "walltime_factor",   "expert_file",   "action_count",
      "schedule",      "interference",   "decision_tick",     "throughput_window",
      "static_quota",  "output_dir",     "threads"};
  for (const auto& [key, _] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ValidationError("config: unknown field '" + key + "'");

  auto resolve = [&](const std::string& p) {
    if (p.empty() || fs::path(p).is_absolute() || base_dir.empty()) return p;
    return (base_dir / p).lexically_normal().string();
  };

  ExperimentConfig c;
  try {
    if (doc.contains("cluster_sizes")) c.cluster_sizes = doc["cluster_sizes"].get<std::vector<int>>();
    if (doc.contains("strategies")) {
      c.strategies.clear();
      for (const auto& s : doc["strategies"]) c.strategies.push_back(parse_strategy(s.get<std::string>()));
    }
    c.repeats = doc.value("repeats", c.repeats);
    c.base_seed = doc.value("base_seed", c.base_seed);
    if (doc.contains("seeds")) c.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
    c.workload = doc.value("workload", c.workload);
    if (c.workload != "standard_mix") c.workload = resolve(c.workload);
    c.mix.submit_window = doc.value("submit_window", c.mix.submit_window);
    c.mix.walltime_factor = doc.value("walltime_factor", c.mix.walltime_factor);
    c.expert_file = resolve(doc.value("expert_file", c.expert_file));
    c.action_count = doc.value("action_count", c.action_count);
    if (doc.contains("schedule")) {
      const auto& s = doc["schedule"];
      c.schedule = LearningRateSchedule::parse(s.at("kind").get<std::string>(), s.at("c").get<double>());
    }
    if (doc.contains("interference")) {
      const auto& i = doc["interference"];
      c.interference.contention_exponent = i.value("contention_exponent", c.interference.contention_exponent);
      c.interference.mem_pressure_threshold =
          i.value("mem_pressure_threshold", c.interference.mem_pressure_threshold);
      c.interference.min_rate_factor = i.value("min_rate_factor", c.interference.min_rate_factor);
    }
    c.decision_tick = doc.value("decision_tick", c.decision_tick);
    c.throughput_window = doc.value("throughput_window", c.throughput_window);
    c.static_quota = doc.value("static_quota", c.static_quota);
    c.output_dir = resolve(doc.value("output_dir", c.output_dir));
    c.threads = doc.value("threads", c.threads);
  } catch (const json::exception& e) {
    throw ValidationError(std::string("config: ") + e.what());
  } catch (const std::invalid_argument& e) {
    throw ValidationError(std::string("config: ") + e.what());
  }
  return c;
}

json to_json(const ExperimentConfig& c) {
  json strategies = json::array();
  for (auto s : c.strategies) strategies.push_back(to_string(s));
  json j{{"cluster_sizes", c.cluster_sizes},
         {"strategies", strategies},
         {"repeats", c.repeats},
         {"base_seed", c.base_seed},
         {"workload", c.workload},
         {"submit_window", c.mix.submit_window},
         {"walltime_factor", c.mix.walltime_factor},
         {"expert_file", c.expert_file},
         {"action_count", c.action_count},
         {"interference",
          {{"contention_exponent", c.interference.contention_exponent},
           {"mem_pressure_threshold", c.interference.mem_pressure_threshold},
           {"min_rate_factor", c.interference.min_rate_factor}}},
         {"decision_tick", c.decision_tick},
         {"throughput_window", c.throughput_window},
         {"static_quota", c.static_quota},
         {"output_dir", c.output_dir},
         {"threads", c.threads}};
  if (!c.seeds.empty()) j["seeds"] = c.seeds;
  if (c.schedule) j["schedule"] = {{"kind", c.schedule->name()}, {"c", c.schedule->c}};
  return j;
}

ExperimentConfig load_config_file(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot read config file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return config_from_json(doc, path.parent_path());
}

SimConfig make_sim_config(const ExperimentConfig& config, const ExpertEnsembleSpec& experts,
                          int cluster_cores, Strategy strategy, std::uint64_t seed) {
  SimConfig s;
  s.cluster = ClusterSpec::with_total_cores(cluster_cores);
  s.interference = config.interference;
  s.strategy = strategy;
  s.seed = seed;
  s.experts = experts;
  s.schedule = config.schedule.value_or(LearningRateSchedule::default_for(experts.size()));
  s.decision_tick = from_seconds(config.decision_tick);
  s.throughput_window = from_seconds(config.throughput_window);
  s.static_quota = config.static_quota;
  return s;
}

// ---------------------------------------------------------------------------
// Grid

const MetricSummary& ComparisonRow::metric(const std::string& name) const {
  for (const auto& m : metrics)
    if (m.name == name) return m;
  throw std::out_of_range("no metric '" + name + "'");
}

std::vector<std::pair<std::string, double>> record_metrics(const RunRecord& r) {
  std::vector<std::pair<std::string, double>> out;
  const double n = static_cast<double>(std::max<std::size_t>(1, r.jobs.size()));
  double waiting = 0, response = 0, runtime = 0, loss_sum = 0, degradation = 0;
  std::map<std::string, std::pair<double, int>> per_template;
  for (const auto& j : r.jobs) {
    waiting += to_hours(j.waiting);
    response += to_hours(j.response);
    runtime += to_hours(j.runtime);
    loss_sum += j.loss;
    const double d = to_seconds(j.runtime) / j.solo_runtime;
    degradation += d;
    auto& t = per_template[j.template_name];
    t.first += d;
    ++t.second;
  }
  out.emplace_back("waiting_h", waiting / n);
  out.emplace_back("response_h", response / n);
  out.emplace_back("runtime_h", runtime / n);
  out.emplace_back("makespan_h", to_hours(r.makespan));
  out.emplace_back("cpu_util_cluster", r.mean_cpu_cluster);
  out.emplace_back("cpu_util_allocated", r.mean_cpu_allocated);
  out.emplace_back("mem_util", r.mean_mem);
  out.emplace_back("loss", loss_sum / n);
  out.emplace_back("degradation", degradation / n);
  for (const auto& [name, acc] : per_template)
    out.emplace_back("degradation_" + name, acc.first / acc.second);
  return out;
}

namespace {

auto record_key(const RunRecord& r) {
  return std::make_tuple(r.cluster_cores, static_cast<int>(r.strategy), r.seed);
}

}  // namespace

ComparisonReport aggregate(std::vector<RunRecord> records, int workload_cores) {
  std::sort(records.begin(), records.end(),
            [](const RunRecord& a, const RunRecord& b) { return record_key(a) < record_key(b); });
  ComparisonReport report;
  report.workload_cores = workload_cores;

  std::size_t i = 0;
  while (i < records.size()) {
    std::size_t k = i;
    while (k < records.size() && records[k].cluster_cores == records[i].cluster_cores &&
           records[k].strategy == records[i].strategy)
      ++k;
    ComparisonRow row;
    row.cluster_cores = records[i].cluster_cores;
    row.strategy = records[i].strategy;
    row.runs = k - i;
    std::vector<std::string> names;
    std::map<std::string, std::vector<double>> values;
    for (std::size_t r = i; r < k; ++r) {
      for (const auto& [name, v] : record_metrics(records[r])) {
        if (!values.count(name)) names.push_back(name);
        values[name].push_back(v);
      }
    }
    for (const auto& name : names) {
      const auto& v = values[name];
      MetricSummary m;
      m.name = name;
      m.mean = std::accumulate(v.begin(), v.end(), 0.0) / v.size();
      m.std = sample_std(v);
      row.metrics.push_back(m);
    }
    report.rows.push_back(std::move(row));
    i = k;
  }

  for (auto& row : report.rows) {
    const ComparisonRow* base = nullptr;
    for (const auto& b : report.rows)
      if (b.cluster_cores == row.cluster_cores && b.strategy == Strategy::space_sharing_backfill) base = &b;
    if (!base) continue;
    for (auto& m : row.metrics) {
      for (const auto& bm : base->metrics) {
        if (bm.name == m.name && bm.mean != 0.0) m.normalized = m.mean / bm.mean;
      }
    }
  }
  return report;
}

ExperimentResult run_experiment(const ExperimentConfig& config) {
  config.validate();
  if (!config.output_dir.empty()) ensure_writable_dir(config.output_dir);

  ExpertEnsembleSpec experts;
  try {
    experts = config.expert_file.empty() ? standard_library(config.action_count)
                                         : load_experts_file(config.expert_file);
  } catch (const ExpertSchemaError& e) {
    throw ValidationError(e.what());
  }
  std::optional<WorkloadMix> fixed;
  if (config.workload != "standard_mix") {
    try {
      fixed = load_workload_file(config.workload);
    } catch (const std::invalid_argument& e) {
      throw ValidationError(e.what());
    }
  }

  struct Cell {
    int cores;
    Strategy strategy;
    std::uint64_t seed;
  };
  std::vector<Cell> grid;
  for (int c : config.cluster_sizes)
    for (Strategy s : config.strategies)
      for (std::uint64_t seed : config.seed_list()) grid.push_back({c, s, seed});

  const int workload_cores = fixed ? fixed->total_cores() : standard_mix(0, config.mix).total_cores();
  for (const auto& cell : grid) {
    const auto& jobs = fixed ? fixed->jobs : standard_mix(cell.seed, config.mix).jobs;
    for (const auto& j : jobs)
      if (j.requested_cores > cell.cores)
        throw ValidationError("job " + std::to_string(j.id) + " needs " + std::to_string(j.requested_cores) +
                              " cores; cluster size " + std::to_string(cell.cores) + " is too small");
  }

  std::vector<std::optional<RunRecord>> slots(grid.size());
  try {
    parallel_for(grid.size(), config.threads, [&](std::size_t i) {
      const Cell& cell = grid[i];
      const SimConfig sim = make_sim_config(config, experts, cell.cores, cell.strategy, cell.seed);
      if (fixed) {
        slots[i] = simulate(sim, fixed->jobs);
      } else {
        const WorkloadMix mix = standard_mix(cell.seed, config.mix);
        slots[i] = simulate(sim, mix.jobs);
      }
    });
  } catch (const std::exception& e) {
    if (!config.output_dir.empty()) {
      json done = json::array();
      for (std::size_t i = 0; i < grid.size(); ++i)
        if (slots[i])
          done.push_back({{"cluster_cores", grid[i].cores},
                          {"strategy", to_string(grid[i].strategy)},
                          {"seed", grid[i].seed}});
      std::ofstream(fs::path(config.output_dir) / "partial_manifest.json")
          << json{{"error", e.what()}, {"completed", done}}.dump(2) << "\n";
    }
    throw;
  }

  ExperimentResult result;
  for (auto& s : slots) result.records.push_back(std::move(*s));
  std::sort(result.records.begin(), result.records.end(),
            [](const RunRecord& a, const RunRecord& b) { return record_key(a) < record_key(b); });
  result.report = aggregate(result.records, workload_cores);
  return result;
}

// ---------------------------------------------------------------------------
// Regret

AsaxLearner run_stream(LossStream& stream, const LearningRateSchedule& schedule,
                       const LearnerOptions& options, std::uint64_t seed) {
  AsaxLearner learner(stream.expert_count(), schedule, options);
  RngStream choose = RngStream(seed).split(0x63686f6f);
  const auto& outputs = stream.expert_outputs();
  for (std::size_t t = 0; t < stream.horizon(); ++t) {
    const std::size_t a = learner.choose(outputs, choose);
    const double l = stream.next_loss(a, learner.state().alpha);
    learner.observe(outputs, a, l);
  }
  learner.flush();
  return learner;
}

SeedRegret check_regret_seed(const RegretOptions& o, std::uint64_t seed) {
  LossStream stream = o.kind == StreamKind::stochastic ? LossStream::stochastic(o.n, o.m, o.gap, o.horizon, seed)
                                                       : LossStream::adversarial(o.n, o.m, o.horizon, seed);
  const LearningRateSchedule schedule = o.schedule.value_or(LearningRateSchedule::default_for(o.n));
  const AsaxLearner learner = run_stream(stream, schedule, o.learner, seed);

  SeedRegret r;
  r.seed = seed;
  r.final_alpha = learner.state().alpha;
  const auto curve = regret_curve(learner.ledger(), schedule);
  r.rounds = curve.size();
  for (const auto& p : curve) {
    if (p.excess_risk > p.bound) ++r.violations;
    r.max_ratio = std::max(r.max_ratio, p.excess_risk / p.bound);
  }
  if (!curve.empty()) {
    r.final_excess = curve.back().excess_risk;
    r.final_bound = curve.back().bound;
  }
  if (o.keep_curves) r.curve = curve;
  return r;
}

RegretReport validate_regret(const RegretOptions& options, int threads) {
  if (options.horizon < 1) throw ValidationError("regret: horizon must be >= 1");
  if (options.n < 1 || options.m < 1) throw ValidationError("regret: n and m must be >= 1");
  RegretReport report;
  report.options = options;
  report.seeds.resize(options.seeds.size());
  parallel_for(options.seeds.size(), threads,
               [&](std::size_t i) { report.seeds[i] = check_regret_seed(options, options.seeds[i]); });
  for (const auto& s : report.seeds) {
    report.violations += s.violations;
    report.max_ratio = std::max(report.max_ratio, s.max_ratio);
  }
  report.pass = report.violations == 0;
  return report;
}

HindsightResult hindsight_oracle(const RegretLedger& ledger) {
  if (ledger.entries().empty()) throw std::invalid_argument("hindsight_oracle: empty ledger");
  return hindsight_best(ledger, ledger.rounds().size());
}

json ledger_to_json(const RegretLedger& ledger) {
  json rounds = json::array();
  for (const auto& r : ledger.rounds())
    rounds.push_back({{"index", r.index},
                      {"alpha", r.alpha},
                      {"cases", r.cases},
                      {"gamma", r.gamma},
                      {"max_risk_pre", r.max_risk_pre},
                      {"max_risk_post", r.max_risk_post},
                      {"closed", r.closed}});
  json entries = json::array();
  for (const auto& e : ledger.entries())
    entries.push_back({{"round", e.round},
                       {"action", e.action},
                       {"loss", e.loss},
                       {"raw_loss", e.raw_loss},
                       {"expert_probs", e.expert_probs},
                       {"state", e.state}});
  return {{"experts", ledger.expert_count()},
          {"clamps", ledger.clamp_count()},
          {"cumulative_mixture_loss", ledger.cumulative_mixture_loss()},
          {"rounds", rounds},
          {"entries", entries}};
}

RegretLedger ledger_from_json(const json& doc) {
  try {
    const std::size_t n = doc.at("experts").get<std::size_t>();
    RegretLedger ledger(n);
    const auto& rounds = doc.at("rounds");
    const auto& entries = doc.at("entries");
    std::size_t e = 0;
    for (const auto& r : rounds) {
      const auto alpha = r.at("alpha").get<std::vector<double>>();
      if (alpha.size() != n) throw ValidationError("ledger: round weight vector has wrong length");
      ledger.open_round(alpha);
      const std::size_t index = r.at("index").get<std::size_t>();
      for (; e < entries.size() && entries[e].at("round").get<std::size_t>() == index; ++e) {
        LedgerEntry le;
        le.action = entries[e].at("action").get<std::size_t>();
        le.loss = entries[e].at("loss").get<double>();
        le.raw_loss = entries[e].value("raw_loss", le.loss);
        le.expert_probs = entries[e].at("expert_probs").get<std::vector<double>>();
        if (le.expert_probs.size() != n) throw ValidationError("ledger: entry has wrong expert count");
        le.state = entries[e].value("state", std::vector<double>{});
        ledger.record(std::move(le));
      }
      if (r.value("closed", true))
        ledger.close_round(r.at("gamma").get<double>(), r.value("max_risk_pre", 0.0),
                           r.value("max_risk_post", 0.0));
    }
    if (e != entries.size()) throw ValidationError("ledger: entries refer to unknown rounds");
    for (std::size_t k = 0; k < doc.value("clamps", std::size_t{0}); ++k) ledger.note_clamp();
    return ledger;
  } catch (const json::exception& ex) {
    throw ValidationError(std::string("ledger: ") + ex.what());
  } catch (const std::logic_error& ex) {
    throw ValidationError(std::string("ledger: ") + ex.what());
  }
}

// ---------------------------------------------------------------------------
// Output

void ensure_writable_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory " + dir.string());
  const fs::path probe = dir / ".asax_write_probe";
  {
    std::ofstream out(probe);
    if (!out || !(out << "ok")) throw IoError("output directory " + dir.string() + " is not writable");
  }
  fs::remove(probe, ec);
}

namespace {

std::ofstream open_out(const fs::path& p) {
  std::ofstream out(p);
  if (!out) throw IoError("cannot write " + p.string());
  return out;
}

}  // namespace

json report_to_json(const ComparisonReport& report) {
  json rows = json::array();
  for (const auto& row : report.rows) {
    json metrics = json::object();
    for (const auto& m : row.metrics) {
      json v{{"mean", six(m.mean)}, {"std", six(m.std)}};
      v["normalized"] = m.normalized ? json(six(*m.normalized)) : json(nullptr);
      metrics[m.name] = v;
    }
    rows.push_back({{"cluster_cores", row.cluster_cores},
                    {"strategy", to_string(row.strategy)},
                    {"runs", row.runs},
                    {"metrics", metrics}});
  }
  return {{"baseline", to_string(Strategy::space_sharing_backfill)},
          {"workload_cores", report.workload_cores},
          {"rows", rows}};
}

void emit_reports(const std::vector<RunRecord>& records, const ComparisonReport& report, const fs::path& dir,
                  const LearningRateSchedule& schedule) {
  if (records.empty()) throw std::invalid_argument("emit_reports: no run records");
  ensure_writable_dir(dir);

  std::vector<const RunRecord*> sorted;
  for (const auto& r : records) sorted.push_back(&r);
  std::sort(sorted.begin(), sorted.end(),
            [](const RunRecord* a, const RunRecord* b) { return record_key(*a) < record_key(*b); });

  {
    auto out = open_out(dir / "jobs.csv");
    out << "cluster_cores,strategy,seed,id,template,cores,walltime_h,submit_h,start_h,end_h,"
           "waiting_h,response_h,runtime_h,solo_runtime_h,loss,colocated,guest_quota,host\n";
    for (const auto* r : sorted)
      for (const auto& j : r->jobs)
        out << r->cluster_cores << ',' << to_string(r->strategy) << ',' << r->seed << ',' << j.id << ','
            << j.template_name << ',' << j.cores << ',' << fmt6(j.walltime / 3600.0) << ','
            << fmt6(to_hours(j.submit)) << ',' << fmt6(to_hours(j.start)) << ',' << fmt6(to_hours(j.end)) << ','
            << fmt6(to_hours(j.waiting)) << ',' << fmt6(to_hours(j.response)) << ','
            << fmt6(to_hours(j.runtime)) << ',' << fmt6(j.solo_runtime / 3600.0) << ',' << fmt6(j.loss) << ','
            << (j.colocated ? 1 : 0) << ',' << fmt6(j.guest_quota) << ',' << j.host_id << '\n';
  }
  open_out(dir / "report.json") << report_to_json(report).dump(2) << '\n';
  {
    auto out = open_out(dir / "regret.csv");
    out << "cluster_cores,strategy,seed,round,excess_risk,bound\n";
    for (const auto* r : sorted) {
      if (r->strategy != Strategy::asax) continue;
      for (const auto& p : regret_curve(r->ledger, schedule))
        out << r->cluster_cores << ',' << to_string(r->strategy) << ',' << r->seed << ',' << p.round << ','
            << fmt6(p.excess_risk) << ',' << fmt6(p.bound) << '\n';
    }
  }
  bool any_ledger = false;
  for (const auto* r : sorted) {
    if (r->strategy != Strategy::asax) continue;
    if (!any_ledger) {
      fs::create_directories(dir / "ledgers");
      any_ledger = true;
    }
    open_out(dir / "ledgers" /
             ("ledger_" + std::to_string(r->cluster_cores) + "_" + std::to_string(r->seed) + ".json"))
        << ledger_to_json(r->ledger).dump() << '\n';
  }
}

void write_regret_report(const RegretReport& report, const fs::path& dir) {
  ensure_writable_dir(dir);
  const auto& o = report.options;
  json seeds = json::array();
  for (const auto& s : report.seeds)
    seeds.push_back({{"seed", s.seed},
                     {"rounds", s.rounds},
                     {"violations", s.violations},
                     {"max_ratio", six(s.max_ratio)},
                     {"final_excess", six(s.final_excess)},
                     {"final_bound", six(s.final_bound)}});
  json summary{{"n", o.n},
               {"m", o.m},
               {"stream", to_string(o.kind)},
               {"gap", o.gap},
               {"horizon", o.horizon},
               {"violations", report.violations},
               {"max_ratio", six(report.max_ratio)},
               {"pass", report.pass},
               {"seeds", seeds}};
  open_out(dir / "regret_summary.json") << summary.dump(2) << '\n';
  auto out = open_out(dir / "regret.csv");
  out << "seed,round,excess_risk,bound\n";
  for (const auto& s : report.seeds)
    for (const auto& p : s.curve)
      out << s.seed << ',' << p.round << ',' << fmt6(p.excess_risk) << ',' << fmt6(p.bound) << '\n';
}

}  // namespace asax
