// Acceptance run. Prints one PASS/FAIL line per criterion (details indented
// underneath) and exits non-zero if any criterion fails.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "asax/harness.hpp"

using namespace asax;
namespace fs = std::filesystem;

namespace {

int failures = 0;

void verdict(int id, bool pass, const std::string& what, double seconds) {
  std::printf("%s criterion %d: %s (%.1fs)\n", pass ? "PASS" : "FAIL", id, what.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++failures;
}

template <class... Args>
void detail(const char* fmt, Args... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
}

double since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::vector<std::uint64_t> seeds(std::uint64_t first, std::size_t count) {
  std::vector<std::uint64_t> s(count);
  std::iota(s.begin(), s.end(), first);
  return s;
}

// ---------------------------------------------------------------------------
// 1 and 8

struct BoundSweep {
  std::size_t violations = 0;
  double max_ratio = 0.0;
};

BoundSweep bound_sweep(const LearnerOptions& learner, bool verbose) {
  BoundSweep out;
  for (std::size_t n : {2, 5, 10})
    for (std::size_t m : {4, 10})
      for (StreamKind kind : {StreamKind::stochastic, StreamKind::adversarial}) {
        RegretOptions o;
        o.n = n;
        o.m = m;
        o.kind = kind;
        o.gap = 0.2;
        o.horizon = 10000;
        o.seeds = seeds(1, 100);
        o.learner = learner;
        const RegretReport r = validate_regret(o);
        out.violations += r.violations;
        out.max_ratio = std::max(out.max_ratio, r.max_ratio);
        if (verbose)
          detail("n=%-2zu m=%-2zu %-11s violations=%zu max E/bound=%s", n, m, to_string(kind).c_str(),
                 r.violations, fmt6(r.max_ratio).c_str());
      }
  return out;
}

void criterion_regret_bound() {
  const auto t0 = std::chrono::steady_clock::now();
  const BoundSweep s = bound_sweep({}, true);
  verdict(1, s.violations == 0,
          "excess risk within the bound at every round boundary, 12 configurations x 100 seeds x 1e4 decisions "
          "(violations=" + std::to_string(s.violations) + ", max ratio " + fmt6(s.max_ratio) + ")",
          since(t0));
}

void criterion_mutations() {
  const auto t0 = std::chrono::steady_clock::now();
  LearnerOptions negate;
  negate.negate_gamma = true;
  LearnerOptions nocap;
  nocap.risk_cap = std::numeric_limits<double>::infinity();
  const BoundSweep a = bound_sweep(negate, false);
  const BoundSweep b = bound_sweep(nocap, false);
  detail("negated gamma: violations=%zu max E/bound=%s", a.violations, fmt6(a.max_ratio).c_str());
  detail("no risk cap:   violations=%zu max E/bound=%s", b.violations, fmt6(b.max_ratio).c_str());
  verdict(8, a.violations > 0 && b.violations > 0,
          "negating gamma and removing the risk cap both make the bound check fail", since(t0));
}

// ---------------------------------------------------------------------------
// 2

void criterion_convergence() {
  const auto t0 = std::chrono::steady_clock::now();
  bool all = true;
  for (std::size_t n : {2, 5}) {
    RegretOptions o;
    o.n = n;
    o.m = n;
    o.kind = StreamKind::stochastic;
    o.gap = 0.2;
    o.horizon = 10000;
    o.seeds = seeds(1, 100);
    const RegretReport r = validate_regret(o);
    std::vector<double> w;
    for (const auto& s : r.seeds) w.push_back(s.final_alpha[0]);
    const auto hits = std::count_if(w.begin(), w.end(), [](double x) { return x > 0.95; });
    std::sort(w.begin(), w.end());
    detail("n=m=%zu: seeds with final weight on the best expert > 0.95: %td/100 (median %s, max %s)", n, hits,
           fmt6(w[w.size() / 2]).c_str(), fmt6(w.back()).c_str());
    all = all && hits >= 95;
  }
  verdict(2, all, "best-expert weight > 0.95 in >= 95 of 100 seeds (stochastic, gap 0.2, 1e4 decisions)",
          since(t0));
}

// ---------------------------------------------------------------------------
// 3

void criterion_reduction() {
  const auto t0 = std::chrono::steady_clock::now();
  bool same = true;
  std::size_t rounds = 0;
  for (std::uint64_t seed = 1; seed <= 10 && same; ++seed) {
    const std::size_t m = seed % 2 ? 4 : 10;
    std::vector<ActionDistribution> experts;
    for (std::size_t i = 0; i < m; ++i) experts.push_back(ActionDistribution::point_mass(m, i));
    const auto sched = LearningRateSchedule::default_for(m);
    AsaxLearner x(m, sched);
    AsaLearner a(m, sched);
    RngStream rx = RngStream(seed).split(1), ra = RngStream(seed).split(1), losses = RngStream(seed).split(2);
    for (int step = 0; step < 1000 && same; ++step) {
      const std::size_t ax = x.choose(experts, rx);
      const std::size_t aa = a.choose(ra);
      const double l = losses.uniform();
      const bool cx = x.observe(experts, ax, l);
      const bool ca = a.observe(aa, l);
      same = ax == aa && cx == ca && x.state().alpha == a.distribution().values();
    }
    rounds += a.rounds();
  }
  detail("%zu weight updates compared", rounds);
  verdict(3, same, "point-mass ASA_X reproduces ASA bit for bit over 1e3 steps x 10 seeds", since(t0));
}

// ---------------------------------------------------------------------------
// 4

void criterion_worked_numbers() {
  const auto t0 = std::chrono::steady_clock::now();
  const bool l1 = std::abs(loss(140, 100) - 0.4) <= 1e-12;
  const bool l2 = loss(70, 100) == 0.0;

  const std::vector<ActionDistribution> leaf{ActionDistribution({0.6, 0.3, 0.05, 0.05})};
  const auto p = mix(init_ensemble(1), leaf);
  const bool m = p.values() == std::vector<double>{0.6, 0.3, 0.05, 0.05};

  EnsembleState s = init_ensemble(2);
  s.risk = {1, 0};
  s = end_round(s, std::log(2.0));
  const bool e1 = std::abs(s.alpha[0] - 1.0 / 3.0) <= 1e-12 && std::abs(s.alpha[1] - 2.0 / 3.0) <= 1e-12;
  s.risk = {0, 1};
  s = end_round(s, std::log(2.0));
  const bool e2 = std::abs(s.alpha[0] - 0.5) <= 1e-12 && std::abs(s.alpha[1] - 0.5) <= 1e-12;

  detail("loss(140,100)=%s loss(70,100)=%s", fmt6(loss(140, 100)).c_str(), fmt6(loss(70, 100)).c_str());
  detail("single-leaf mix=(%s, %s, %s, %s)", fmt6(p[0]).c_str(), fmt6(p[1]).c_str(), fmt6(p[2]).c_str(),
         fmt6(p[3]).c_str());
  verdict(4, l1 && l2 && m && e1 && e2, "loss, single-leaf mixture and end_round hand cases", since(t0));
}

// ---------------------------------------------------------------------------
// 5

bool normalization_fuzz() {
  RngStream rng(99);
  double worst = 0.0;
  EnsembleState s = init_ensemble(5);
  for (int k = 0; k < 1000000; ++k) {
    if (k % 1000 == 0) s = init_ensemble(2 + rng.below(9));
    for (auto& r : s.risk) r = 2.0 * rng.uniform();
    s = end_round(std::move(s), 0.01 + rng.uniform());
    worst = std::max(worst, std::abs(std::accumulate(s.alpha.begin(), s.alpha.end(), 0.0) - 1.0));
    if (k % 10 == 0) {
      std::vector<ActionDistribution> outs;
      for (std::size_t i = 0; i < s.size(); ++i) {
        std::vector<double> q(4);
        for (auto& x : q) x = rng.uniform() + 1e-3;
        const double z = std::accumulate(q.begin(), q.end(), 0.0);
        for (auto& x : q) x /= z;
        outs.emplace_back(q);
      }
      const auto p = mix(s, outs);
      worst = std::max(worst, std::abs(std::accumulate(p.values().begin(), p.values().end(), 0.0) - 1.0));
    }
  }
  detail("normalization: 1e6 updates, worst |sum - 1| = %s", fmt6(worst).c_str());
  return worst <= 1e-9;
}

bool conservation() {
  std::size_t runs = 0;
  try {
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      for (int cores : {64, 128, 256})
        for (auto st : {Strategy::space_sharing_backfill, Strategy::static_50, Strategy::asax}) {
          SimConfig cfg;
          cfg.cluster = ClusterSpec::with_total_cores(cores);
          cfg.strategy = st;
          cfg.seed = seed;
          cfg.check_invariants = true;
          simulate(cfg, standard_mix(seed).jobs);
          ++runs;
        }
  } catch (const std::exception& e) {
    detail("conservation: invariant violated: %s", e.what());
    return false;
  }
  detail("conservation: %zu runs with per-event core and link checks", runs);
  return true;
}

std::string read_all(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool determinism() {
  ExperimentConfig c;
  c.cluster_sizes = {64, 128};
  c.repeats = 3;
  const fs::path base = fs::temp_directory_path() / "asax_acceptance_determinism";
  fs::remove_all(base);
  const auto sched = LearningRateSchedule::default_for(4);
  c.threads = 1;
  const auto a = run_experiment(c);
  emit_reports(a.records, a.report, base / "a", sched);
  c.threads = 0;
  const auto b = run_experiment(c);
  emit_reports(b.records, b.report, base / "b", sched);
  bool same = true;
  std::size_t files = 0;
  for (const auto& entry : fs::recursive_directory_iterator(base / "a")) {
    if (!entry.is_regular_file()) continue;
    const fs::path rel = fs::relative(entry.path(), base / "a");
    same = same && read_all(entry.path()) == read_all(base / "b" / rel);
    ++files;
  }
  fs::remove_all(base);
  detail("determinism: %zu report files compared byte for byte", files);
  return same && files > 0;
}

// Every queue of up to 8 jobs drawn from four shapes, with walltimes that
// equal the runtimes. A head's reservation may never move later, and it
// must start no later than the first reservation it was given.
bool no_starvation() {
  struct Shape {
    int cores;
    int seconds;
  };
  const Shape shapes[4] = {{32, 100}, {16, 50}, {8, 300}, {48, 20}};
  auto job = [&](int id, const Shape& s) {
    JobSpec j;
    j.id = id;
    j.template_name = "shape";
    j.requested_cores = s.cores;
    StageSpec st;
    st.kind = StageType::parallel;
    st.task_count = s.cores;
    st.work_per_task = s.seconds;
    j.stages = {st};
    j.walltime = s.seconds;
    return j;
  };

  std::size_t instances = 0, traced = 0, bad = 0;
  for (int len = 1; len <= 8; ++len) {
    std::vector<int> digits(static_cast<std::size_t>(len), 0);
    while (true) {
      std::vector<JobSpec> jobs;
      for (int i = 0; i < len; ++i) jobs.push_back(job(i + 1, shapes[digits[static_cast<std::size_t>(i)]]));
      SimConfig cfg;
      cfg.cluster = ClusterSpec::with_total_cores(64);
      cfg.trace_reservations = true;
      const RunRecord r = simulate(cfg, jobs);
      ++instances;
      std::map<int, std::vector<SimTime>> per_job;
      for (const auto& t : r.reservations) per_job[t.job].push_back(t.reservation);
      for (const auto& [j, res] : per_job) {
        ++traced;
        const bool monotone = std::is_sorted(res.rbegin(), res.rend());
        const bool kept = r.jobs[static_cast<std::size_t>(j)].start <= res.front();
        if (!monotone || !kept) ++bad;
      }
      int k = 0;
      while (k < len && ++digits[static_cast<std::size_t>(k)] == 4) digits[static_cast<std::size_t>(k++)] = 0;
      if (k == len) break;
    }
  }
  detail("no starvation: %zu queues, %zu reserved heads, %zu broken reservations", instances, traced, bad);
  return bad == 0;
}

// Earliest time at which `need` cores are free, by trying every candidate
// instant in turn.
SimTime brute_earliest(SimTime now, int free_cores, const std::vector<PlannerRelease>& rel, int need) {
  std::vector<SimTime> candidates{now};
  for (const auto& r : rel) candidates.push_back(std::max(now, r.at));
  std::sort(candidates.begin(), candidates.end());
  for (SimTime t : candidates) {
    int avail = free_cores;
    for (const auto& r : rel)
      if (r.at <= t) avail += r.cores;
    if (avail >= need) return t;
  }
  return -1;
}

// The planner against brute force, on the same queues as above and five
// running states: the head's reservation is the true earliest start, and the
// jobs the plan starts now leave it intact.
bool planner_oracle() {
  const PlannerJob shapes[4] = {{32, 100'000}, {16, 50'000}, {8, 300'000}, {48, 20'000}};
  const std::vector<std::vector<PlannerRelease>> running = {
      {}, {{32, 150'000}}, {{16, 50'000}, {32, 300'000}}, {{48, 20'000}, {8, 100'000}}, {{64, 60'000}}};
  const SimTime now = 0;
  std::size_t plans = 0, bad = 0;
  for (const auto& rel : running) {
    int free_cores = 64;
    for (const auto& r : rel) free_cores -= r.cores;
    for (int len = 1; len <= 8; ++len) {
      std::vector<int> digits(static_cast<std::size_t>(len), 0);
      while (true) {
        std::vector<PlannerJob> q;
        for (int d : digits) q.push_back(shapes[d]);
        const BackfillPlan plan = plan_backfill(now, free_cores, q, rel);
        ++plans;
        if (plan.head) {
          const std::size_t h = *plan.head;
          auto before = rel;
          int free_before = free_cores;
          for (std::size_t i = 0; i < h; ++i) {
            before.push_back({q[i].cores, now + q[i].walltime});
            free_before -= q[i].cores;
          }
          auto after = rel;
          int free_after = free_cores;
          for (std::size_t i : plan.start_now) {
            after.push_back({q[i].cores, now + q[i].walltime});
            free_after -= q[i].cores;
          }
          const bool exact = brute_earliest(now, free_before, before, q[h].cores) == plan.head_reservation;
          const bool kept = free_after >= 0 &&
                            brute_earliest(now, free_after, after, q[h].cores) == plan.head_reservation;
          if (!exact || !kept) ++bad;
        }
        int k = 0;
        while (k < len && ++digits[static_cast<std::size_t>(k)] == 4) digits[static_cast<std::size_t>(k++)] = 0;
        if (k == len) break;
      }
    }
  }
  detail("planner vs brute force: %zu plans, %zu mismatches", plans, bad);
  return bad == 0;
}

void criterion_invariants() {
  const auto t0 = std::chrono::steady_clock::now();
  const bool a = normalization_fuzz();
  const bool b = conservation();
  const bool c = determinism();
  const bool d = no_starvation();
  const bool e = planner_oracle();
  verdict(5, a && b && c && d && e, "normalization, core conservation, determinism and backfill no-starvation",
          since(t0));
}

// ---------------------------------------------------------------------------
// 6

void criterion_orderings() {
  const auto t0 = std::chrono::steady_clock::now();
  ExperimentConfig c;
  c.cluster_sizes = {64};
  c.repeats = 10;
  c.base_seed = 1;
  const ExperimentResult res = run_experiment(c);

  std::map<std::pair<Strategy, std::uint64_t>, std::map<std::string, double>> m;
  for (const auto& r : res.records)
    for (const auto& [name, v] : record_metrics(r)) m[{r.strategy, r.seed}][name] = v;

  const auto ss = Strategy::space_sharing_backfill, st = Strategy::static_50, ax = Strategy::asax;
  struct Ordering {
    const char* label;
    std::string metric;
    Strategy lo, hi;  // expects value(lo) < value(hi)
  };
  const std::vector<Ordering> orderings = {
      {"6a waiting     asax < space-sharing", "waiting_h", ax, ss},
      {"6a waiting   static < space-sharing", "waiting_h", st, ss},
      {"6b cpu util  space-sharing < asax", "cpu_util_cluster", ss, ax},
      {"6b cpu util  space-sharing < static", "cpu_util_cluster", ss, st},
      {"6c blast degradation  asax < static", "degradation_blast-like", ax, st},
  };
  bool all = true;
  for (const auto& o : orderings) {
    int wins = 0;
    double lo_mean = 0.0, hi_mean = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const double lo = m[{o.lo, seed}][o.metric];
      const double hi = m[{o.hi, seed}][o.metric];
      wins += lo < hi;
      lo_mean += lo / 10.0;
      hi_mean += hi / 10.0;
    }
    const bool ok = wins >= 8 && lo_mean < hi_mean;
    all = all && ok;
    detail("%-38s %2d/10 seeds, means %s vs %s  %s", o.label, wins, fmt6(lo_mean).c_str(), fmt6(hi_mean).c_str(),
           ok ? "ok" : "NOT MET");
  }
  verdict(6, all, "scheduling orderings on the standard mix at 64 cores, >= 8/10 seeds and in the means", since(t0));
}

// ---------------------------------------------------------------------------
// 7

void criterion_happiness() {
  const auto t0 = std::chrono::steady_clock::now();
  // 400 tasks on `cores` cores always take 200 s solo; walltimes 100..290 s.
  const int cores_cycle[4] = {2, 4, 8, 16};
  int agree = 0;
  for (int i = 0; i < 20; ++i) {
    JobSpec j;
    j.id = 1;
    j.template_name = "constant";
    j.requested_cores = cores_cycle[i % 4];
    StageSpec s;
    s.kind = StageType::parallel;
    s.task_count = 400;
    s.work_per_task = 200.0 * j.requested_cores / 400.0;
    j.stages = {s};
    j.walltime = 100.0 + 10.0 * i;

    SimConfig cfg;
    cfg.cluster = ClusterSpec::with_total_cores(32);
    cfg.keep_completion_log = true;
    const RunRecord r = simulate(cfg, {j});
    const JobRecord& rec = r.jobs.at(0);
    const SimTime mid = rec.start + rec.runtime / 2;

    JobRuntimeState state = JobRuntimeState::fresh(j, rec.start);
    for (SimTime t : rec.completions)
      if (t <= mid) state.record_completion(0, t);
    const double hp = happiness(mid, j, state);
    const bool on_time = to_seconds(rec.runtime) <= j.walltime;
    agree += on_time == (hp >= 1.0);
    if (i % 5 == 0 || i == 10)
      detail("cores=%-2d walltime=%gs runtime=%ss Hp(mid)=%s on time=%s", j.requested_cores, j.walltime,
             fmt6(to_seconds(rec.runtime)).c_str(), fmt6(hp).c_str(), on_time ? "yes" : "no");
  }
  verdict(7, agree == 20,
          "finishing within walltime iff Hp at mid-run >= 1.0, " + std::to_string(agree) + "/20 sweep points agree",
          since(t0));
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  const std::vector<std::function<void()>> criteria = {
      criterion_regret_bound, criterion_convergence, criterion_reduction, criterion_worked_numbers,
      criterion_invariants,   criterion_orderings,   criterion_happiness, criterion_mutations};
  for (const auto& c : criteria) {
    try {
      c();
    } catch (const std::exception& e) {
      std::printf("FAIL criterion (exception): %s\n", e.what());
      ++failures;
    }
  }
  std::printf("%d criteria failed, total %.1fs\n", failures, since(t0));
  return failures == 0 ? 0 : 1;
}
