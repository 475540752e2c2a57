#include "asax/simulator.hpp"

#include <cmath>
#include <stdexcept>

#include "asax/workloads.hpp"
#include "doctest.h"

using namespace asax;
using doctest::Approx;

namespace {

JobSpec parallel_job(int id, int cores, int tasks, double work, double cpu, double mem = 0.2) {
  JobSpec j;
  j.id = id;
  j.template_name = "test";
  j.requested_cores = cores;
  StageSpec s;
  s.kind = StageType::parallel;
  s.task_count = tasks;
  s.work_per_task = work;
  s.cpu_demand = cpu;
  s.mem_demand = mem;
  j.stages = {s};
  j.walltime = 2.0 * j.solo_runtime();
  return j;
}

SimConfig one_node(Strategy s) {
  SimConfig c;
  c.cluster = {1, 32, 1.0};
  c.strategy = s;
  c.check_invariants = true;
  return c;
}

ExpertEnsembleSpec single_leaf(ActionDistribution p) {
  ExpertEnsembleSpec spec;
  spec.actions = ActionSet::uniform_grid(p.size());
  ExpertTree t("fixed");
  t.add_leaf(std::move(p));
  spec.experts.push_back(std::move(t));
  return spec;
}

double secs(SimTime t) { return to_seconds(t); }

}  // namespace

TEST_CASE("strategy names") {
  CHECK(parse_strategy("static-50") == Strategy::static_50);
  CHECK(parse_strategy("space-sharing") == Strategy::space_sharing_backfill);
  CHECK(to_string(Strategy::asax) == "asax");
  CHECK_THROWS_AS(parse_strategy("gang"), std::invalid_argument);
}

TEST_CASE("empty workload") {
  for (auto s : {Strategy::space_sharing_backfill, Strategy::static_50, Strategy::asax}) {
    const auto r = simulate(one_node(s), {});
    CHECK(r.jobs.empty());
    CHECK(r.makespan == 0);
    CHECK(r.mean_cpu_cluster == 0.0);
    CHECK(r.mean_mem == 0.0);
  }
}

TEST_CASE("one job on an idle cluster") {
  const auto j = parallel_job(1, 32, 64, 10.0, 1.0);
  const auto r = simulate(one_node(Strategy::space_sharing_backfill), {j});
  REQUIRE(r.jobs.size() == 1);
  CHECK(r.jobs[0].waiting == 0);
  CHECK(r.jobs[0].response == r.jobs[0].runtime);
  CHECK(secs(r.jobs[0].runtime) == Approx(20.0));
  CHECK(r.jobs[0].loss == 0.0);
  CHECK(r.mean_cpu_cluster == Approx(1.0));
}

TEST_CASE("oversized jobs are rejected") {
  const auto j = parallel_job(1, 64, 4, 1.0, 1.0);
  CHECK_THROWS_AS(simulate(one_node(Strategy::space_sharing_backfill), {j}), std::invalid_argument);
  auto bad = parallel_job(1, 8, 4, 1.0, 1.0);
  bad.walltime = 0.0;
  CHECK_THROWS_AS(simulate(one_node(Strategy::space_sharing_backfill), {bad}), std::invalid_argument);
}

TEST_CASE("two cpu-bound jobs under static 50/50") {
  // Both tenants demand every core, so the overlap is total and the rate
  // factor sits on its 0.25 floor: 0.5 quota x 0.25 = 1/8 of solo speed.
  const auto a = parallel_job(1, 32, 32, 100.0, 1.0);
  const auto b = parallel_job(2, 32, 32, 100.0, 1.0);
  const auto r = simulate(one_node(Strategy::static_50), {a, b});
  REQUIRE(r.jobs.size() == 2);
  for (const auto& j : r.jobs) {
    CHECK(j.start == 0);
    CHECK(secs(j.runtime) / j.solo_runtime == Approx(8.0));
  }
  CHECK(r.jobs[1].colocated);
  CHECK(r.jobs[1].guest_quota == 0.5);
  CHECK(r.jobs[1].host_id == 1);
  CHECK(r.jobs[0].hosted_guests == 1);

  const auto ss = simulate(one_node(Strategy::space_sharing_backfill), {a, b});
  CHECK(secs(ss.jobs[1].waiting) == Approx(100.0));
  CHECK(secs(ss.jobs[1].runtime) == Approx(100.0));
}

TEST_CASE("light guests barely disturb their host") {
  const auto a = parallel_job(1, 32, 32, 100.0, 1.0);
  const auto b = parallel_job(2, 32, 32, 30.0, 0.3);
  const auto r = simulate(one_node(Strategy::static_50), {a, b});
  // While both run the host is capped at 0.5 per core and slowed by the 0.3
  // overlap; once the guest is done it has every core to itself again.
  const double guest_end = 960.0 / (0.3 * 32 * 0.7);
  const double host_left = 3200.0 - 0.5 * 32 * 0.7 * guest_end;
  CHECK(secs(r.jobs[1].end) == Approx(guest_end).epsilon(1e-4));
  CHECK(secs(r.jobs[0].end) == Approx(guest_end + host_left / 32.0).epsilon(1e-4));
  CHECK(secs(r.jobs[1].runtime) / r.jobs[1].solo_runtime == Approx(1.0 / 0.7).epsilon(1e-4));
}

TEST_CASE("a guest inherits the shared cores when its host ends") {
  const auto host = parallel_job(1, 32, 32, 100.0, 1.0);
  const auto guest = parallel_job(2, 32, 32, 100.0, 0.3);
  auto cfg = one_node(Strategy::asax);
  cfg.experts = single_leaf(ActionDistribution::point_mass(10, 3));
  cfg.schedule = LearningRateSchedule::default_for(1);
  const auto r = simulate(cfg, {host, guest});
  REQUIRE(r.jobs.size() == 2);
  CHECK(r.jobs[1].colocated);
  CHECK(r.jobs[1].guest_quota == Approx(0.3));
  CHECK(r.jobs[1].host_id == 1);

  // Host capped at 0.7 per core, guest at 0.3, overlap 0.3 -> factor 0.7.
  const double host_end = 3200.0 / (0.7 * 32 * 0.7);
  const double guest_rate = 0.3 * 32 * 0.7;
  const double guest_end = host_end + (3200.0 - guest_rate * host_end) / (0.3 * 32);
  CHECK(secs(r.jobs[0].end) == Approx(host_end).epsilon(1e-4));
  CHECK(secs(r.jobs[1].end) == Approx(guest_end).epsilon(1e-4));
}

TEST_CASE("fixed experts pin the quota") {
  const auto a = parallel_job(1, 32, 32, 100.0, 1.0);
  const auto b = parallel_job(2, 32, 32, 100.0, 0.3);
  SUBCASE("all mass on decline") {
    auto cfg = one_node(Strategy::asax);
    cfg.experts = single_leaf(ActionDistribution::point_mass(10, 0));
    cfg.schedule = LearningRateSchedule::default_for(1);
    const auto r = simulate(cfg, {a, b});
    CHECK_FALSE(r.jobs[1].colocated);
    CHECK(r.jobs[1].start == r.jobs[0].end);
  }
  SUBCASE("point mass on 50%") {
    auto cfg = one_node(Strategy::asax);
    cfg.experts = single_leaf(ActionDistribution::point_mass(10, 5));
    cfg.schedule = LearningRateSchedule::default_for(1);
    const auto r = simulate(cfg, {a, b});
    CHECK(r.jobs[1].colocated);
    CHECK(r.jobs[1].guest_quota == 0.5);
    CHECK(r.jobs[1].start == 0);
  }
}

TEST_CASE("saturated hosts decline at the library's rate") {
  const auto lib = standard_library(10);
  StateVector s;
  s.cpu_util = 0.99;
  s.mem_util = 0.99;
  s.stage_type = StageType::parallel;
  s.interval = 0.1;
  s.happiness = 1.0;
  const auto outs = evaluate_ensemble(lib, s);
  const auto p = mix(init_ensemble(lib.size()), outs);
  double min_leaf = 1.0;
  for (const auto& o : outs) min_leaf = std::min(min_leaf, o[0]);
  CHECK(p[0] >= min_leaf);

  RngStream rng = RngStream(5).split(1);
  const int trials = 10000;
  int declines = 0;
  for (int i = 0; i < trials; ++i) declines += sample_action(p, rng) == 0;
  const double sigma = std::sqrt(p[0] * (1.0 - p[0]) / trials);
  CHECK(static_cast<double>(declines) / trials >= min_leaf - 3.0 * sigma);
  CHECK(std::abs(static_cast<double>(declines) / trials - p[0]) <= 3.0 * sigma);
}

TEST_CASE("standard mix runs keep every invariant") {
  for (std::uint64_t seed : {1, 2, 3}) {
    const auto mix = standard_mix(seed);
    for (auto s : {Strategy::space_sharing_backfill, Strategy::static_50, Strategy::asax}) {
      SimConfig cfg;
      cfg.cluster = ClusterSpec::with_total_cores(64);
      cfg.strategy = s;
      cfg.seed = seed;
      cfg.check_invariants = true;
      RunRecord r;
      REQUIRE_NOTHROW(r = simulate(cfg, mix.jobs));
      REQUIRE(r.jobs.size() == 15);
      for (const auto& j : r.jobs) {
        CHECK(j.start >= j.submit);
        CHECK(j.end > j.start);
        CHECK(j.response == j.waiting + j.runtime);
        CHECK(j.loss >= 0.0);
        CHECK(j.loss <= 1.0);
        if (s == Strategy::space_sharing_backfill) {
          CHECK_FALSE(j.colocated);
          // No sharing means no interference, so each job runs at its solo speed.
          CHECK(secs(j.runtime) == Approx(j.solo_runtime).epsilon(1e-4));
        }
      }
      for (const auto& u : r.utilization) {
        CHECK(u.cpu_cluster <= 1.0 + 1e-9);
        CHECK(u.mem <= 1.0 + 1e-9);
      }
    }
  }
}

TEST_CASE("runs are deterministic") {
  const auto mix = standard_mix(4);
  SimConfig cfg;
  cfg.cluster = ClusterSpec::with_total_cores(64);
  cfg.strategy = Strategy::asax;
  cfg.seed = 4;
  const auto a = simulate(cfg, mix.jobs);
  const auto b = simulate(cfg, mix.jobs);
  CHECK(a.fingerprint == b.fingerprint);
  CHECK(a.makespan == b.makespan);
  REQUIRE(a.jobs.size() == b.jobs.size());
  for (std::size_t i = 0; i < a.jobs.size(); ++i) {
    CHECK(a.jobs[i].start == b.jobs[i].start);
    CHECK(a.jobs[i].end == b.jobs[i].end);
    CHECK(a.jobs[i].guest_quota == b.jobs[i].guest_quota);
  }
  CHECK(a.ledger.entries().size() == b.ledger.entries().size());
  CHECK(a.mean_cpu_cluster == b.mean_cpu_cluster);

  cfg.seed = 5;
  CHECK(fingerprint(cfg, mix.jobs) != a.fingerprint);
}

TEST_CASE("reservation traces are recorded on request") {
  std::vector<JobSpec> jobs{parallel_job(1, 16, 16, 100, 1.0), parallel_job(2, 32, 32, 10, 1.0),
                            parallel_job(3, 8, 8, 20, 1.0)};
  auto cfg = one_node(Strategy::space_sharing_backfill);
  cfg.trace_reservations = true;
  const auto r = simulate(cfg, jobs);
  REQUIRE_FALSE(r.reservations.empty());
  CHECK(r.reservations.front().job == 1);
  // Reservations come from walltimes (twice the solo runtime here).
  CHECK(secs(r.reservations.front().reservation) == Approx(200.0));
  // Job 3 fits beside job 1 and its walltime ends before job 2's reservation.
  CHECK(r.jobs[2].start == 0);
  CHECK(secs(r.jobs[1].start) == Approx(100.0));
}
