#include "asax/workloads.hpp"

#include <cmath>
#include <map>
#include <stdexcept>

#include "doctest.h"

using namespace asax;
using doctest::Approx;

namespace {

double speedup(Template t) {
  return make_job(t, 1, 8, 1.5).solo_runtime() / make_job(t, 1, 64, 1.5).solo_runtime();
}

}  // namespace

TEST_CASE("standard mix composition") {
  const auto mix = standard_mix(1);
  REQUIRE(mix.jobs.size() == 15);
  std::map<std::string, std::vector<int>> sizes;
  for (const auto& j : mix.jobs) sizes[j.template_name].push_back(j.requested_cores);
  for (auto& [name, v] : sizes) std::sort(v.begin(), v.end());
  CHECK(sizes["montage-like"] == std::vector<int>{8, 16, 32, 64});
  CHECK(sizes["blast-like"] == std::vector<int>{8, 16, 32, 64});
  CHECK(sizes["stats-like"] == std::vector<int>{8, 16, 32, 64});
  CHECK(sizes["synthetic-like"] == std::vector<int>{16, 32, 64});
  CHECK(mix.total_cores() == 472);
  for (std::size_t i = 0; i < mix.jobs.size(); ++i) {
    CHECK(mix.jobs[i].id == static_cast<int>(i + 1));
    CHECK(mix.jobs[i].submit_time == 0.0);
    CHECK_NOTHROW(mix.jobs[i].validate());
    // Walltimes are whole seconds, rounded up.
    CHECK(mix.jobs[i].walltime == std::ceil(1.5 * mix.jobs[i].solo_runtime()));
  }
}

TEST_CASE("standard mix is deterministic per seed") {
  CHECK(standard_mix(7).jobs == standard_mix(7).jobs);
  bool differs = false;
  for (std::uint64_t s = 2; s < 6 && !differs; ++s) differs = standard_mix(1).jobs != standard_mix(s).jobs;
  CHECK(differs);
}

TEST_CASE("submit window") {
  MixOptions o;
  o.submit_window = 600.0;
  const auto mix = standard_mix(3, o);
  double prev = 0.0;
  for (const auto& j : mix.jobs) {
    CHECK(j.submit_time >= prev);
    CHECK(j.submit_time <= 600.0);
    prev = j.submit_time;
  }
  CHECK(mix.jobs.back().submit_time > 0.0);
  o.submit_window = -1.0;
  CHECK_THROWS_AS(standard_mix(3, o), std::invalid_argument);
}

TEST_CASE("template shapes") {
  for (int c : {8, 16, 32, 64}) {
    const auto montage = template_stages(Template::montage, c);
    CHECK(montage.size() == 9);

    const auto blast = template_stages(Template::blast, c);
    REQUIRE(blast.size() == 2);
    CHECK(blast[0].kind == StageType::parallel);
    CHECK(blast[1].kind == StageType::sequential);

    const auto stats = template_stages(Template::stats, c);
    REQUIRE(stats.size() == 4);
    int seq = 0, par = 0;
    for (const auto& s : stats) (s.kind == StageType::sequential ? seq : par)++;
    CHECK(seq == 2);
    CHECK(par == 2);

    const auto synth = template_stages(Template::synthetic, c);
    REQUIRE(synth.size() == 2);
    CHECK(synth[0].kind == StageType::sequential);
    CHECK(synth[0].mem_demand >= 0.9);
    CHECK(synth[1].kind == StageType::parallel);

    for (auto t : {Template::montage, Template::blast, Template::stats, Template::synthetic})
      for (const auto& s : template_stages(t, c)) CHECK_NOTHROW(s.validate());
  }
}

TEST_CASE("solo runtimes follow the expected ordering") {
  const double montage = make_job(Template::montage, 1, 32, 1.5).solo_runtime();
  const double blast = make_job(Template::blast, 1, 32, 1.5).solo_runtime();
  const double stats = make_job(Template::stats, 1, 32, 1.5).solo_runtime();
  const double synth = make_job(Template::synthetic, 1, 32, 1.5).solo_runtime();
  CHECK(montage < synth);
  CHECK(synth < blast);
  CHECK(synth < stats);
  // BLAST and the synthetic job scale with cores; Montage and Stats barely do.
  for (auto scaling : {Template::blast, Template::synthetic})
    for (auto flat : {Template::montage, Template::stats}) CHECK(speedup(scaling) > 2.0 * speedup(flat));
}

TEST_CASE("template names") {
  for (auto t : {Template::montage, Template::blast, Template::stats, Template::synthetic})
    CHECK(parse_template(to_string(t)) == t);
  CHECK_THROWS_AS(parse_template("gromacs"), std::invalid_argument);
  CHECK_THROWS_AS(make_job(Template::blast, 1, 8, 0.0), std::invalid_argument);
}

TEST_CASE("workload documents round-trip") {
  const auto mix = standard_mix(5);
  const auto back = workload_from_json(to_json(mix));
  CHECK(back.seed == 5);
  CHECK(back.jobs == mix.jobs);

  auto doc = to_json(mix);
  doc["jobs"][0]["stages"][0]["cpu_demand"] = 1.5;
  CHECK_THROWS(workload_from_json(doc));
  auto missing = to_json(mix);
  missing["jobs"][0].erase("cores");
  CHECK_THROWS(workload_from_json(missing));
}

TEST_CASE("loss streams") {
  SUBCASE("losses are bounded and deterministic") {
    for (auto kind : {StreamKind::stochastic, StreamKind::adversarial}) {
      auto make = [&] {
        return kind == StreamKind::stochastic ? LossStream::stochastic(3, 4, 0.2, 100, 9)
                                              : LossStream::adversarial(3, 4, 100, 9);
      };
      auto a = make(), b = make();
      const std::vector<double> alpha{0.2, 0.5, 0.3};
      for (int i = 0; i < 1000; ++i) {
        const auto act = static_cast<std::size_t>(i % 4);
        const double la = a.next_loss(act, alpha);
        CHECK(la >= 0.0);
        CHECK(la <= 1.0);
        CHECK(la == b.next_loss(act, alpha));
      }
    }
  }
  SUBCASE("experts are point masses") {
    const auto s = LossStream::adversarial(5, 4, 10, 1);
    CHECK(s.expert_outputs().size() == 5);
    CHECK(s.expert_outputs()[4] == ActionDistribution::point_mass(4, 0));
    CHECK(s.preferred_action(2) == 2);
  }
  SUBCASE("the adversary punishes the heaviest expert") {
    auto s = LossStream::adversarial(2, 2, 10, 1);
    const std::vector<double> alpha{0.3, 0.7};
    CHECK(s.next_loss(1, alpha) == 1.0);
    CHECK(s.next_loss(0, alpha) == 0.0);
    const std::vector<double> tie{0.5, 0.5};
    CHECK(s.next_loss(0, tie) == 1.0);
  }
  SUBCASE("stochastic means") {
    auto s = LossStream::stochastic(2, 2, 0.2, 0, 4);
    CHECK(s.horizon() == 0);
    const std::vector<double> alpha{0.5, 0.5};
    double good = 0.0, bad = 0.0;
    const int draws = 40000;
    for (int i = 0; i < draws; ++i) {
      good += s.next_loss(0, alpha);
      bad += s.next_loss(1, alpha);
    }
    CHECK(std::abs(good / draws - 0.4) < 0.01);
    CHECK(std::abs(bad / draws - 0.6) < 0.01);
  }
  CHECK_THROWS_AS(LossStream::stochastic(2, 2, 1.0, 10, 0), std::invalid_argument);
  CHECK_THROWS_AS(LossStream::adversarial(0, 2, 10, 0), std::invalid_argument);
}
