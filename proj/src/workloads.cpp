#include "asax/workloads.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <stdexcept>

namespace asax {

using nlohmann::json;

std::string to_string(Template t) {
  switch (t) {
    case Template::montage: return "montage-like";
    case Template::blast: return "blast-like";
    case Template::stats: return "stats-like";
    case Template::synthetic: return "synthetic-like";
  }
  return "?";
}

Template parse_template(const std::string& s) {
  for (Template t : {Template::montage, Template::blast, Template::stats, Template::synthetic})
    if (to_string(t) == s) return t;
  throw std::invalid_argument("unknown template '" + s + "'");
}

namespace {

StageSpec seq(int tasks, double work, double cpu, double mem) {
  return {StageType::sequential, tasks, work, cpu, mem};
}

StageSpec par(int tasks, double work, double cpu, double mem) {
  return {StageType::parallel, tasks, work, cpu, mem};
}

}  // namespace

// Work is in core-seconds per task. Parallel stage work is fixed in total, so
// those stages shrink with more cores; sequential stages do not.
std::vector<StageSpec> template_stages(Template t, int cores) {
  if (cores < 1) throw std::invalid_argument("template_stages: cores must be >= 1");
  switch (t) {
    case Template::montage:
      // Projection and background fitting fan out; the mosaic assembly
      // steps run on one core.
      return {par(400, 3.0, 0.5, 0.2),  par(400, 1.5, 0.5, 0.2), par(200, 2.0, 0.4, 0.2),
              seq(60, 2.5, 1.0, 0.1),   seq(60, 2.5, 1.0, 0.1),  par(300, 2.0, 0.5, 0.3),
              seq(120, 2.5, 1.0, 0.1),  seq(120, 2.5, 1.0, 0.15), seq(60, 2.5, 1.0, 0.1)};
    case Template::blast:
      return {par(1600, 40.0, 1.0, 0.25), seq(50, 10.0, 1.0, 0.2)};
    case Template::stats:
      return {seq(100, 11.0, 1.0, 0.3), par(480, 10.0, 0.6, 0.4), seq(100, 11.0, 1.0, 0.3),
              par(480, 10.0, 0.6, 0.4)};
    case Template::synthetic:
      return {seq(60, 5.0, 1.0, 0.95), par(1200, 40.0, 1.0, 0.6)};
  }
  return {};
}

JobSpec make_job(Template t, int id, int cores, double walltime_factor, double submit_time) {
  if (!(walltime_factor > 0.0)) throw std::invalid_argument("make_job: walltime_factor must be positive");
  JobSpec j;
  j.id = id;
  j.template_name = to_string(t);
  j.requested_cores = cores;
  j.submit_time = submit_time;
  j.stages = template_stages(t, cores);
  // Whole seconds keep walltimes exact in millisecond simulated time.
  j.walltime = std::ceil(j.solo_runtime() * walltime_factor);
  j.validate();
  return j;
}

int WorkloadMix::total_cores() const {
  int n = 0;
  for (const auto& j : jobs) n += j.requested_cores;
  return n;
}

WorkloadMix standard_mix(std::uint64_t seed, const MixOptions& options) {
  if (!(options.submit_window >= 0.0)) throw std::invalid_argument("standard_mix: negative submit window");
  std::vector<std::pair<Template, int>> slots;
  for (Template t : {Template::montage, Template::blast, Template::stats})
    for (int c : {8, 16, 32, 64}) slots.emplace_back(t, c);
  for (int c : {16, 32, 64}) slots.emplace_back(Template::synthetic, c);

  RngStream root(seed);
  RngStream order = root.split(1);
  RngStream arrivals = root.split(2);
  for (std::size_t i = slots.size() - 1; i > 0; --i)
    std::swap(slots[i], slots[order.below(i + 1)]);

  std::vector<double> submits(slots.size(), 0.0);
  if (options.submit_window > 0.0) {
    for (double& s : submits) s = std::round(arrivals.uniform() * options.submit_window * 1000.0) / 1000.0;
    std::sort(submits.begin(), submits.end());
  }

  WorkloadMix mix;
  mix.seed = seed;
  for (std::size_t i = 0; i < slots.size(); ++i)
    mix.jobs.push_back(make_job(slots[i].first, static_cast<int>(i + 1), slots[i].second,
                                options.walltime_factor, submits[i]));
  return mix;
}

json to_json(const WorkloadMix& mix) {
  json jobs = json::array();
  for (const auto& j : mix.jobs) {
    json stages = json::array();
    for (const auto& s : j.stages)
      stages.push_back({{"kind", to_string(s.kind)},
                        {"task_count", s.task_count},
                        {"work_per_task", s.work_per_task},
                        {"cpu_demand", s.cpu_demand},
                        {"mem_demand", s.mem_demand}});
    jobs.push_back({{"id", j.id},
                    {"template", j.template_name},
                    {"cores", j.requested_cores},
                    {"walltime", j.walltime},
                    {"submit_time", j.submit_time},
                    {"stages", std::move(stages)}});
  }
  return {{"seed", mix.seed}, {"jobs", std::move(jobs)}};
}

WorkloadMix workload_from_json(const json& doc) {
  if (!doc.is_object() || !doc.contains("jobs") || !doc["jobs"].is_array())
    throw std::invalid_argument("workload: expected an object with a jobs array");
  WorkloadMix mix;
  mix.seed = doc.value("seed", std::uint64_t{0});
  int next_id = 1;
  for (std::size_t i = 0; i < doc["jobs"].size(); ++i) {
    const auto& j = doc["jobs"][i];
    const std::string where = "workload.jobs[" + std::to_string(i) + "]";
    try {
      JobSpec spec;
      spec.id = j.value("id", next_id);
      spec.template_name = j.value("template", std::string("custom"));
      spec.requested_cores = j.at("cores").get<int>();
      spec.walltime = j.at("walltime").get<double>();
      spec.submit_time = j.value("submit_time", 0.0);
      for (const auto& s : j.at("stages")) {
        StageSpec st;
        st.kind = parse_stage_type(s.at("kind").get<std::string>());
        st.task_count = s.at("task_count").get<int>();
        st.work_per_task = s.at("work_per_task").get<double>();
        st.cpu_demand = s.at("cpu_demand").get<double>();
        st.mem_demand = s.at("mem_demand").get<double>();
        spec.stages.push_back(st);
      }
      spec.validate();
      next_id = spec.id + 1;
      mix.jobs.push_back(std::move(spec));
    } catch (const json::exception& e) {
      throw std::invalid_argument(where + ": " + e.what());
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(where + ": " + e.what());
    }
  }
  return mix;
}

WorkloadMix load_workload_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open workload file " + path.string());
  try {
    return workload_from_json(json::parse(in));
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------

std::string to_string(StreamKind k) { return k == StreamKind::stochastic ? "stochastic" : "adversarial"; }

StreamKind parse_stream_kind(const std::string& s) {
  if (s == "stochastic") return StreamKind::stochastic;
  if (s == "adversarial") return StreamKind::adversarial;
  throw std::invalid_argument("unknown stream kind '" + s + "'");
}

LossStream::LossStream(StreamKind kind, std::size_t n, std::size_t m, double gap, std::size_t horizon,
                       std::uint64_t seed)
    : kind_(kind), n_(n), m_(m), gap_(gap), horizon_(horizon), rng_(RngStream(seed).split(0x6c6f7373)) {
  if (n == 0 || m == 0) throw std::invalid_argument("LossStream: n and m must be positive");
  for (std::size_t i = 0; i < n; ++i) outputs_.push_back(ActionDistribution::point_mass(m, i % m));
}

LossStream LossStream::stochastic(std::size_t n, std::size_t m, double gap, std::size_t horizon,
                                  std::uint64_t seed) {
  if (!(gap >= 0.0 && gap < 1.0)) throw std::invalid_argument("stochastic stream: gap outside [0,1)");
  return LossStream(StreamKind::stochastic, n, m, gap, horizon, seed);
}

LossStream LossStream::adversarial(std::size_t n, std::size_t m, std::size_t horizon,
                                   std::uint64_t seed) {
  return LossStream(StreamKind::adversarial, n, m, 0.0, horizon, seed);
}

double LossStream::next_loss(std::size_t action, std::span<const double> alpha) {
  if (action >= m_) throw std::invalid_argument("LossStream: action out of range");
  if (kind_ == StreamKind::stochastic) {
    const double mean = action == preferred_action(0) ? 0.5 - gap_ / 2 : 0.5 + gap_ / 2;
    return rng_.bernoulli(mean) ? 1.0 : 0.0;
  }
  if (alpha.size() != n_) throw std::invalid_argument("LossStream: weight vector length");
  const std::size_t heaviest =
      static_cast<std::size_t>(std::max_element(alpha.begin(), alpha.end()) - alpha.begin());
  return action == preferred_action(heaviest) ? 1.0 : 0.0;
}

}  // namespace asax
