#pragma once

// Workflow templates, the 15-job experiment mix, workload documents, and
// synthetic loss streams for regret experiments.

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "asax/hedge.hpp"
#include "asax/jobmodel.hpp"
#include "asax/rng.hpp"
#include "json.hpp"

namespace asax {

enum class Template { montage, blast, stats, synthetic };

std::string to_string(Template t);  // "montage-like", ...
Template parse_template(const std::string& s);

// Stage skeleton of a template sized for `cores` cores.
std::vector<StageSpec> template_stages(Template t, int cores);

// A job built from a template; walltime = solo runtime * walltime_factor.
JobSpec make_job(Template t, int id, int cores, double walltime_factor, double submit_time = 0.0);

struct MixOptions {
  double submit_window = 0.0;   // seconds; 0 puts every job at t = 0
  double walltime_factor = 1.5;
};

struct WorkloadMix {
  std::uint64_t seed = 0;
  std::vector<JobSpec> jobs;

  int total_cores() const;
};

// 4 montage, 4 blast and 4 stats jobs at 8, 16, 32 and 64 cores plus 3
// synthetic jobs at 16, 32 and 64 cores, in a seeded order. Ids are 1..15 in
// queue order.
WorkloadMix standard_mix(std::uint64_t seed, const MixOptions& options = {});

nlohmann::json to_json(const WorkloadMix& mix);
WorkloadMix workload_from_json(const nlohmann::json& doc);
WorkloadMix load_workload_file(const std::filesystem::path& path);

// ---------------------------------------------------------------------------
// Loss streams
//
// Expert i is a point mass on action i mod m.

enum class StreamKind { stochastic, adversarial };

std::string to_string(StreamKind k);
StreamKind parse_stream_kind(const std::string& s);

class LossStream {
 public:
  // Action of expert 0 has mean loss 0.5 - gap/2, every other action
  // 0.5 + gap/2; losses are Bernoulli draws.
  static LossStream stochastic(std::size_t n, std::size_t m, double gap, std::size_t horizon,
                               std::uint64_t seed);
  // Loss 1 on the action of the currently heaviest expert (lowest index on
  // ties), 0 elsewhere.
  static LossStream adversarial(std::size_t n, std::size_t m, std::size_t horizon,
                                std::uint64_t seed);

  StreamKind kind() const { return kind_; }
  std::size_t horizon() const { return horizon_; }
  std::size_t expert_count() const { return n_; }
  std::size_t action_count() const { return m_; }
  std::size_t preferred_action(std::size_t expert) const { return expert % m_; }

  const std::vector<ActionDistribution>& expert_outputs() const { return outputs_; }

  // Loss of `action` at the next step given the learner's current weights.
  // Consumes randomness for stochastic streams.
  double next_loss(std::size_t action, std::span<const double> alpha);

 private:
  LossStream(StreamKind kind, std::size_t n, std::size_t m, double gap, std::size_t horizon,
             std::uint64_t seed);

  StreamKind kind_;
  std::size_t n_;
  std::size_t m_;
  double gap_;
  std::size_t horizon_;
  RngStream rng_;
  std::vector<ActionDistribution> outputs_;
};

}  // namespace asax
