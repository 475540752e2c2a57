#pragma once

// Jobs, workflow stages, the happiness metric and the walltime loss.

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "asax/experts.hpp"
#include "asax/sim_time.hpp"

namespace asax {

struct StageSpec {
  StageType kind = StageType::parallel;
  int task_count = 1;
  double work_per_task = 1.0;  // core-seconds
  double cpu_demand = 1.0;     // fraction of the stage's cores actually kept busy
  double mem_demand = 0.0;     // fraction of node memory

  // Cores the stage can use at once on a C-core allocation.
  int usable_cores(int allocated) const { return kind == StageType::parallel ? allocated : 1; }

  void validate() const;
  bool operator==(const StageSpec&) const = default;
};

struct JobSpec {
  int id = 0;
  std::string template_name;
  int requested_cores = 1;
  double walltime = 1.0;  // seconds
  double submit_time = 0.0;  // seconds
  std::vector<StageSpec> stages;

  int total_tasks() const;
  double total_work() const;  // core-seconds
  // Runtime alone on an idle allocation of requested_cores.
  double solo_runtime() const;

  void validate() const;
  bool operator==(const JobSpec&) const = default;
};

constexpr SimTime kDefaultThroughputWindow = 30 * kMillisPerSecond;

struct JobRuntimeState {
  SimTime started_at = 0;
  std::vector<int> completed;      // per stage
  std::vector<SimTime> completions;  // every task completion, non-decreasing
  double quota_granted_away = 0.0;

  static JobRuntimeState fresh(const JobSpec& spec, SimTime started_at);

  void record_completion(std::size_t stage, SimTime at);
};

// 0 if actual <= walltime, else min(1, (actual - walltime) / walltime).
double loss(double actual_runtime, double walltime);

int remaining_tasks(const JobSpec& spec, const JobRuntimeState& state);

// Completions in [now - window, now) divided by the window, in tasks/second.
double measured_throughput(const JobRuntimeState& state, SimTime now,
                           SimTime window = kDefaultThroughputWindow);

// Returned by happiness() once every task is done.
constexpr double kHappinessDone = std::numeric_limits<double>::infinity();

// remaining_time * throughput / remaining_tasks with
// remaining_time = max(0, started_at + walltime - now).
double happiness(SimTime now, const JobSpec& spec, const JobRuntimeState& state,
                 SimTime window = kDefaultThroughputWindow);

// The same formula on raw inputs, in seconds and tasks/second.
double happiness_value(double remaining_time, double throughput, int remaining);

}  // namespace asax
