#include "asax/jobmodel.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace asax {

void StageSpec::validate() const {
  if (task_count < 1) throw std::invalid_argument("stage: task_count must be >= 1");
  if (!(work_per_task > 0.0) || !std::isfinite(work_per_task))
    throw std::invalid_argument("stage: work_per_task must be positive");
  // A stage with zero CPU demand would never progress.
  if (!(cpu_demand > 0.0 && cpu_demand <= 1.0))
    throw std::invalid_argument("stage: cpu_demand must lie in (0,1]");
  if (!(mem_demand >= 0.0 && mem_demand <= 1.0))
    throw std::invalid_argument("stage: mem_demand must lie in [0,1]");
}

int JobSpec::total_tasks() const {
  int n = 0;
  for (const auto& s : stages) n += s.task_count;
  return n;
}

double JobSpec::total_work() const {
  double w = 0.0;
  for (const auto& s : stages) w += s.task_count * s.work_per_task;
  return w;
}

double JobSpec::solo_runtime() const {
  double t = 0.0;
  for (const auto& s : stages)
    t += s.task_count * s.work_per_task / (s.cpu_demand * s.usable_cores(requested_cores));
  return t;
}

void JobSpec::validate() const {
  const std::string who = "job " + std::to_string(id);
  if (requested_cores < 1) throw std::invalid_argument(who + ": requested_cores must be >= 1");
  if (!(walltime > 0.0) || !std::isfinite(walltime))
    throw std::invalid_argument(who + ": walltime must be positive");
  if (!(submit_time >= 0.0) || !std::isfinite(submit_time))
    throw std::invalid_argument(who + ": submit_time must be >= 0");
  if (stages.empty()) throw std::invalid_argument(who + ": needs at least one stage");
  for (const auto& s : stages) {
    try {
      s.validate();
    } catch (const std::invalid_argument& e) {
      throw std::invalid_argument(who + ": " + e.what());
    }
  }
}

JobRuntimeState JobRuntimeState::fresh(const JobSpec& spec, SimTime started_at) {
  JobRuntimeState s;
  s.started_at = started_at;
  s.completed.assign(spec.stages.size(), 0);
  return s;
}

void JobRuntimeState::record_completion(std::size_t stage, SimTime at) {
  if (!completions.empty() && at < completions.back())
    throw std::logic_error("record_completion: time went backwards");
  ++completed.at(stage);
  completions.push_back(at);
}

double loss(double actual_runtime, double walltime) {
  if (!(walltime > 0.0)) throw std::invalid_argument("loss: walltime must be positive");
  if (actual_runtime <= walltime) return 0.0;
  return std::min(1.0, (actual_runtime - walltime) / walltime);
}

int remaining_tasks(const JobSpec& spec, const JobRuntimeState& state) {
  int left = 0;
  for (std::size_t i = 0; i < spec.stages.size(); ++i) {
    const int done = i < state.completed.size() ? state.completed[i] : 0;
    left += spec.stages[i].task_count - done;
  }
  return left;
}

double measured_throughput(const JobRuntimeState& state, SimTime now, SimTime window) {
  if (window <= 0) throw std::invalid_argument("measured_throughput: window must be positive");
  const auto& log = state.completions;
  const auto lo = std::lower_bound(log.begin(), log.end(), now - window);
  const auto hi = std::lower_bound(lo, log.end(), now);
  return static_cast<double>(hi - lo) / to_seconds(window);
}

double happiness_value(double remaining_time, double throughput, int remaining) {
  if (remaining <= 0) return kHappinessDone;
  if (throughput <= 0.0) return 0.0;
  return std::max(0.0, remaining_time) * throughput / remaining;
}

double happiness(SimTime now, const JobSpec& spec, const JobRuntimeState& state, SimTime window) {
  if (now < state.started_at) throw std::invalid_argument("happiness: now precedes job start");
  const SimTime deadline = state.started_at + from_seconds(spec.walltime);
  const double remaining_time = to_seconds(std::max<SimTime>(0, deadline - now));
  return happiness_value(remaining_time, measured_throughput(state, now, window),
                         remaining_tasks(spec, state));
}

}  // namespace asax
