#pragma once

// Discrete-event cluster simulator.
//
// Progress is fluid: a stage is a pool of task_count * work_per_task
// core-seconds drained at the stage's current rate, and task k completes
// when k * work_per_task has been delivered. Rates only change at events,
// so completions in between are computed in closed form.

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "asax/cluster.hpp"
#include "asax/experts.hpp"
#include "asax/hedge.hpp"
#include "asax/jobmodel.hpp"
#include "asax/sim_time.hpp"

namespace asax {

enum class Strategy { space_sharing_backfill, static_50, asax };

std::string to_string(Strategy s);
Strategy parse_strategy(const std::string& s);

// Job completion is handled as part of its last stage completion, and
// quota decisions are taken inside the scheduling pass that follows a wake.
enum class EventKind : int {
  stage_complete = 0,
  job_submit = 1,
  scheduler_wake = 2,
};

struct SimEvent {
  SimTime time = 0;
  EventKind kind = EventKind::scheduler_wake;
  std::uint64_t seq = 0;
  int job = -1;          // index into the workload
  std::uint64_t epoch = 0;

  // Total order used by the queue: time, then kind, then insertion order.
  bool operator>(const SimEvent& o) const {
    if (time != o.time) return time > o.time;
    if (kind != o.kind) return static_cast<int>(kind) > static_cast<int>(o.kind);
    return seq > o.seq;
  }
};

struct SimConfig {
  ClusterSpec cluster;
  InterferenceModel interference;
  Strategy strategy = Strategy::space_sharing_backfill;
  std::uint64_t seed = 0;

  // asax only.
  ExpertEnsembleSpec experts = standard_library(10);
  LearningRateSchedule schedule = LearningRateSchedule::default_for(4);
  SimTime decision_tick = 10 * kMillisPerSecond;
  SimTime throughput_window = kDefaultThroughputWindow;

  double static_quota = 0.5;

  // Debug aids.
  bool check_invariants = false;
  bool keep_completion_log = false;
  bool trace_reservations = false;
};

struct JobRecord {
  int id = 0;
  std::string template_name;
  int cores = 0;
  double walltime = 0.0;  // seconds
  SimTime submit = 0;
  SimTime start = 0;
  SimTime end = 0;
  SimTime waiting = 0;
  SimTime response = 0;
  SimTime runtime = 0;
  double loss = 0.0;
  double solo_runtime = 0.0;  // seconds
  bool colocated = false;     // started as a guest
  double guest_quota = 0.0;
  int host_id = 0;            // job id of the host, for guests
  int hosted_guests = 0;
  std::vector<SimTime> completions;  // only with keep_completion_log
};

struct UtilSample {
  SimTime time = 0;
  double cpu_cluster = 0.0;    // busy cores / total cores
  double cpu_allocated = 0.0;  // busy cores / allocated cores
  double mem = 0.0;            // used node memory / total node memory
};

struct ReservationTrace {
  SimTime now = 0;
  int job = -1;
  SimTime reservation = 0;
};

struct DecisionTrace {
  SimTime time = 0;
  int host = -1;
  int guest = -1;
  std::size_t action = 0;
  double quota = 0.0;
  StateVector state;
};

struct RunRecord {
  Strategy strategy = Strategy::space_sharing_backfill;
  int cluster_cores = 0;
  std::uint64_t seed = 0;
  std::uint64_t fingerprint = 0;
  std::vector<JobRecord> jobs;
  std::vector<UtilSample> utilization;  // piecewise constant from each sample to the next
  SimTime makespan = 0;
  double mean_cpu_cluster = 0.0;
  double mean_cpu_allocated = 0.0;
  double mean_mem = 0.0;
  RegretLedger ledger;
  std::vector<DecisionTrace> decisions;
  std::vector<ReservationTrace> reservations;
};

// Throws std::invalid_argument if any job does not validate or asks for more
// cores than the cluster has.
RunRecord simulate(const SimConfig& config, const std::vector<JobSpec>& workload);

// FNV-1a over a canonical text form of the configuration and workload.
std::uint64_t fingerprint(const SimConfig& config, const std::vector<JobSpec>& workload);

}  // namespace asax
