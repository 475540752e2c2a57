#pragma once

// Cluster geometry, the co-location interference model, the backfill
// planner and First-Fit matching. Everything here is a pure function of its
// inputs; the event loop lives in simulator.hpp.

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "asax/sim_time.hpp"

namespace asax {

struct ClusterSpec {
  int node_count = 2;
  int cores_per_node = 32;
  double mem_per_node = 1.0;

  int total_cores() const { return node_count * cores_per_node; }
  void validate() const;

  // 32-core nodes: 64 -> 2 nodes, 128 -> 4, 256 -> 8.
  static ClusterSpec with_total_cores(int total, int cores_per_node = 32);

  bool operator==(const ClusterSpec&) const = default;
};

struct InterferenceModel {
  double contention_exponent = 1.0;
  double mem_pressure_threshold = 0.9;
  double min_rate_factor = 0.25;

  void validate() const;
  bool operator==(const InterferenceModel&) const = default;
};

// What one tenant asks of its cores at this instant.
struct TenantDemand {
  int cores = 1;          // allocated (host) or shared (guest) cores
  int usable = 1;         // cores the current stage can keep busy
  double cpu_demand = 1.0;
  double mem_demand = 0.0;

  // Fraction of the allocation the stage keeps busy: cpu_demand * usable / cores.
  double load() const;
};

struct SoloRates {
  double rate = 0.0;  // core-seconds of progress per second
  double busy = 0.0;  // core-equivalents kept busy
};

SoloRates solo_rates(const TenantDemand& t);

struct ColocatedRates {
  double penalty = 1.0;
  double host_rate = 0.0;
  double guest_rate = 0.0;
  // Busy core-equivalents before the penalty is applied.
  double host_busy = 0.0;
  double guest_busy = 0.0;
  // Busy fraction of one shared core for each tenant, and of one
  // host-only core.
  double host_shared_per_core = 0.0;
  double guest_shared_per_core = 0.0;
  double host_private_per_core = 0.0;
};

double interference_penalty(double host_load, double guest_load, double host_mem, double guest_mem,
                            const InterferenceModel& model);

// The guest shares `shared` of the host's cores; on those the host is capped
// at 1 - quota and the guest at quota. guest_rate and guest_busy cover the
// shared cores only; a guest may hold further cores of its own.
ColocatedRates colocated_rates(const TenantDemand& host, const TenantDemand& guest, int shared,
                               double quota, const InterferenceModel& model);

// ---------------------------------------------------------------------------
// Backfilling

struct PlannerJob {
  int cores = 1;
  SimTime walltime = 0;
};

struct PlannerRelease {
  int cores = 0;
  SimTime at = 0;
};

struct BackfillPlan {
  std::vector<std::size_t> start_now;  // indices into the queue, ascending
  std::optional<std::size_t> head;     // first queue index left waiting
  SimTime head_reservation = 0;        // earliest start promised to the head
  int spare_cores = 0;  // cores free at the reservation beyond the head's need, after backfills
};

// One pass of EASY backfilling. Jobs start in FIFO order while they fit.
// The first job that does not fit gets a reservation at the earliest time
// enough cores are released; a later job may jump ahead only if it fits now
// and either ends by that time (by its walltime) or uses cores the head will
// not need.
BackfillPlan plan_backfill(SimTime now, int free_cores, std::span<const PlannerJob> queue,
                           std::span<const PlannerRelease> releases);

// ---------------------------------------------------------------------------
// First-Fit

struct NodeCores {
  int node = 0;
  int cores = 0;
  bool operator==(const NodeCores&) const = default;
};

// Takes free cores in ascending node order until the request is met.
// Returns nothing (and holds nothing) if the request cannot be met in full.
std::optional<std::vector<NodeCores>> first_fit_free(int cores, std::span<const int> free_per_node);

struct HostCandidate {
  int allocation_id = 0;
  int cores = 0;  // cores the allocation could share
  bool has_guest = false;
};

struct ColocationMatch {
  std::size_t candidate = 0;
  double quota = 0.0;
};

// Scans candidates in ascending allocation id. A candidate is eligible if
// it has no guest and at least `cores` cores; decide() returns the quota it
// lends, and 0 means decline and keep scanning.
std::optional<ColocationMatch> first_fit_colocate(
    int cores, std::span<const HostCandidate> candidates,
    const std::function<double(const HostCandidate&)>& decide);

struct Placement {
  enum class Kind { free, colocated };
  Kind kind = Kind::free;
  std::vector<NodeCores> nodes;  // free cores taken, all of the request for free placements
  ColocationMatch match;         // co-located placements: the host lends the rest
  int shared_cores = 0;
};

// Free cores first in ascending node order. If they fall short they are held
// while one ongoing allocation is sought for the remainder; without one the
// holds are dropped and nothing is placed.
std::optional<Placement> first_fit_match(int cores, std::span<const int> free_per_node,
                                         std::span<const HostCandidate> candidates,
                                         const std::function<double(const HostCandidate&)>& decide);

}  // namespace asax
