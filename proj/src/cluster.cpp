#include "asax/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace asax {

void ClusterSpec::validate() const {
  if (node_count < 1 || cores_per_node < 1 || !(mem_per_node > 0.0))
    throw std::invalid_argument("ClusterSpec: all sizes must be positive");
}

ClusterSpec ClusterSpec::with_total_cores(int total, int cores_per_node) {
  if (cores_per_node < 1 || total < cores_per_node || total % cores_per_node != 0)
    throw std::invalid_argument("ClusterSpec: " + std::to_string(total) +
                                " cores is not a whole number of " +
                                std::to_string(cores_per_node) + "-core nodes");
  return {total / cores_per_node, cores_per_node, 1.0};
}

void InterferenceModel::validate() const {
  if (!(contention_exponent >= 0.0)) throw std::invalid_argument("contention_exponent must be >= 0");
  if (!(mem_pressure_threshold >= 0.0)) throw std::invalid_argument("mem_pressure_threshold must be >= 0");
  if (!(min_rate_factor > 0.0 && min_rate_factor <= 1.0))
    throw std::invalid_argument("min_rate_factor must lie in (0,1]");
}

double TenantDemand::load() const {
  return cpu_demand * static_cast<double>(std::min(usable, cores)) / static_cast<double>(cores);
}

SoloRates solo_rates(const TenantDemand& t) {
  const double busy = t.load() * t.cores;
  return {busy, busy};
}

double interference_penalty(double host_load, double guest_load, double host_mem, double guest_mem,
                            const InterferenceModel& model) {
  const double overlap = std::max(0.0, host_load + guest_load - 1.0);
  double penalty = std::pow(1.0 - std::min(1.0, overlap), model.contention_exponent);
  if (host_mem + guest_mem > model.mem_pressure_threshold) penalty *= 0.5;
  return std::max(model.min_rate_factor, penalty);
}

ColocatedRates colocated_rates(const TenantDemand& host, const TenantDemand& guest, int shared_cores,
                               double quota, const InterferenceModel& model) {
  if (shared_cores < 1 || shared_cores > host.cores || shared_cores > guest.cores)
    throw std::invalid_argument("colocated_rates: shared cores outside [1, min(host, guest)]");
  if (!(quota > 0.0 && quota < 1.0)) throw std::invalid_argument("colocated_rates: quota outside (0,1)");
  const double fa = host.load();
  const double fb = guest.load();
  const double shared = shared_cores;
  const double priv = host.cores - shared_cores;

  ColocatedRates r;
  r.penalty = interference_penalty(fa, fb, host.mem_demand, guest.mem_demand, model);
  r.host_private_per_core = fa;
  r.host_shared_per_core = std::min(1.0 - quota, fa);
  r.guest_shared_per_core = std::min(quota, fb);
  r.host_busy = fa * priv + r.host_shared_per_core * shared;
  r.guest_busy = r.guest_shared_per_core * shared;
  r.host_rate = fa * priv + r.host_shared_per_core * shared * r.penalty;
  r.guest_rate = r.guest_busy * r.penalty;
  return r;
}

// ---------------------------------------------------------------------------

BackfillPlan plan_backfill(SimTime now, int free_cores, std::span<const PlannerJob> queue,
                           std::span<const PlannerRelease> releases) {
  BackfillPlan plan;
  std::vector<PlannerRelease> future(releases.begin(), releases.end());
  std::size_t i = 0;
  for (; i < queue.size() && queue[i].cores <= free_cores; ++i) {
    plan.start_now.push_back(i);
    free_cores -= queue[i].cores;
    future.push_back({queue[i].cores, now + queue[i].walltime});
  }
  if (i == queue.size()) return plan;

  const int need = queue[i].cores;
  std::stable_sort(future.begin(), future.end(),
                   [](const PlannerRelease& a, const PlannerRelease& b) { return a.at < b.at; });
  int available = free_cores;
  SimTime shadow = now;
  for (const auto& r : future) {
    if (available >= need) break;
    available += r.cores;
    shadow = std::max(now, r.at);
  }
  if (available < need) throw std::invalid_argument("plan_backfill: head can never be placed");
  int extra = available - need;

  plan.head = i;
  plan.head_reservation = shadow;
  for (std::size_t j = i + 1; j < queue.size(); ++j) {
    if (queue[j].cores > free_cores) continue;
    const bool ends_in_time = now + queue[j].walltime <= shadow;
    if (!ends_in_time && queue[j].cores > extra) continue;
    plan.start_now.push_back(j);
    free_cores -= queue[j].cores;
    if (!ends_in_time) extra -= queue[j].cores;
  }
  plan.spare_cores = extra;
  return plan;
}

// ---------------------------------------------------------------------------

std::optional<std::vector<NodeCores>> first_fit_free(int cores, std::span<const int> free_per_node) {
  std::vector<NodeCores> holds;
  int held = 0;
  for (std::size_t n = 0; n < free_per_node.size() && held < cores; ++n) {
    const int take = std::min(free_per_node[n], cores - held);
    if (take <= 0) continue;
    holds.push_back({static_cast<int>(n), take});
    held += take;
  }
  if (held < cores) return std::nullopt;
  return holds;
}

std::optional<ColocationMatch> first_fit_colocate(
    int cores, std::span<const HostCandidate> candidates,
    const std::function<double(const HostCandidate&)>& decide) {
  std::vector<std::size_t> order(candidates.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return candidates[a].allocation_id < candidates[b].allocation_id;
  });
  for (std::size_t k : order) {
    const auto& c = candidates[k];
    if (c.has_guest || c.cores < cores) continue;
    const double q = decide(c);
    if (q > 0.0) return ColocationMatch{k, q};
  }
  return std::nullopt;
}

std::optional<Placement> first_fit_match(int cores, std::span<const int> free_per_node,
                                         std::span<const HostCandidate> candidates,
                                         const std::function<double(const HostCandidate&)>& decide) {
  if (auto nodes = first_fit_free(cores, free_per_node)) {
    Placement p;
    p.kind = Placement::Kind::free;
    p.nodes = std::move(*nodes);
    return p;
  }
  const int free_total = std::accumulate(free_per_node.begin(), free_per_node.end(), 0);
  std::vector<NodeCores> held;
  if (free_total > 0) held = *first_fit_free(free_total, free_per_node);
  const int rest = cores - free_total;
  if (auto m = first_fit_colocate(rest, candidates, decide)) {
    Placement p;
    p.kind = Placement::Kind::colocated;
    p.nodes = std::move(held);
    p.match = *m;
    p.shared_cores = rest;
    return p;
  }
  return std::nullopt;
}

}  // namespace asax
