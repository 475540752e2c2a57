#include "asax/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <numeric>
#include <queue>
#include <stdexcept>
#include <tuple>

namespace asax {

std::string to_string(Strategy s) {
  switch (s) {
    case Strategy::space_sharing_backfill: return "space-sharing-backfill";
    case Strategy::static_50: return "static-50";
    case Strategy::asax: return "asax";
  }
  return "?";
}

Strategy parse_strategy(const std::string& s) {
  for (Strategy k : {Strategy::space_sharing_backfill, Strategy::static_50, Strategy::asax})
    if (to_string(k) == s) return k;
  if (s == "space-sharing") return Strategy::space_sharing_backfill;
  throw std::invalid_argument("unknown strategy '" + s + "'");
}

namespace {

constexpr std::uint64_t kDecisionStreamTag = 0x61736178;  // "asax"

// A decision taken against a host, scored when the host finishes.
struct PendingCase {
  std::vector<double> expert_probs;
  std::size_t action = 0;
  std::vector<double> state;
};

struct Live {
  int job = -1;
  int alloc_id = -1;
  int cores = 0;
  std::vector<NodeCores> nodes;  // cores this job owns, including any it lends
  std::size_t stage = 0;
  double stage_work = 0.0;  // core-seconds delivered in the current stage
  int stage_done = 0;       // tasks
  SimTime last = 0;         // time stage_work was last brought up to date
  JobRuntimeState rt;
  SimTime start = 0;
  int host = -1;                 // job index of the host while running as a guest
  std::vector<NodeCores> shared;  // the host's cores this guest runs on
  int shared_cores = 0;
  int guest = -1;  // job index of the guest while hosting
  double quota_out = 0.0;
  double rate = 0.0;
  double busy = 0.0;
  // Busy fraction of one core: owned and not lent, lent to the guest (the
  // host's part), and borrowed from the host (the guest's part).
  double own_per_core = 0.0;
  double lent_per_core = 0.0;
  double shared_per_core = 0.0;
  std::vector<PendingCase> cases;
};

SimTime ceil_ms(double seconds) {
  return static_cast<SimTime>(std::ceil(seconds * 1000.0 - 1e-6));
}

class Simulation {
 public:
  Simulation(const SimConfig& cfg, const std::vector<JobSpec>& jobs)
      : cfg_(cfg),
        jobs_(jobs),
        live_(jobs.size()),
        free_(static_cast<std::size_t>(cfg.cluster.node_count), cfg.cluster.cores_per_node),
        rng_(RngStream(cfg.seed).split(kDecisionStreamTag)),
        learner_(cfg.experts.size(), cfg.schedule) {}

  RunRecord run();

 private:
  TenantDemand demand(const Live& l) const;
  void advance(SimTime to);
  void complete_stages(SimTime now);
  void finish(int j, SimTime now);
  void schedule_pass(SimTime now);
  void start_free(int j, std::vector<NodeCores> nodes, SimTime now);
  void start_guest(int j, std::vector<NodeCores> nodes, int host, int shared, double quota, SimTime now);
  double decide(int host, int guest, SimTime now);
  StateVector host_state(const Live& h, SimTime now) const;
  void recompute_rates();
  void sample_utilization(SimTime now);
  void check_invariants() const;
  void push(SimTime t, EventKind kind, int job = -1, std::uint64_t epoch = 0);
  void schedule_stage_events();
  std::vector<int> running_by_alloc() const;

  const SimConfig& cfg_;
  const std::vector<JobSpec>& jobs_;
  std::vector<std::optional<Live>> live_;
  std::vector<int> free_;
  std::vector<int> waiting_;
  std::vector<JobRecord> records_;
  std::priority_queue<SimEvent, std::vector<SimEvent>, std::greater<>> events_;
  std::uint64_t seq_ = 0;
  std::uint64_t epoch_ = 0;
  int next_alloc_ = 0;
  std::optional<SimTime> pending_wake_;
  RngStream rng_;
  AsaxLearner learner_;
  // Experts see only the host, so a decline stands until the host's state
  // reaches a different leaf.
  std::map<std::pair<int, std::vector<std::size_t>>, bool> declined_;
  RunRecord out_;
};

void Simulation::push(SimTime t, EventKind kind, int job, std::uint64_t epoch) {
  events_.push(SimEvent{t, kind, seq_++, job, epoch});
}

TenantDemand Simulation::demand(const Live& l) const {
  const auto& st = jobs_[l.job].stages[l.stage];
  return {l.cores, st.usable_cores(l.cores), st.cpu_demand, st.mem_demand};
}

std::vector<int> Simulation::running_by_alloc() const {
  std::vector<int> r;
  for (std::size_t j = 0; j < live_.size(); ++j)
    if (live_[j]) r.push_back(static_cast<int>(j));
  std::sort(r.begin(), r.end(), [&](int a, int b) { return live_[a]->alloc_id < live_[b]->alloc_id; });
  return r;
}

void Simulation::advance(SimTime to) {
  for (auto& slot : live_) {
    if (!slot) continue;
    Live& l = *slot;
    if (to <= l.last) continue;
    const auto& st = jobs_[l.job].stages[l.stage];
    const double w0 = l.stage_work;
    while (l.stage_done < st.task_count) {
      const double target = (l.stage_done + 1) * st.work_per_task;
      // A task already covered by delivered work completes no earlier than
      // the start of this interval.
      const SimTime at = l.last + std::max<SimTime>(0, ceil_ms((target - w0) / l.rate));
      if (at > to) break;
      ++l.stage_done;
      l.rt.record_completion(l.stage, at);
    }
    l.stage_work = std::min(st.task_count * st.work_per_task, w0 + l.rate * to_seconds(to - l.last));
    l.last = to;
  }
}

void Simulation::complete_stages(SimTime now) {
  bool again = true;
  while (again) {
    again = false;
    for (std::size_t j = 0; j < live_.size(); ++j) {
      if (!live_[j]) continue;
      Live& l = *live_[j];
      const auto& spec = jobs_[l.job];
      if (l.stage_done < spec.stages[l.stage].task_count) continue;
      if (l.stage + 1 == spec.stages.size()) {
        finish(static_cast<int>(j), now);
        again = true;
        break;
      }
      ++l.stage;
      l.stage_done = 0;
      l.stage_work = 0.0;
      l.last = now;
    }
  }
}

void Simulation::finish(int j, SimTime now) {
  Live& l = *live_[j];
  const JobSpec& spec = jobs_[j];
  JobRecord& rec = records_[j];
  rec.start = l.start;
  rec.end = now;
  rec.waiting = l.start - from_seconds(spec.submit_time);
  rec.response = now - from_seconds(spec.submit_time);
  rec.runtime = now - l.start;
  rec.loss = loss(to_seconds(rec.runtime), spec.walltime);
  if (cfg_.keep_completion_log) rec.completions = l.rt.completions;

  if (l.host >= 0) {
    Live& h = *live_[l.host];
    h.guest = -1;
    h.quota_out = 0.0;
    h.rt.quota_granted_away = 0.0;
  }
  // Release every owned core not lent out; the guest takes over what it
  // shared.
  std::vector<int> keep(free_.size(), 0);
  if (l.guest >= 0) {
    Live& g = *live_[l.guest];
    for (const auto& nc : g.shared) {
      keep[nc.node] += nc.cores;
      auto it = std::find_if(g.nodes.begin(), g.nodes.end(), [&](const NodeCores& o) { return o.node == nc.node; });
      if (it == g.nodes.end())
        g.nodes.push_back(nc);
      else
        it->cores += nc.cores;
    }
    std::sort(g.nodes.begin(), g.nodes.end(), [](const NodeCores& a, const NodeCores& b) { return a.node < b.node; });
    g.shared.clear();
    g.shared_cores = 0;
    g.host = -1;
  }
  for (const auto& nc : l.nodes) free_[nc.node] += nc.cores - keep[nc.node];

  for (auto& c : l.cases)
    learner_.observe(c.expert_probs, c.action, rec.loss, c.state);
  live_[j].reset();
}

StateVector Simulation::host_state(const Live& h, SimTime now) const {
  const JobSpec& spec = jobs_[h.job];
  const auto& st = spec.stages[h.stage];
  StateVector s;
  // Candidates neither host nor share, so the solo load is the current busy
  // fraction even for a job placed earlier in this pass.
  s.cpu_util = std::clamp(demand(h).load(), 0.0, 1.0);
  s.mem_util = st.mem_demand;
  s.stage_type = st.kind;
  s.interval = std::clamp(to_seconds(now - h.start) / spec.walltime, 0.0, 1.0);
  s.happiness = happiness(now, spec, h.rt, cfg_.throughput_window);
  return s;
}

double Simulation::decide(int host, int guest, SimTime now) {
  if (cfg_.strategy == Strategy::static_50) return cfg_.static_quota;
  Live& h = *live_[host];
  const StateVector state = host_state(h, now);
  auto sig = leaf_signature(cfg_.experts, state);
  auto key = std::make_pair(h.alloc_id, std::move(sig));
  if (declined_.count(key)) return 0.0;

  const auto outputs = evaluate_ensemble(cfg_.experts, state);
  const std::size_t a = learner_.choose(outputs, rng_);
  const double q = cfg_.experts.actions.quota(a);

  PendingCase c;
  c.action = a;
  for (const auto& p : outputs) c.expert_probs.push_back(p[a]);
  c.state = {state.cpu_util, state.mem_util, state.stage_type == StageType::parallel ? 1.0 : 0.0,
             state.interval, state.happiness};
  h.cases.push_back(std::move(c));
  out_.decisions.push_back({now, host, guest, a, q, state});
  if (q == 0.0) declined_.emplace(std::move(key), true);
  return q;
}

void Simulation::start_free(int j, std::vector<NodeCores> nodes, SimTime now) {
  for (const auto& nc : nodes) free_[nc.node] -= nc.cores;
  Live l;
  l.job = j;
  l.alloc_id = next_alloc_++;
  l.cores = jobs_[j].requested_cores;
  l.nodes = std::move(nodes);
  l.start = now;
  l.last = now;
  l.rt = JobRuntimeState::fresh(jobs_[j], now);
  live_[j] = std::move(l);
}

void Simulation::start_guest(int j, std::vector<NodeCores> nodes, int host, int shared, double quota,
                             SimTime now) {
  for (const auto& nc : nodes) free_[nc.node] -= nc.cores;
  Live& h = *live_[host];
  std::vector<NodeCores> borrowed;
  int taken = 0;
  for (const auto& nc : h.nodes) {
    if (taken == shared) break;
    const int k = std::min(nc.cores, shared - taken);
    borrowed.push_back({nc.node, k});
    taken += k;
  }
  h.guest = j;
  h.quota_out = quota;
  h.rt.quota_granted_away = quota;
  ++records_[host].hosted_guests;

  Live g;
  g.job = j;
  g.alloc_id = next_alloc_++;
  g.cores = jobs_[j].requested_cores;
  g.nodes = std::move(nodes);
  g.shared = std::move(borrowed);
  g.shared_cores = shared;
  g.start = now;
  g.last = now;
  g.host = host;
  g.rt = JobRuntimeState::fresh(jobs_[j], now);
  live_[j] = std::move(g);
  records_[j].colocated = true;
  records_[j].guest_quota = quota;
  records_[j].host_id = jobs_[host].id;
}

void Simulation::schedule_pass(SimTime now) {
  if (waiting_.empty()) return;
  const int total_free = std::accumulate(free_.begin(), free_.end(), 0);

  std::vector<PlannerJob> queue;
  for (int j : waiting_) queue.push_back({jobs_[j].requested_cores, from_seconds(jobs_[j].walltime)});
  std::vector<PlannerRelease> releases;
  auto expected_end = [&](const Live& l) {
    return std::max(now, l.start + from_seconds(jobs_[l.job].walltime));
  };
  for (const auto& slot : live_) {
    if (!slot) continue;
    const Live& l = *slot;
    // A guest's borrowed cores are released with its host's.
    int own = l.cores - l.shared_cores;
    if (l.guest >= 0) {
      const Live& g = *live_[l.guest];
      own -= g.shared_cores;
      releases.push_back({g.shared_cores, std::max(expected_end(l), expected_end(g))});
    }
    releases.push_back({own, expected_end(l)});
  }

  const BackfillPlan plan = plan_backfill(now, total_free, queue, releases);
  if (plan.head && cfg_.trace_reservations)
    out_.reservations.push_back({now, waiting_[*plan.head], plan.head_reservation});

  std::vector<bool> started(waiting_.size(), false);
  for (std::size_t k : plan.start_now) {
    const int j = waiting_[k];
    auto nodes = first_fit_free(jobs_[j].requested_cores, free_);
    if (!nodes) throw std::logic_error("planner placed a job that does not fit");
    start_free(j, std::move(*nodes), now);
    started[k] = true;
  }

  if (cfg_.strategy != Strategy::space_sharing_backfill) {
    int spare = plan.spare_cores;
    for (std::size_t k = 0; k < waiting_.size(); ++k) {
      if (started[k]) continue;
      const int j = waiting_[k];
      const int held = std::accumulate(free_.begin(), free_.end(), 0);
      // Jobs that fit in free cores were held back by the planner.
      if (held >= jobs_[j].requested_cores) continue;
      const int rest = jobs_[j].requested_cores - held;
      const SimTime guest_end = now + from_seconds(jobs_[j].walltime);
      // A guest keeps its cores after the host leaves. Like any other
      // backfill it may not hold cores the head is promised past its
      // reservation.
      const bool guarded = plan.head && k != *plan.head;
      auto delaying = [&](const Live& host) {
        int n = guest_end > plan.head_reservation ? held : 0;
        if (guest_end > std::max(plan.head_reservation, expected_end(host))) n += rest;
        return n;
      };

      std::vector<HostCandidate> cands;
      std::map<int, int> owner_of;  // allocation id -> job index
      for (int o : running_by_alloc()) {
        const Live& l = *live_[o];
        if (l.host >= 0) continue;
        cands.push_back({l.alloc_id, l.cores, l.guest >= 0});
        owner_of[l.alloc_id] = o;
      }
      auto placement = first_fit_match(jobs_[j].requested_cores, free_, cands, [&](const HostCandidate& c) {
        const int host = owner_of.at(c.allocation_id);
        if (guarded && delaying(*live_[host]) > spare) return 0.0;
        return decide(host, j, now);
      });
      if (!placement) continue;
      const int host = owner_of.at(cands[placement->match.candidate].allocation_id);
      if (guarded) spare -= delaying(*live_[host]);
      start_guest(j, std::move(placement->nodes), host, placement->shared_cores, placement->match.quota, now);
      started[k] = true;
    }
  }

  std::vector<int> still;
  for (std::size_t k = 0; k < waiting_.size(); ++k)
    if (!started[k]) still.push_back(waiting_[k]);
  waiting_ = std::move(still);
}

void Simulation::recompute_rates() {
  for (auto& slot : live_) {
    if (!slot || slot->host >= 0) continue;
    Live& h = *slot;
    const TenantDemand hd = demand(h);
    h.own_per_core = hd.load();
    if (h.guest < 0) {
      const SoloRates r = solo_rates(hd);
      h.rate = r.rate;
      h.busy = r.busy;
      h.lent_per_core = 0.0;
      continue;
    }
    Live& g = *live_[h.guest];
    const TenantDemand gd = demand(g);
    const ColocatedRates r = colocated_rates(hd, gd, g.shared_cores, h.quota_out, cfg_.interference);
    h.rate = r.host_rate;
    h.busy = r.host_busy;
    h.lent_per_core = r.host_shared_per_core;
    const double own = (g.cores - g.shared_cores) * gd.load();
    g.rate = r.guest_rate + own;
    g.busy = r.guest_busy + own;
    g.own_per_core = gd.load();
    g.lent_per_core = 0.0;
    g.shared_per_core = r.guest_shared_per_core;
  }
}

void Simulation::sample_utilization(SimTime now) {
  const auto& cl = cfg_.cluster;
  double busy = 0.0;
  double mem = 0.0;
  for (const auto& slot : live_) {
    if (!slot) continue;
    const Live& l = *slot;
    busy += l.busy;
    const double ml = jobs_[l.job].stages[l.stage].mem_demand;
    int lent = 0;
    double mg = 0.0;
    if (l.guest >= 0) {
      const Live& g = *live_[l.guest];
      lent = g.shared_cores;
      mg = jobs_[g.job].stages[g.stage].mem_demand;
    }
    const int own = l.cores - l.shared_cores;
    mem += ml * (own - lent) + std::min(1.0, ml + mg) * lent;
  }
  const int allocated = cl.total_cores() - std::accumulate(free_.begin(), free_.end(), 0);
  UtilSample s;
  s.time = now;
  s.cpu_cluster = busy / cl.total_cores();
  s.cpu_allocated = allocated > 0 ? busy / allocated : 0.0;
  s.mem = mem / (cl.cores_per_node * cl.node_count);
  if (!out_.utilization.empty() && out_.utilization.back().time == now)
    out_.utilization.back() = s;
  else
    out_.utilization.push_back(s);
}

void Simulation::check_invariants() const {
  const auto& cl = cfg_.cluster;
  std::vector<double> busy(free_.size(), 0.0);
  std::vector<int> owned(free_.size(), 0);
  for (std::size_t j = 0; j < live_.size(); ++j) {
    if (!live_[j]) continue;
    const Live& l = *live_[j];
    if (l.host >= 0) {
      const Live& h = *live_.at(l.host);
      if (h.guest != static_cast<int>(j) || h.host >= 0 || l.guest >= 0)
        throw std::logic_error("invariant: broken host/guest link");
      for (const auto& nc : l.shared) busy[nc.node] += nc.cores * l.shared_per_core;
    }
    if (l.guest >= 0 && live_.at(l.guest)->host != static_cast<int>(j))
      throw std::logic_error("invariant: broken host/guest link");
    int own = 0;
    for (const auto& nc : l.nodes) own += nc.cores;
    if (own + l.shared_cores != l.cores) throw std::logic_error("invariant: job core count");
    std::vector<int> lent(free_.size(), 0);
    if (l.guest >= 0)
      for (const auto& nc : live_[l.guest]->shared) lent[nc.node] += nc.cores;
    for (const auto& nc : l.nodes) {
      owned[nc.node] += nc.cores;
      busy[nc.node] += (nc.cores - lent[nc.node]) * l.own_per_core + lent[nc.node] * l.lent_per_core;
    }
  }
  for (std::size_t n = 0; n < free_.size(); ++n) {
    if (free_[n] < 0 || owned[n] + free_[n] != cl.cores_per_node)
      throw std::logic_error("invariant: core accounting on node " + std::to_string(n));
    if (busy[n] > cl.cores_per_node + 1e-9)
      throw std::logic_error("invariant: node " + std::to_string(n) + " over-subscribed");
  }
}

void Simulation::schedule_stage_events() {
  ++epoch_;
  for (std::size_t j = 0; j < live_.size(); ++j) {
    if (!live_[j]) continue;
    const Live& l = *live_[j];
    const auto& st = jobs_[l.job].stages[l.stage];
    const double left = st.task_count * st.work_per_task - l.stage_work;
    push(l.last + std::max<SimTime>(0, ceil_ms(left / l.rate)), EventKind::stage_complete,
         static_cast<int>(j), epoch_);
  }
}

RunRecord Simulation::run() {
  out_.strategy = cfg_.strategy;
  out_.cluster_cores = cfg_.cluster.total_cores();
  out_.seed = cfg_.seed;
  out_.fingerprint = fingerprint(cfg_, jobs_);

  records_.resize(jobs_.size());
  for (std::size_t j = 0; j < jobs_.size(); ++j) {
    const JobSpec& s = jobs_[j];
    JobRecord& r = records_[j];
    r.id = s.id;
    r.template_name = s.template_name;
    r.cores = s.requested_cores;
    r.walltime = s.walltime;
    r.submit = from_seconds(s.submit_time);
    r.solo_runtime = s.solo_runtime();
    push(r.submit, EventKind::job_submit, static_cast<int>(j));
  }
  if (jobs_.empty()) {
    out_.ledger = learner_.ledger();
    return out_;
  }

  SimTime now = 0;
  std::size_t finished = 0;
  while (!events_.empty()) {
    const SimTime t = events_.top().time;
    now = t;
    advance(now);
    bool wake = false;
    while (!events_.empty() && events_.top().time == t) {
      const SimEvent ev = events_.top();
      events_.pop();
      switch (ev.kind) {
        case EventKind::job_submit:
          waiting_.push_back(ev.job);
          wake = true;
          break;
        case EventKind::stage_complete:
          if (ev.epoch == epoch_) wake = true;
          break;
        case EventKind::scheduler_wake:
          pending_wake_.reset();
          wake = true;
          break;
      }
    }
    if (!wake) continue;

    const std::size_t before = std::count_if(live_.begin(), live_.end(), [](const auto& s) { return s.has_value(); });
    complete_stages(now);
    const std::size_t after = std::count_if(live_.begin(), live_.end(), [](const auto& s) { return s.has_value(); });
    finished += before - after;

    schedule_pass(now);
    recompute_rates();
    if (cfg_.check_invariants) check_invariants();
    sample_utilization(now);
    schedule_stage_events();

    if (cfg_.strategy == Strategy::asax && !waiting_.empty() && !pending_wake_) {
      pending_wake_ = now + cfg_.decision_tick;
      push(*pending_wake_, EventKind::scheduler_wake);
    }
    if (finished == jobs_.size()) break;
  }
  learner_.flush();

  out_.jobs = records_;
  for (const auto& r : records_) out_.makespan = std::max(out_.makespan, r.end);
  if (out_.makespan > 0) {
    for (std::size_t i = 0; i < out_.utilization.size(); ++i) {
      const auto& s = out_.utilization[i];
      const SimTime until = i + 1 < out_.utilization.size() ? out_.utilization[i + 1].time : out_.makespan;
      const double dt = to_seconds(std::min(until, out_.makespan) - s.time);
      if (dt <= 0.0) continue;
      out_.mean_cpu_cluster += s.cpu_cluster * dt;
      out_.mean_cpu_allocated += s.cpu_allocated * dt;
      out_.mean_mem += s.mem * dt;
    }
    const double span = to_seconds(out_.makespan);
    out_.mean_cpu_cluster /= span;
    out_.mean_cpu_allocated /= span;
    out_.mean_mem /= span;
  }
  out_.ledger = learner_.ledger();
  return out_;
}

void fnv(std::uint64_t& h, const std::string& s) {
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
}

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

std::uint64_t fingerprint(const SimConfig& c, const std::vector<JobSpec>& workload) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  fnv(h, "cluster " + std::to_string(c.cluster.node_count) + " " + std::to_string(c.cluster.cores_per_node) +
             " " + num(c.cluster.mem_per_node) + ";");
  fnv(h, "interference " + num(c.interference.contention_exponent) + " " +
             num(c.interference.mem_pressure_threshold) + " " + num(c.interference.min_rate_factor) + ";");
  fnv(h, "strategy " + to_string(c.strategy) + " seed " + std::to_string(c.seed) + ";");
  fnv(h, "schedule " + c.schedule.name() + " " + num(c.schedule.c) + " tick " + std::to_string(c.decision_tick) +
             " window " + std::to_string(c.throughput_window) + " static " + num(c.static_quota) + ";");
  fnv(h, to_json(c.experts).dump());
  for (const auto& j : workload) {
    fnv(h, "job " + std::to_string(j.id) + " " + j.template_name + " " + std::to_string(j.requested_cores) +
               " " + num(j.walltime) + " " + num(j.submit_time));
    for (const auto& s : j.stages)
      fnv(h, " " + to_string(s.kind) + " " + std::to_string(s.task_count) + " " + num(s.work_per_task) + " " +
                 num(s.cpu_demand) + " " + num(s.mem_demand));
    fnv(h, ";");
  }
  return h;
}

RunRecord simulate(const SimConfig& config, const std::vector<JobSpec>& workload) {
  config.cluster.validate();
  config.interference.validate();
  if (config.strategy == Strategy::asax) config.experts.validate();
  if (!(config.static_quota > 0.0 && config.static_quota < 1.0))
    throw std::invalid_argument("static_quota must lie in (0,1)");
  if (config.decision_tick <= 0) throw std::invalid_argument("decision_tick must be positive");
  for (const auto& j : workload) {
    j.validate();
    if (j.requested_cores > config.cluster.total_cores())
      throw std::invalid_argument("job " + std::to_string(j.id) + " requests " +
                                  std::to_string(j.requested_cores) + " cores; cluster has " +
                                  std::to_string(config.cluster.total_cores()));
  }
  Simulation sim(config, workload);
  return sim.run();
}

}  // namespace asax
