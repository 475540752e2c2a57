#pragma once

// Exponential-weights learners over co-allocation actions.
//
// ASA keeps one weight per action. ASA_X keeps one weight per decision-tree
// expert and mixes the experts' action distributions. Both work in rounds:
// per-case losses are accumulated until the largest accumulated value
// exceeds the round cap, then the weights are updated multiplicatively and
// the accumulators reset.

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "asax/rng.hpp"

namespace asax {

constexpr double kSumTolerance = 1e-9;

// Raised when a weight update normalizer underflows to zero.
class NumericDegeneracy : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// The m CPU-quota fractions a job may lend to a co-scheduled job.
// quotas[0] is always 0 ("do not co-allocate").
class ActionSet {
 public:
  explicit ActionSet(std::vector<double> quotas);

  // {0, 1/m, ..., (m-1)/m}; m=10 gives 0%, 10%, ..., 90%.
  static ActionSet uniform_grid(std::size_t m);

  std::size_t size() const { return quotas_.size(); }
  double quota(std::size_t j) const { return quotas_.at(j); }
  const std::vector<double>& quotas() const { return quotas_; }

  bool operator==(const ActionSet&) const = default;

 private:
  std::vector<double> quotas_;
};

class ActionDistribution {
 public:
  ActionDistribution() = default;
  // Throws std::invalid_argument unless entries are >= 0 and sum to 1
  // within kSumTolerance.
  explicit ActionDistribution(std::vector<double> p);

  static ActionDistribution point_mass(std::size_t m, std::size_t index);
  static ActionDistribution uniform(std::size_t m);

  std::size_t size() const { return p_.size(); }
  double operator[](std::size_t j) const { return p_[j]; }
  const std::vector<double>& values() const { return p_; }

  bool operator==(const ActionDistribution&) const = default;

 private:
  std::vector<double> p_;
};

// Throws std::invalid_argument if p is not a probability vector.
void validate_distribution(std::span<const double> p, const std::string& what);

struct LearningRateSchedule {
  enum class Kind { constant, inverse_sqrt };

  Kind kind = Kind::inverse_sqrt;
  double c = 1.0;

  // gamma_t for round t >= 1. constant: c. inverse_sqrt: min(1, c / sqrt(t)).
  double gamma(std::size_t round) const;

  static LearningRateSchedule constant(double c);
  static LearningRateSchedule inverse_sqrt(double c);
  // sqrt(ln n / t) with gamma_1 clamped to 1. n = 1 uses c = 1.
  static LearningRateSchedule default_for(std::size_t n_experts);

  std::string name() const;
  static LearningRateSchedule parse(const std::string& kind, double c);
};

struct EnsembleState {
  std::vector<double> alpha;
  std::vector<double> risk;
  std::size_t round = 0;

  std::size_t size() const { return alpha.size(); }
  double max_risk() const;
};

// One scored case: the action taken, its loss, and p_i(action) for every
// expert i.
struct LossRecord {
  std::size_t action_index = 0;
  double loss = 0.0;
  std::vector<double> expert_probs;

  static LossRecord from_outputs(std::span<const ActionDistribution> outputs,
                                 std::size_t action, double loss);
};

EnsembleState init_ensemble(std::size_t n);

// p = sum_i alpha_i * p_i(x).
ActionDistribution mix(const EnsembleState& ensemble,
                       std::span<const ActionDistribution> expert_outputs);

// Inverse CDF over ascending action index using one uniform draw.
std::size_t sample_action(const ActionDistribution& p, RngStream& rng);

// risk_i += p_i(a) * loss. Loss must lie in [0, 1].
EnsembleState accumulate_risk(EnsembleState ensemble, const LossRecord& record);
EnsembleState accumulate_risk(EnsembleState ensemble,
                              std::span<const ActionDistribution> expert_outputs,
                              const LossRecord& record);

// True iff max_i risk_i > 1.
bool round_should_end(const EnsembleState& ensemble);

// alpha_i <- alpha_i exp(-gamma risk_i) / N, risk <- 0, round += 1.
// gamma must be positive and finite.
EnsembleState end_round(EnsembleState ensemble, double gamma);

// The same update with no sign check on gamma. Exists so the bound checker
// can be exercised against a broken learner.
EnsembleState reweight_unchecked(EnsembleState ensemble, double gamma);

// One ASA update: p_{t+1,a} = p_{t,a} exp(-gamma l_{t,a}) / N.
ActionDistribution asa_update(const ActionDistribution& p, std::span<const double> losses,
                              double gamma);

// gamma_t^{-1} (ln n + 1/2 sum_{s<=t} gamma_s^2).
double excess_risk_bound(std::size_t n, const LearningRateSchedule& schedule, std::size_t t);

// ---------------------------------------------------------------------------
// Regret ledger

struct LedgerEntry {
  std::size_t round = 1;  // 1-based round the case was scored in
  std::size_t action = 0;
  double loss = 0.0;      // after clamping to [0, 1]
  double raw_loss = 0.0;  // as reported
  std::vector<double> expert_probs;
  std::vector<double> state;  // optional feature vector
};

struct LedgerRound {
  std::size_t index = 1;
  std::vector<double> alpha;  // weights used to mix during this round
  std::size_t cases = 0;
  double max_risk_pre = 0.0;   // max_i r_i before the final increment
  double max_risk_post = 0.0;  // max_i r_i when the round closed
  double gamma = 0.0;
  bool closed = false;
};

class RegretLedger {
 public:
  explicit RegretLedger(std::size_t n_experts = 0) : n_(n_experts) {}

  std::size_t expert_count() const { return n_; }
  const std::vector<LedgerEntry>& entries() const { return entries_; }
  const std::vector<LedgerRound>& rounds() const { return rounds_; }
  std::size_t closed_rounds() const;
  std::size_t clamp_count() const { return clamp_count_; }
  double cumulative_mixture_loss() const { return mixture_loss_; }

  void open_round(std::span<const double> alpha);
  void record(LedgerEntry entry);
  void close_round(double gamma, double max_risk_pre, double max_risk_post);
  void note_clamp() { ++clamp_count_; }

 private:
  std::size_t n_;
  std::vector<LedgerEntry> entries_;
  std::vector<LedgerRound> rounds_;
  double mixture_loss_ = 0.0;
  std::size_t clamp_count_ = 0;
};

// sum over cases of sum_i alpha_{s-1,i} p_i(a) l(a), recomputed from the log.
double mixture_risk(const RegretLedger& ledger, std::size_t rounds);

struct HindsightResult {
  std::size_t expert = 0;
  double risk = 0.0;
};

// Exhaustive minimum over experts of sum p_i(a) l(a) over the first `rounds`
// rounds. Ties go to the lowest index.
HindsightResult hindsight_best(const RegretLedger& ledger, std::size_t rounds);

// E_t over the first `rounds` rounds. Throws on an empty ledger.
double empirical_excess_risk(const RegretLedger& ledger, std::size_t rounds);
double empirical_excess_risk(const RegretLedger& ledger);

struct RegretPoint {
  std::size_t round = 0;
  double excess_risk = 0.0;
  double bound = 0.0;
};

// E_t and the bound at every closed round boundary.
std::vector<RegretPoint> regret_curve(const RegretLedger& ledger,
                                      const LearningRateSchedule& schedule);

// ---------------------------------------------------------------------------
// Learners

struct LearnerOptions {
  double risk_cap = 1.0;
  // Mutation switch for checker self-tests: flips the sign of gamma.
  bool negate_gamma = false;
  bool keep_ledger = true;
};

class AsaxLearner {
 public:
  AsaxLearner(std::size_t n_experts, LearningRateSchedule schedule, LearnerOptions options = {});

  const EnsembleState& state() const { return ensemble_; }
  const RegretLedger& ledger() const { return ledger_; }
  const LearningRateSchedule& schedule() const { return schedule_; }
  std::size_t expert_count() const { return ensemble_.size(); }

  ActionDistribution mixture(std::span<const ActionDistribution> expert_outputs) const;
  std::size_t choose(std::span<const ActionDistribution> expert_outputs, RngStream& rng) const;

  // Scores one case. The loss is clamped to [0, 1] (clamps are counted),
  // risks are accumulated, and the round closes when the cap is exceeded.
  // Returns true when a round closed.
  bool observe(std::span<const double> expert_probs, std::size_t action, double loss,
               std::span<const double> state = {});
  bool observe(std::span<const ActionDistribution> expert_outputs, std::size_t action,
               double loss);

  // Closes the open round if it holds any case. Used at the end of a horizon.
  bool flush();

 private:
  void close_round(double max_pre);

  EnsembleState ensemble_;
  LearningRateSchedule schedule_;
  LearnerOptions options_;
  RegretLedger ledger_;
  bool round_open_ = false;
  std::size_t cases_in_round_ = 0;
};

// Stateless ASA over actions.
class AsaLearner {
 public:
  AsaLearner(std::size_t m, LearningRateSchedule schedule);

  const ActionDistribution& distribution() const { return p_; }
  std::size_t rounds() const { return round_; }

  std::size_t choose(RngStream& rng) const { return sample_action(p_, rng); }
  // Adds loss to the chosen action's accumulator and updates p when the
  // largest accumulator exceeds 1. Returns true when a round closed.
  bool observe(std::size_t action, double loss);

 private:
  ActionDistribution p_;
  std::vector<double> round_loss_;
  LearningRateSchedule schedule_;
  std::size_t round_ = 0;
};

}  // namespace asax
