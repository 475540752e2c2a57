#include "asax/hedge.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace asax {

namespace {

// w_i <- w_i exp(-gamma (loss_i - shift)) / N where the shift is chosen so the
// largest exponent is zero. Shared by ASA and ASA_X so both produce the same
// bits for the same inputs.
std::vector<double> exp_reweight(std::span<const double> weights, std::span<const double> losses,
                                 double gamma) {
  const bool nothing_to_do =
      std::all_of(losses.begin(), losses.end(), [](double l) { return l == 0.0; });
  std::vector<double> out(weights.begin(), weights.end());
  if (nothing_to_do) return out;

  double max_exponent = -std::numeric_limits<double>::infinity();
  for (double l : losses) max_exponent = std::max(max_exponent, -gamma * l);

  double norm = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = weights[i] * std::exp(-gamma * losses[i] - max_exponent);
    norm += out[i];
  }
  if (!(norm > 0.0) || !std::isfinite(norm)) {
    throw NumericDegeneracy("weight update normalizer underflowed (gamma=" +
                            std::to_string(gamma) + ")");
  }
  for (double& w : out) w /= norm;
  return out;
}

}  // namespace

// ---------------------------------------------------------------------------

ActionSet::ActionSet(std::vector<double> quotas) : quotas_(std::move(quotas)) {
  if (quotas_.empty()) throw std::invalid_argument("ActionSet: need at least one action");
  if (quotas_.front() != 0.0) throw std::invalid_argument("ActionSet: quotas[0] must be 0");
  for (std::size_t j = 0; j < quotas_.size(); ++j) {
    const double q = quotas_[j];
    if (!(q >= 0.0 && q < 1.0)) throw std::invalid_argument("ActionSet: quota outside [0,1)");
    if (j > 0 && !(q > quotas_[j - 1]))
      throw std::invalid_argument("ActionSet: quotas must be strictly increasing");
  }
}

ActionSet ActionSet::uniform_grid(std::size_t m) {
  if (m == 0) throw std::invalid_argument("ActionSet: m must be positive");
  std::vector<double> q(m);
  for (std::size_t j = 0; j < m; ++j) q[j] = static_cast<double>(j) / static_cast<double>(m);
  return ActionSet(std::move(q));
}

void validate_distribution(std::span<const double> p, const std::string& what) {
  if (p.empty()) throw std::invalid_argument(what + ": empty distribution");
  double sum = 0.0;
  for (double v : p) {
    if (!(v >= 0.0) || !std::isfinite(v)) throw std::invalid_argument(what + ": negative or non-finite entry");
    sum += v;
  }
  if (std::abs(sum - 1.0) > kSumTolerance)
    throw std::invalid_argument(what + ": entries sum to " + std::to_string(sum));
}

ActionDistribution::ActionDistribution(std::vector<double> p) : p_(std::move(p)) {
  validate_distribution(p_, "ActionDistribution");
}

ActionDistribution ActionDistribution::point_mass(std::size_t m, std::size_t index) {
  if (index >= m) throw std::invalid_argument("point_mass: index out of range");
  std::vector<double> p(m, 0.0);
  p[index] = 1.0;
  return ActionDistribution(std::move(p));
}

ActionDistribution ActionDistribution::uniform(std::size_t m) {
  if (m == 0) throw std::invalid_argument("uniform: m must be positive");
  return ActionDistribution(std::vector<double>(m, 1.0 / static_cast<double>(m)));
}

// ---------------------------------------------------------------------------

double LearningRateSchedule::gamma(std::size_t round) const {
  if (round == 0) throw std::invalid_argument("LearningRateSchedule: rounds start at 1");
  switch (kind) {
    case Kind::constant:
      return c;
    case Kind::inverse_sqrt:
      return std::min(1.0, c / std::sqrt(static_cast<double>(round)));
  }
  return c;
}

LearningRateSchedule LearningRateSchedule::constant(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("LearningRateSchedule: c must be positive");
  return {Kind::constant, c};
}

LearningRateSchedule LearningRateSchedule::inverse_sqrt(double c) {
  if (!(c > 0.0)) throw std::invalid_argument("LearningRateSchedule: c must be positive");
  return {Kind::inverse_sqrt, c};
}

LearningRateSchedule LearningRateSchedule::default_for(std::size_t n_experts) {
  if (n_experts < 2) return inverse_sqrt(1.0);
  return inverse_sqrt(std::sqrt(std::log(static_cast<double>(n_experts))));
}

std::string LearningRateSchedule::name() const {
  return kind == Kind::constant ? "constant" : "inverse-sqrt";
}

LearningRateSchedule LearningRateSchedule::parse(const std::string& kind, double c) {
  if (kind == "constant") return constant(c);
  if (kind == "inverse-sqrt") return inverse_sqrt(c);
  throw std::invalid_argument("unknown learning-rate schedule '" + kind + "'");
}

// ---------------------------------------------------------------------------

double EnsembleState::max_risk() const {
  return risk.empty() ? 0.0 : *std::max_element(risk.begin(), risk.end());
}

LossRecord LossRecord::from_outputs(std::span<const ActionDistribution> outputs, std::size_t action,
                                    double loss) {
  LossRecord rec;
  rec.action_index = action;
  rec.loss = loss;
  rec.expert_probs.reserve(outputs.size());
  for (const auto& p : outputs) {
    if (action >= p.size()) throw std::invalid_argument("LossRecord: action out of range");
    rec.expert_probs.push_back(p[action]);
  }
  return rec;
}

EnsembleState init_ensemble(std::size_t n) {
  if (n == 0) throw std::invalid_argument("init_ensemble: need at least one expert");
  EnsembleState s;
  s.alpha.assign(n, 1.0 / static_cast<double>(n));
  s.risk.assign(n, 0.0);
  return s;
}

ActionDistribution mix(const EnsembleState& ensemble,
                       std::span<const ActionDistribution> expert_outputs) {
  if (expert_outputs.size() != ensemble.size())
    throw std::invalid_argument("mix: expert count does not match ensemble");
  const std::size_t m = expert_outputs.front().size();
  std::vector<double> p(m, 0.0);
  for (std::size_t i = 0; i < expert_outputs.size(); ++i) {
    const auto& pi = expert_outputs[i];
    if (pi.size() != m) throw std::invalid_argument("mix: experts disagree on action count");
    for (std::size_t j = 0; j < m; ++j) p[j] += ensemble.alpha[i] * pi[j];
  }
  return ActionDistribution(std::move(p));
}

std::size_t sample_action(const ActionDistribution& p, RngStream& rng) {
  const double u = rng.uniform();
  double cumulative = 0.0;
  std::size_t last_positive = 0;
  for (std::size_t j = 0; j < p.size(); ++j) {
    if (p[j] > 0.0) last_positive = j;
    cumulative += p[j];
    if (u < cumulative) return j;
  }
  // Rounding left the total a hair below u.
  return last_positive;
}

EnsembleState accumulate_risk(EnsembleState ensemble, const LossRecord& record) {
  if (!(record.loss >= 0.0 && record.loss <= 1.0))
    throw std::invalid_argument("accumulate_risk: loss outside [0,1]");
  if (record.expert_probs.size() != ensemble.size())
    throw std::invalid_argument("accumulate_risk: expert count mismatch");
  for (std::size_t i = 0; i < ensemble.size(); ++i)
    ensemble.risk[i] += record.expert_probs[i] * record.loss;
  return ensemble;
}

EnsembleState accumulate_risk(EnsembleState ensemble,
                              std::span<const ActionDistribution> expert_outputs,
                              const LossRecord& record) {
  if (!(record.loss >= 0.0 && record.loss <= 1.0))
    throw std::invalid_argument("accumulate_risk: loss outside [0,1]");
  return accumulate_risk(std::move(ensemble),
                         LossRecord::from_outputs(expert_outputs, record.action_index, record.loss));
}

bool round_should_end(const EnsembleState& ensemble) { return ensemble.max_risk() > 1.0; }

EnsembleState reweight_unchecked(EnsembleState ensemble, double gamma) {
  ensemble.alpha = exp_reweight(ensemble.alpha, ensemble.risk, gamma);
  std::fill(ensemble.risk.begin(), ensemble.risk.end(), 0.0);
  ++ensemble.round;
  return ensemble;
}

EnsembleState end_round(EnsembleState ensemble, double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("end_round: gamma must be positive");
  return reweight_unchecked(std::move(ensemble), gamma);
}

ActionDistribution asa_update(const ActionDistribution& p, std::span<const double> losses,
                              double gamma) {
  if (!(gamma > 0.0) || !std::isfinite(gamma))
    throw std::invalid_argument("asa_update: gamma must be positive");
  if (losses.size() != p.size()) throw std::invalid_argument("asa_update: loss vector length");
  for (double l : losses)
    if (!(l >= 0.0)) throw std::invalid_argument("asa_update: negative loss");
  return ActionDistribution(exp_reweight(p.values(), losses, gamma));
}

double excess_risk_bound(std::size_t n, const LearningRateSchedule& schedule, std::size_t t) {
  if (t == 0) throw std::invalid_argument("excess_risk_bound: t must be >= 1");
  double sum_sq = 0.0;
  for (std::size_t s = 1; s <= t; ++s) {
    const double g = schedule.gamma(s);
    sum_sq += g * g;
  }
  return (std::log(static_cast<double>(n)) + 0.5 * sum_sq) / schedule.gamma(t);
}

// ---------------------------------------------------------------------------

std::size_t RegretLedger::closed_rounds() const {
  return static_cast<std::size_t>(
      std::count_if(rounds_.begin(), rounds_.end(), [](const LedgerRound& r) { return r.closed; }));
}

void RegretLedger::open_round(std::span<const double> alpha) {
  if (!rounds_.empty() && !rounds_.back().closed)
    throw std::logic_error("RegretLedger: previous round still open");
  LedgerRound r;
  r.index = rounds_.size() + 1;
  r.alpha.assign(alpha.begin(), alpha.end());
  rounds_.push_back(std::move(r));
}

void RegretLedger::record(LedgerEntry entry) {
  if (rounds_.empty() || rounds_.back().closed) throw std::logic_error("RegretLedger: no open round");
  auto& r = rounds_.back();
  entry.round = r.index;
  double mixture = 0.0;
  for (std::size_t i = 0; i < r.alpha.size(); ++i) mixture += r.alpha[i] * entry.expert_probs[i];
  mixture_loss_ += mixture * entry.loss;
  ++r.cases;
  entries_.push_back(std::move(entry));
}

void RegretLedger::close_round(double gamma, double max_risk_pre, double max_risk_post) {
  if (rounds_.empty() || rounds_.back().closed) throw std::logic_error("RegretLedger: no open round");
  auto& r = rounds_.back();
  r.gamma = gamma;
  r.max_risk_pre = max_risk_pre;
  r.max_risk_post = max_risk_post;
  r.closed = true;
}

double mixture_risk(const RegretLedger& ledger, std::size_t rounds) {
  double total = 0.0;
  for (const auto& e : ledger.entries()) {
    if (e.round > rounds) break;
    const auto& alpha = ledger.rounds()[e.round - 1].alpha;
    double mixture = 0.0;
    for (std::size_t i = 0; i < alpha.size(); ++i) mixture += alpha[i] * e.expert_probs[i];
    total += mixture * e.loss;
  }
  return total;
}

HindsightResult hindsight_best(const RegretLedger& ledger, std::size_t rounds) {
  const std::size_t n = ledger.expert_count();
  if (n == 0) throw std::invalid_argument("hindsight_best: ledger has no experts");
  std::vector<double> risk(n, 0.0);
  for (const auto& e : ledger.entries()) {
    if (e.round > rounds) break;
    for (std::size_t i = 0; i < n; ++i) risk[i] += e.expert_probs[i] * e.loss;
  }
  HindsightResult best{0, risk[0]};
  for (std::size_t i = 1; i < n; ++i) {
    if (risk[i] < best.risk) best = {i, risk[i]};
  }
  return best;
}

double empirical_excess_risk(const RegretLedger& ledger, std::size_t rounds) {
  if (ledger.entries().empty()) throw std::invalid_argument("empirical_excess_risk: empty ledger");
  return mixture_risk(ledger, rounds) - hindsight_best(ledger, rounds).risk;
}

double empirical_excess_risk(const RegretLedger& ledger) {
  return empirical_excess_risk(ledger, ledger.rounds().size());
}

std::vector<RegretPoint> regret_curve(const RegretLedger& ledger,
                                      const LearningRateSchedule& schedule) {
  // Single pass; at each boundary the hindsight minimum is an exhaustive scan
  // over the running per-expert totals.
  const std::size_t n = ledger.expert_count();
  std::vector<RegretPoint> curve;
  std::vector<double> expert_risk(n, 0.0);
  double mixture = 0.0;
  double sum_sq = 0.0;
  auto entry = ledger.entries().begin();
  for (const auto& r : ledger.rounds()) {
    if (!r.closed) break;
    for (; entry != ledger.entries().end() && entry->round == r.index; ++entry) {
      double m = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        m += r.alpha[i] * entry->expert_probs[i];
        expert_risk[i] += entry->expert_probs[i] * entry->loss;
      }
      mixture += m * entry->loss;
    }
    const double g = schedule.gamma(r.index);
    sum_sq += g * g;
    const double best = *std::min_element(expert_risk.begin(), expert_risk.end());
    curve.push_back({r.index, mixture - best, (std::log(static_cast<double>(n)) + 0.5 * sum_sq) / g});
  }
  return curve;
}

// ---------------------------------------------------------------------------

AsaxLearner::AsaxLearner(std::size_t n_experts, LearningRateSchedule schedule,
                         LearnerOptions options)
    : ensemble_(init_ensemble(n_experts)),
      schedule_(schedule),
      options_(options),
      ledger_(n_experts) {}

ActionDistribution AsaxLearner::mixture(std::span<const ActionDistribution> expert_outputs) const {
  return mix(ensemble_, expert_outputs);
}

std::size_t AsaxLearner::choose(std::span<const ActionDistribution> expert_outputs,
                                RngStream& rng) const {
  return sample_action(mixture(expert_outputs), rng);
}

bool AsaxLearner::observe(std::span<const double> expert_probs, std::size_t action, double loss,
                          std::span<const double> state) {
  if (expert_probs.size() != ensemble_.size())
    throw std::invalid_argument("AsaxLearner::observe: expert count mismatch");
  if (std::isnan(loss)) throw std::invalid_argument("AsaxLearner::observe: NaN loss");
  const double clamped = std::clamp(loss, 0.0, 1.0);
  if (clamped != loss) ledger_.note_clamp();

  if (!round_open_) {
    if (options_.keep_ledger) ledger_.open_round(ensemble_.alpha);
    round_open_ = true;
    cases_in_round_ = 0;
  }
  const double max_pre = ensemble_.max_risk();

  LossRecord rec;
  rec.action_index = action;
  rec.loss = clamped;
  rec.expert_probs.assign(expert_probs.begin(), expert_probs.end());
  ensemble_ = accumulate_risk(std::move(ensemble_), rec);
  ++cases_in_round_;

  if (options_.keep_ledger) {
    LedgerEntry e;
    e.action = action;
    e.loss = clamped;
    e.raw_loss = loss;
    e.expert_probs = std::move(rec.expert_probs);
    e.state.assign(state.begin(), state.end());
    ledger_.record(std::move(e));
  }

  if (ensemble_.max_risk() > options_.risk_cap) {
    close_round(max_pre);
    return true;
  }
  return false;
}

bool AsaxLearner::observe(std::span<const ActionDistribution> expert_outputs, std::size_t action,
                          double loss) {
  const auto rec = LossRecord::from_outputs(expert_outputs, action, 0.0);
  return observe(rec.expert_probs, action, loss);
}

bool AsaxLearner::flush() {
  if (!round_open_ || cases_in_round_ == 0) return false;
  close_round(ensemble_.max_risk());
  return true;
}

void AsaxLearner::close_round(double max_pre) {
  const double max_post = ensemble_.max_risk();
  const double gamma = schedule_.gamma(ensemble_.round + 1);
  ensemble_ = options_.negate_gamma ? reweight_unchecked(std::move(ensemble_), -gamma)
                                    : end_round(std::move(ensemble_), gamma);
  if (options_.keep_ledger) ledger_.close_round(gamma, max_pre, max_post);
  round_open_ = false;
}

// ---------------------------------------------------------------------------

AsaLearner::AsaLearner(std::size_t m, LearningRateSchedule schedule)
    : p_(ActionDistribution::uniform(m)), round_loss_(m, 0.0), schedule_(schedule) {}

bool AsaLearner::observe(std::size_t action, double loss) {
  if (action >= round_loss_.size()) throw std::invalid_argument("AsaLearner: action out of range");
  if (std::isnan(loss)) throw std::invalid_argument("AsaLearner: NaN loss");
  // Same clamping and accumulation arithmetic as AsaxLearner with point-mass
  // experts: the chosen action gets 1.0 * loss, every other action 0.0 * loss.
  const double l = std::clamp(loss, 0.0, 1.0);
  for (std::size_t a = 0; a < round_loss_.size(); ++a) round_loss_[a] += (a == action ? 1.0 : 0.0) * l;
  if (*std::max_element(round_loss_.begin(), round_loss_.end()) > 1.0) {
    ++round_;
    p_ = asa_update(p_, round_loss_, schedule_.gamma(round_));
    std::fill(round_loss_.begin(), round_loss_.end(), 0.0);
    return true;
  }
  return false;
}

}  // namespace asax
