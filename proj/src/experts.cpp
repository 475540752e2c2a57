#include "asax/experts.hpp"

#include <cmath>
#include <fstream>
#include <functional>

namespace asax {

using nlohmann::json;

std::string to_string(StageType t) { return t == StageType::parallel ? "parallel" : "sequential"; }

StageType parse_stage_type(const std::string& s) {
  if (s == "parallel") return StageType::parallel;
  if (s == "sequential") return StageType::sequential;
  throw std::invalid_argument("unknown stage type '" + s + "'");
}

std::string to_string(Feature f) {
  switch (f) {
    case Feature::cpu_util: return "cpu_util";
    case Feature::mem_util: return "mem_util";
    case Feature::stage_type: return "stage_type";
    case Feature::interval: return "interval";
    case Feature::happiness: return "happiness";
  }
  return "?";
}

Feature parse_feature(const std::string& s) {
  for (Feature f : {Feature::cpu_util, Feature::mem_util, Feature::stage_type, Feature::interval,
                    Feature::happiness}) {
    if (to_string(f) == s) return f;
  }
  throw std::invalid_argument("unknown feature '" + s + "'");
}

std::string to_string(Comparator c) {
  switch (c) {
    case Comparator::lt: return "<";
    case Comparator::le: return "<=";
    case Comparator::gt: return ">";
    case Comparator::ge: return ">=";
    case Comparator::eq: return "==";
  }
  return "?";
}

Comparator parse_comparator(const std::string& s) {
  for (Comparator c : {Comparator::lt, Comparator::le, Comparator::gt, Comparator::ge, Comparator::eq}) {
    if (to_string(c) == s) return c;
  }
  throw std::invalid_argument("unknown comparator '" + s + "'");
}

double StateVector::numeric(Feature f) const {
  switch (f) {
    case Feature::cpu_util: return cpu_util;
    case Feature::mem_util: return mem_util;
    case Feature::interval: return interval;
    case Feature::happiness: return happiness;
    case Feature::stage_type: break;
  }
  throw std::logic_error("stage_type is not numeric");
}

void StateVector::validate() const {
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!unit(cpu_util)) throw std::invalid_argument("StateVector: cpu_util outside [0,1]");
  if (!unit(mem_util)) throw std::invalid_argument("StateVector: mem_util outside [0,1]");
  if (!unit(interval)) throw std::invalid_argument("StateVector: interval outside [0,1]");
  if (!(happiness >= 0.0)) throw std::invalid_argument("StateVector: negative happiness");
}

// ---------------------------------------------------------------------------

std::size_t ExpertTree::add_leaf(ActionDistribution p) {
  nodes_.emplace_back(Leaf{std::move(p)});
  root_ = nodes_.size() - 1;
  return root_;
}

std::size_t ExpertTree::add_split(Feature feature, Comparator op, double threshold,
                                  std::size_t then_node, std::size_t else_node) {
  if (feature == Feature::stage_type)
    throw std::invalid_argument("add_split: use add_stage_split for stage_type");
  if (then_node >= nodes_.size() || else_node >= nodes_.size())
    throw std::invalid_argument("add_split: children must exist");
  Split s;
  s.feature = feature;
  s.op = op;
  s.threshold = threshold;
  s.then_node = then_node;
  s.else_node = else_node;
  nodes_.emplace_back(s);
  root_ = nodes_.size() - 1;
  return root_;
}

std::size_t ExpertTree::add_stage_split(StageType stage, std::size_t then_node,
                                        std::size_t else_node) {
  if (then_node >= nodes_.size() || else_node >= nodes_.size())
    throw std::invalid_argument("add_stage_split: children must exist");
  Split s;
  s.feature = Feature::stage_type;
  s.op = Comparator::eq;
  s.stage = stage;
  s.then_node = then_node;
  s.else_node = else_node;
  nodes_.emplace_back(s);
  root_ = nodes_.size() - 1;
  return root_;
}

void ExpertTree::set_root(std::size_t node) {
  if (node >= nodes_.size()) throw std::invalid_argument("set_root: no such node");
  root_ = node;
}

namespace {

bool compare(double x, Comparator op, double t) {
  switch (op) {
    case Comparator::lt: return x < t;
    case Comparator::le: return x <= t;
    case Comparator::gt: return x > t;
    case Comparator::ge: return x >= t;
    case Comparator::eq: return x == t;
  }
  return false;
}

}  // namespace

std::size_t ExpertTree::leaf_for(const StateVector& state) const {
  if (nodes_.empty()) throw std::logic_error("ExpertTree '" + id_ + "' has no nodes");
  std::size_t at = root_;
  while (const auto* s = std::get_if<Split>(&nodes_[at])) {
    bool taken;
    if (s->feature == Feature::stage_type)
      taken = state.stage_type == s->stage;
    else
      taken = compare(state.numeric(s->feature), s->op, s->threshold);
    at = taken ? s->then_node : s->else_node;
  }
  return at;
}

const ActionDistribution& ExpertTree::evaluate(const StateVector& state) const {
  return std::get<Leaf>(nodes_[leaf_for(state)]).p;
}

std::size_t ExpertTree::action_count() const {
  for (const auto& n : nodes_)
    if (const auto* l = std::get_if<Leaf>(&n)) return l->p.size();
  return 0;
}

std::size_t ExpertTree::depth() const {
  std::function<std::size_t(std::size_t)> walk = [&](std::size_t i) -> std::size_t {
    if (const auto* s = std::get_if<Split>(&nodes_[i]))
      return 1 + std::max(walk(s->then_node), walk(s->else_node));
    return 0;
  };
  return nodes_.empty() ? 0 : walk(root_);
}

void ExpertEnsembleSpec::validate() const {
  if (experts.empty()) throw ExpertSchemaError("experts", "ensemble needs at least one tree");
  for (std::size_t i = 0; i < experts.size(); ++i) {
    const auto& t = experts[i];
    const std::string where = "experts[" + std::to_string(i) + "]";
    if (t.nodes().empty()) throw ExpertSchemaError(where, "tree has no nodes");
    if (t.depth() > kMaxTreeDepth) throw ExpertSchemaError(where, "tree deeper than 16");
    for (const auto& n : t.nodes()) {
      if (const auto* l = std::get_if<ExpertTree::Leaf>(&n); l && l->p.size() != actions.size())
        throw ExpertSchemaError(where, "leaf length does not match action_count");
    }
  }
}

std::vector<ActionDistribution> evaluate_ensemble(const ExpertEnsembleSpec& spec,
                                                  const StateVector& state) {
  std::vector<ActionDistribution> out;
  out.reserve(spec.size());
  for (const auto& t : spec.experts) out.push_back(t.evaluate(state));
  return out;
}

std::vector<std::size_t> leaf_signature(const ExpertEnsembleSpec& spec, const StateVector& state) {
  std::vector<std::size_t> sig;
  sig.reserve(spec.size());
  for (const auto& t : spec.experts) sig.push_back(t.leaf_for(state));
  return sig;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

const json& require(const json& obj, const char* key, const std::string& path) {
  if (!obj.is_object()) throw ExpertSchemaError(path, "expected an object");
  auto it = obj.find(key);
  if (it == obj.end()) throw ExpertSchemaError(path, std::string("missing field '") + key + "'");
  return *it;
}

double require_number(const json& obj, const char* key, const std::string& path) {
  const auto& v = require(obj, key, path);
  if (!v.is_number()) throw ExpertSchemaError(path + "." + key, "expected a number");
  return v.get<double>();
}

ActionDistribution parse_leaf(const json& node, std::size_t m, const std::string& path) {
  const auto& p = require(node, "p", path);
  if (!p.is_array()) throw ExpertSchemaError(path + ".p", "expected an array");
  if (p.size() != m)
    throw ExpertSchemaError(path + ".p", "expected " + std::to_string(m) + " entries, got " +
                                             std::to_string(p.size()));
  std::vector<double> v;
  double sum = 0.0;
  for (const auto& x : p) {
    if (!x.is_number()) throw ExpertSchemaError(path + ".p", "non-numeric entry");
    const double d = x.get<double>();
    if (!(d >= 0.0) || !std::isfinite(d)) throw ExpertSchemaError(path + ".p", "negative entry");
    v.push_back(d);
    sum += d;
  }
  if (std::abs(sum - 1.0) > 1e-6)
    throw ExpertSchemaError(path + ".p", "distribution sums to " + std::to_string(sum));
  if (std::abs(sum - 1.0) > kSumTolerance)
    for (double& d : v) d /= sum;
  return ActionDistribution(std::move(v));
}

std::size_t parse_node(ExpertTree& tree, const json& node, std::size_t m, const std::string& path,
                       std::size_t depth) {
  const auto& kind = require(node, "kind", path);
  if (!kind.is_string()) throw ExpertSchemaError(path + ".kind", "expected a string");
  const auto k = kind.get<std::string>();
  if (k == "leaf") return tree.add_leaf(parse_leaf(node, m, path));
  if (k != "split") throw ExpertSchemaError(path + ".kind", "unknown node kind '" + k + "'");
  if (depth >= kMaxTreeDepth) throw ExpertSchemaError(path, "tree deeper than 16");

  const auto& feat = require(node, "feature", path);
  if (!feat.is_string()) throw ExpertSchemaError(path + ".feature", "expected a string");
  Feature f;
  try {
    f = parse_feature(feat.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ExpertSchemaError(path + ".feature", e.what());
  }
  const auto& opj = require(node, "op", path);
  if (!opj.is_string()) throw ExpertSchemaError(path + ".op", "expected a string");
  Comparator op;
  try {
    op = parse_comparator(opj.get<std::string>());
  } catch (const std::invalid_argument& e) {
    throw ExpertSchemaError(path + ".op", e.what());
  }

  const std::size_t then_node = parse_node(tree, require(node, "then", path), m, path + ".then", depth + 1);
  const std::size_t else_node = parse_node(tree, require(node, "else", path), m, path + ".else", depth + 1);

  if (f == Feature::stage_type) {
    if (op != Comparator::eq) throw ExpertSchemaError(path + ".op", "stage_type supports only ==");
    const auto& th = require(node, "threshold", path);
    if (!th.is_string()) throw ExpertSchemaError(path + ".threshold", "expected a stage name");
    try {
      return tree.add_stage_split(parse_stage_type(th.get<std::string>()), then_node, else_node);
    } catch (const std::invalid_argument& e) {
      throw ExpertSchemaError(path + ".threshold", e.what());
    }
  }
  return tree.add_split(f, op, require_number(node, "threshold", path), then_node, else_node);
}

json node_to_json(const ExpertTree& tree, std::size_t i) {
  const auto& n = tree.nodes()[i];
  if (const auto* l = std::get_if<ExpertTree::Leaf>(&n)) return {{"kind", "leaf"}, {"p", l->p.values()}};
  const auto& s = std::get<ExpertTree::Split>(n);
  json j{{"kind", "split"}, {"feature", to_string(s.feature)}, {"op", to_string(s.op)}};
  if (s.feature == Feature::stage_type)
    j["threshold"] = to_string(s.stage);
  else
    j["threshold"] = s.threshold;
  j["then"] = node_to_json(tree, s.then_node);
  j["else"] = node_to_json(tree, s.else_node);
  return j;
}

}  // namespace

ExpertEnsembleSpec load_experts(const json& doc) {
  const auto& m_field = require(doc, "action_count", "$");
  if (!m_field.is_number_unsigned() || m_field.get<std::size_t>() == 0)
    throw ExpertSchemaError("$.action_count", "expected a positive integer");
  const std::size_t m = m_field.get<std::size_t>();

  const auto& acts = require(doc, "actions", "$");
  if (!acts.is_array() || acts.size() != m)
    throw ExpertSchemaError("$.actions", "expected " + std::to_string(m) + " quotas");
  std::vector<double> quotas;
  for (const auto& q : acts) {
    if (!q.is_number()) throw ExpertSchemaError("$.actions", "non-numeric quota");
    quotas.push_back(q.get<double>());
  }

  ExpertEnsembleSpec spec;
  try {
    spec.actions = ActionSet(std::move(quotas));
  } catch (const std::invalid_argument& e) {
    throw ExpertSchemaError("$.actions", e.what());
  }

  const auto& experts = require(doc, "experts", "$");
  if (!experts.is_array() || experts.empty())
    throw ExpertSchemaError("$.experts", "expected a non-empty array");
  for (std::size_t i = 0; i < experts.size(); ++i) {
    const std::string path = "experts[" + std::to_string(i) + "]";
    const auto& id = require(experts[i], "id", path);
    if (!id.is_string()) throw ExpertSchemaError(path + ".id", "expected a string");
    ExpertTree tree(id.get<std::string>());
    tree.set_root(parse_node(tree, require(experts[i], "root", path), m, path + ".root", 0));
    spec.experts.push_back(std::move(tree));
  }
  spec.validate();
  return spec;
}

ExpertEnsembleSpec load_experts_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open expert file " + path.string());
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::parse_error& e) {
    throw ExpertSchemaError(path.string(), e.what());
  }
  return load_experts(doc);
}

json to_json(const ExpertEnsembleSpec& spec) {
  json experts = json::array();
  for (const auto& t : spec.experts)
    experts.push_back({{"id", t.id()}, {"root", node_to_json(t, t.root())}});
  return {{"action_count", spec.actions.size()}, {"actions", spec.actions.quotas()},
          {"experts", std::move(experts)}};
}

// ---------------------------------------------------------------------------
// Standard library

ActionDistribution banded_leaf(std::size_t m, double decline, double tilt) {
  if (m < 2) throw std::invalid_argument("banded_leaf: m must be >= 2");
  if (!(decline >= 0.0 && decline <= 1.0) || !(tilt > 0.0))
    throw std::invalid_argument("banded_leaf: bad parameters");
  std::vector<double> p(m, 0.0);
  p[0] = decline;
  double z = 0.0;
  for (std::size_t j = 1; j < m; ++j) z += std::pow(tilt, static_cast<double>(j - 1));
  for (std::size_t j = 1; j < m; ++j)
    p[j] = (1.0 - decline) * std::pow(tilt, static_cast<double>(j - 1)) / z;
  return ActionDistribution(std::move(p));
}

namespace {

enum Contention { high = 0, mid = 1, low = 2 };

// Indexed [contention][happiness band: Hp < 1.0, 1.0 <= Hp < 1.1, Hp >= 1.1].
constexpr double kDecline[3][3] = {{0.97, 0.8, 0.7}, {0.7, 0.35, 0.2}, {0.4, 0.15, 0.05}};
constexpr double kTilt[3][3] = {{0.3, 0.5, 0.6}, {0.5, 0.7, 0.9}, {0.8, 1.0, 1.2}};

std::size_t happiness_subtree(ExpertTree& t, std::size_t m, Contention c) {
  const std::size_t unhappy = t.add_leaf(banded_leaf(m, kDecline[c][0], kTilt[c][0]));
  const std::size_t near = t.add_leaf(banded_leaf(m, kDecline[c][1], kTilt[c][1]));
  const std::size_t happy = t.add_leaf(banded_leaf(m, kDecline[c][2], kTilt[c][2]));
  const std::size_t upper = t.add_split(Feature::happiness, Comparator::lt, 1.1, near, happy);
  return t.add_split(Feature::happiness, Comparator::lt, 1.0, unhappy, upper);
}

// feature > hi -> first band, feature > lo -> second band, else third.
ExpertTree three_band_tree(const std::string& id, std::size_t m, Feature f, double hi, double lo,
                           Contention above_hi, Contention above_lo, Contention below) {
  ExpertTree t(id);
  const std::size_t a = happiness_subtree(t, m, above_hi);
  const std::size_t b = happiness_subtree(t, m, above_lo);
  const std::size_t c = happiness_subtree(t, m, below);
  const std::size_t lower = t.add_split(f, Comparator::gt, lo, b, c);
  t.add_split(f, Comparator::gt, hi, a, lower);
  return t;
}

}  // namespace

ExpertEnsembleSpec standard_library(std::size_t m) {
  if (m < 2) throw std::invalid_argument("standard_library: m must be >= 2");
  ExpertEnsembleSpec spec;
  spec.actions = ActionSet::uniform_grid(m);

  spec.experts.push_back(three_band_tree("cpu", m, Feature::cpu_util, 0.75, 0.4, high, mid, low));
  // Light memory use says nothing about the cores, so it never reads as low
  // contention.
  spec.experts.push_back(three_band_tree("mem", m, Feature::mem_util, 0.8, 0.5, high, mid, mid));

  // Parallel stages keep every allocated core busy; sequential stages leave
  // all but one idle.
  ExpertTree stage("stage");
  const std::size_t par = happiness_subtree(stage, m, high);
  const std::size_t seq = happiness_subtree(stage, m, low);
  stage.add_stage_split(StageType::parallel, par, seq);
  spec.experts.push_back(std::move(stage));

  // Late in a job less work remains to be disturbed.
  spec.experts.push_back(
      three_band_tree("interval", m, Feature::interval, 0.66, 0.33, low, mid, high));

  spec.validate();
  return spec;
}

}  // namespace asax
