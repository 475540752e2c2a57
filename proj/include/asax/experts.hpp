#pragma once

// Decision-tree experts. A tree maps the host job's state to a distribution
// over the action set; the learner mixes several trees.

#include <cstddef>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "asax/hedge.hpp"
#include "json.hpp"

namespace asax {

enum class StageType { sequential, parallel };

std::string to_string(StageType t);
StageType parse_stage_type(const std::string& s);

enum class Feature { cpu_util, mem_util, stage_type, interval, happiness };

std::string to_string(Feature f);
// Throws std::invalid_argument on unknown names.
Feature parse_feature(const std::string& s);

enum class Comparator { lt, le, gt, ge, eq };

std::string to_string(Comparator c);
Comparator parse_comparator(const std::string& s);

struct StateVector {
  double cpu_util = 0.0;
  double mem_util = 0.0;
  StageType stage_type = StageType::parallel;
  double interval = 0.0;
  double happiness = 0.0;  // may be +inf for a finished job

  double numeric(Feature f) const;
  void validate() const;
};

class ExpertSchemaError : public std::runtime_error {
 public:
  ExpertSchemaError(const std::string& path, const std::string& message)
      : std::runtime_error(path + ": " + message), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

constexpr std::size_t kMaxTreeDepth = 16;

class ExpertTree {
 public:
  struct Split {
    Feature feature = Feature::cpu_util;
    Comparator op = Comparator::gt;
    double threshold = 0.0;                     // numeric features
    StageType stage = StageType::parallel;      // stage_type feature
    std::size_t then_node = 0;
    std::size_t else_node = 0;
    bool operator==(const Split&) const = default;
  };
  struct Leaf {
    ActionDistribution p;
    bool operator==(const Leaf&) const = default;
  };
  using Node = std::variant<Split, Leaf>;

  ExpertTree() = default;
  explicit ExpertTree(std::string id) : id_(std::move(id)) {}

  // Builders. Children must be added before their parent; the last node added
  // with set_root (or the last one added at all) is the root.
  std::size_t add_leaf(ActionDistribution p);
  std::size_t add_split(Feature feature, Comparator op, double threshold, std::size_t then_node,
                        std::size_t else_node);
  std::size_t add_stage_split(StageType stage, std::size_t then_node, std::size_t else_node);
  void set_root(std::size_t node);

  const std::string& id() const { return id_; }
  const std::vector<Node>& nodes() const { return nodes_; }
  std::size_t root() const { return root_; }

  // Index of the leaf node reached by state.
  std::size_t leaf_for(const StateVector& state) const;
  const ActionDistribution& evaluate(const StateVector& state) const;

  std::size_t action_count() const;
  std::size_t depth() const;

  bool operator==(const ExpertTree& o) const {
    return id_ == o.id_ && root_ == o.root_ && nodes_ == o.nodes_;
  }

 private:
  std::string id_;
  std::vector<Node> nodes_;
  std::size_t root_ = 0;
};

struct ExpertEnsembleSpec {
  ActionSet actions = ActionSet::uniform_grid(1);
  std::vector<ExpertTree> experts;

  std::size_t size() const { return experts.size(); }
  // Throws ExpertSchemaError on empty ensembles, action-count mismatch or
  // depth overrun.
  void validate() const;

  bool operator==(const ExpertEnsembleSpec&) const = default;
};

std::vector<ActionDistribution> evaluate_ensemble(const ExpertEnsembleSpec& spec,
                                                  const StateVector& state);

// Per-tree leaf indices reached by state. Two states with the same signature
// get identical expert outputs.
std::vector<std::size_t> leaf_signature(const ExpertEnsembleSpec& spec, const StateVector& state);

ExpertEnsembleSpec load_experts(const nlohmann::json& doc);
ExpertEnsembleSpec load_experts_file(const std::filesystem::path& path);
nlohmann::json to_json(const ExpertEnsembleSpec& spec);

// Band-shaped leaf: decline mass on action 0, the rest spread over actions
// 1..m-1 proportionally to tilt^(j-1).
ActionDistribution banded_leaf(std::size_t m, double decline, double tilt);

// Four trees keyed on cpu_util, mem_util, stage_type and interval, each
// with a secondary happiness split at 1.0 and 1.1.
ExpertEnsembleSpec standard_library(std::size_t m);

}  // namespace asax
