#pragma once

// Quantitative dispute trees, semantic sufficiency, explanation utility and
// user-optimal subtree selection.

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phax/aspic.hpp"
#include "phax/profile.hpp"

namespace phax::adapt {

enum class Role { Proponent, Opponent };
const char* to_string(Role r);

struct TreeNode {
  std::size_t id = 0;  // position in the full tree (breadth-first order)
  Role role = Role::Proponent;
  std::string argument;
  double base = 1.0;  // argument weight
  std::optional<std::string> scheme_tag;
  std::vector<double> premise_jargon;  // one entry per premise of the argument
  std::optional<std::size_t> parent;
  std::vector<std::size_t> children;
  std::size_t depth = 1;  // root has depth 1
};

// Nodes are stored in breadth-first order, so every parent precedes its children
// and node ids are their positions in the full tree. A subtree keeps the ids of
// the full tree it was cut from.
class DisputeTree {
 public:
  DisputeTree() = default;
  explicit DisputeTree(std::vector<TreeNode> nodes);

  std::size_t size() const { return nodes_.size(); }
  bool empty() const { return nodes_.empty(); }
  const TreeNode& root() const { return nodes_.front(); }
  const std::vector<TreeNode>& nodes() const { return nodes_; }
  const TreeNode* find(std::size_t id) const;
  std::vector<std::size_t> node_ids() const;

  // Keeps the listed node ids (must be ancestor-closed and contain the root).
  DisputeTree restrict_to(const std::vector<std::size_t>& ids) const;

 private:
  std::vector<TreeNode> nodes_;
};

// Children of a node are every defeater of its argument not already on the
// root-to-node branch, up to `max_depth` levels. Throws NotFound for an unknown root.
DisputeTree build_dispute_tree(const aspic::DefeatGraph& dg, const GroundTheory& gt, std::string_view root,
                               std::size_t max_depth = 6);

// strength(v) = base(v) * prod over children (1 - strength(child)); sigma = strength(root).
double sufficiency(const DisputeTree& t);

struct UtilityWeights {
  double alpha = 1.0 / 3.0;
  double beta = 1.0 / 3.0;
  double gamma = 1.0 / 3.0;
  double tau = 0.5;       // sufficiency threshold
  double epsilon = 0.05;  // allowed |sigma - sigma_full|
};

void validate_weights(const UtilityWeights& w);

struct Features {
  double clarity = 0.0;
  double relevance = 0.0;
  double lexical_fit = 0.0;
};

struct UtilityScore {
  double score = 0.0;
  Features features;
};

// Node budget for a cognitive depth: ceil(3 + 12c).
std::size_t node_budget(double cognitive_depth);

UtilityScore utility(const DisputeTree& t, const UserProfile& u, const UtilityWeights& w);

struct SelectionOptions {
  std::size_t exact_limit = 20;  // exhaustive enumeration up to this many nodes
  std::size_t beam_width = 8;    // 0 = unbounded
  bool force_beam = false;
};

struct ExplanationSelection {
  DisputeTree subtree;
  std::vector<std::size_t> node_ids;  // sorted
  double sigma = 0.0;
  double sigma_full = 0.0;
  double utility = 0.0;
  Features features;
  bool exact = true;  // false when found by beam search
};

// argmax utility over ancestor-closed subtrees containing the root with
// sigma >= tau and |sigma - sigma_full| <= epsilon. Ties: fewer nodes, then the
// lexicographically smallest node-id set. Throws Error(Insufficient) when the
// feasible set is empty.
ExplanationSelection select_explanation(const DisputeTree& full, const UserProfile& u, const UtilityWeights& w,
                                        const SelectionOptions& options = {});

ExplanationSelection select_exact(const DisputeTree& full, const UserProfile& u, const UtilityWeights& w);
ExplanationSelection select_beam(const DisputeTree& full, const UserProfile& u, const UtilityWeights& w,
                                 std::size_t beam_width);

}  // namespace phax::adapt
