#include "phax/adapt.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <deque>
#include <set>
#include <unordered_set>

namespace phax::adapt {

const char* to_string(Role r) { return r == Role::Proponent ? "proponent" : "opponent"; }

DisputeTree::DisputeTree(std::vector<TreeNode> nodes) : nodes_(std::move(nodes)) {}

const TreeNode* DisputeTree::find(std::size_t id) const {
  auto it = std::lower_bound(nodes_.begin(), nodes_.end(), id,
                             [](const TreeNode& n, std::size_t v) { return n.id < v; });
  return it != nodes_.end() && it->id == id ? &*it : nullptr;
}

std::vector<std::size_t> DisputeTree::node_ids() const {
  std::vector<std::size_t> ids;
  for (const auto& n : nodes_) ids.push_back(n.id);
  return ids;
}

DisputeTree DisputeTree::restrict_to(const std::vector<std::size_t>& ids) const {
  std::set<std::size_t> keep(ids.begin(), ids.end());
  std::vector<TreeNode> out;
  for (const auto& n : nodes_) {
    if (!keep.count(n.id)) continue;
    if (n.parent && !keep.count(*n.parent))
      throw Error(ErrorCode::InvalidArgument, "subtree is not ancestor-closed");
    TreeNode copy = n;
    copy.children.clear();
    for (std::size_t c : n.children)
      if (keep.count(c)) copy.children.push_back(c);
    out.push_back(std::move(copy));
  }
  if (out.empty() || out.front().parent) throw Error(ErrorCode::InvalidArgument, "subtree must contain the root");
  return DisputeTree(std::move(out));
}

namespace {

constexpr std::size_t kMaxTreeNodes = 200'000;

std::vector<double> jargon_of(const aspic::Argument& a, const GroundTheory& gt) {
  std::vector<double> out;
  for (const auto& pid : a.premise_set)
    if (const Premise* p = gt.find_premise(pid)) out.push_back(p->jargon);
  return out;
}

}  // namespace

DisputeTree build_dispute_tree(const aspic::DefeatGraph& dg, const GroundTheory& gt, std::string_view root,
                               std::size_t max_depth) {
  if (max_depth < 1) throw Error(ErrorCode::InvalidArgument, "max_depth must be at least 1");
  const aspic::Argument* r = dg.arguments.find(root);
  if (!r) throw Error(ErrorCode::NotFound, "unknown root argument '" + std::string(root) + "'");

  std::map<std::string, std::vector<std::string>> defeaters;
  for (const auto& [a, b] : dg.defeats) defeaters[b].push_back(a);

  auto make = [&](const aspic::Argument& a, Role role, std::optional<std::size_t> parent, std::size_t depth,
                  std::size_t id) {
    TreeNode n;
    n.id = id;
    n.role = role;
    n.argument = a.id;
    n.base = a.weight;
    n.scheme_tag = a.scheme_tag;
    n.premise_jargon = jargon_of(a, gt);
    n.parent = parent;
    n.depth = depth;
    return n;
  };

  std::vector<TreeNode> nodes;
  nodes.push_back(make(*r, Role::Proponent, std::nullopt, 1, 0));
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    if (nodes[i].depth >= max_depth) continue;
    std::set<std::string> branch;
    for (std::optional<std::size_t> v = i; v; v = nodes[*v].parent) branch.insert(nodes[*v].argument);
    auto it = defeaters.find(nodes[i].argument);
    if (it == defeaters.end()) continue;
    // defeats are sorted, so defeaters arrive in argument-id order
    for (const auto& d : it->second) {
      if (branch.count(d)) continue;
      if (nodes.size() >= kMaxTreeNodes)
        throw Error(ErrorCode::LimitExceeded, "dispute tree exceeds " + std::to_string(kMaxTreeNodes) + " nodes");
      Role role = nodes[i].role == Role::Proponent ? Role::Opponent : Role::Proponent;
      std::size_t id = nodes.size();
      nodes.push_back(make(dg.arguments.at(d), role, i, nodes[i].depth + 1, id));
      nodes[i].children.push_back(id);
    }
  }
  return DisputeTree(std::move(nodes));
}

double sufficiency(const DisputeTree& t) {
  if (t.empty()) return 0.0;
  const auto& nodes = t.nodes();
  std::map<std::size_t, double> strength;
  for (auto it = nodes.rbegin(); it != nodes.rend(); ++it) {
    double s = it->base;
    for (std::size_t c : it->children) s *= 1.0 - strength.at(c);
    strength[it->id] = s;
  }
  return strength.at(nodes.front().id);
}

void validate_weights(const UtilityWeights& w) {
  auto nonneg = [](double v) { return std::isfinite(v) && v >= 0.0; };
  auto unit = [](double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; };
  if (!nonneg(w.alpha) || !nonneg(w.beta) || !nonneg(w.gamma))
    throw Error(ErrorCode::InvalidArgument, "alpha, beta and gamma must be nonnegative");
  if (w.alpha + w.beta + w.gamma <= 0.0)
    throw Error(ErrorCode::InvalidArgument, "alpha + beta + gamma must be positive");
  if (!unit(w.tau)) throw Error(ErrorCode::InvalidArgument, "tau must lie in [0,1]");
  if (!unit(w.epsilon)) throw Error(ErrorCode::InvalidArgument, "epsilon must lie in [0,1]");
}

std::size_t node_budget(double c) { return static_cast<std::size_t>(std::ceil(3.0 + 12.0 * c)); }

namespace {

// Evaluates node subsets of one full tree. Subsets are bitsets over tree positions.
class Evaluator {
 public:
  using NodeSet = std::vector<std::uint64_t>;

  Evaluator(const DisputeTree& full, const UserProfile& u, const UtilityWeights& w) : full_(full), u_(u), w_(w) {
    const auto& nodes = full.nodes();
    budget_ = node_budget(u.cognitive_depth);
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      const TreeNode& n = nodes[i];
      parent_.push_back(n.parent ? static_cast<long>(*n.parent) : -1L);
      tagged_.push_back(n.scheme_tag.has_value());
      preferred_.push_back(n.scheme_tag && u.preferred_schemes.count(*n.scheme_tag) > 0);
      double sum = 0.0;
      for (double j : n.premise_jargon) sum += j;
      jargon_sum_.push_back(sum);
      jargon_count_.push_back(n.premise_jargon.size());
    }
    strength_.resize(nodes.size());
  }

  std::size_t size() const { return parent_.size(); }
  long parent(std::size_t i) const { return parent_[i]; }

  NodeSet empty_set() const { return NodeSet((size() + 63) / 64, 0); }
  static bool has(const NodeSet& s, std::size_t i) { return (s[i / 64] >> (i % 64)) & 1u; }
  static void add(NodeSet& s, std::size_t i) { s[i / 64] |= std::uint64_t{1} << (i % 64); }

  struct Eval {
    std::size_t count = 0;
    double sigma = 0.0;
    UtilityScore utility;
  };

  Eval evaluate(const NodeSet& s) {
    const auto& nodes = full_.nodes();
    Eval e;
    std::size_t tagged = 0, preferred = 0, jcount = 0;
    double jsum = 0.0;
    for (std::size_t i = nodes.size(); i-- > 0;) {
      if (!has(s, i)) continue;
      ++e.count;
      tagged += tagged_[i];
      preferred += preferred_[i];
      jsum += jargon_sum_[i];
      jcount += jargon_count_[i];
      double st = nodes[i].base;
      for (std::size_t c : nodes[i].children)
        if (has(s, c)) st *= 1.0 - strength_[c];
      strength_[i] = st;
    }
    e.sigma = strength_[0];
    Features& f = e.utility.features;
    std::size_t over = e.count > budget_ ? e.count - budget_ : 0;
    f.clarity = 1.0 / (1.0 + static_cast<double>(over));
    f.relevance = tagged == 0 ? 1.0 : static_cast<double>(preferred) / static_cast<double>(e.count);
    double mean_jargon = jcount == 0 ? 0.0 : jsum / static_cast<double>(jcount);
    f.lexical_fit = 1.0 - (1.0 - u_.lexical_tolerance) * mean_jargon;
    e.utility.score = w_.alpha * f.clarity + w_.beta * f.relevance + w_.gamma * f.lexical_fit;
    return e;
  }

  bool feasible(const Eval& e, double sigma_full) const {
    return e.sigma >= w_.tau && std::fabs(e.sigma - sigma_full) <= w_.epsilon;
  }

  std::vector<std::size_t> ids(const NodeSet& s) const {
    std::vector<std::size_t> out;
    for (std::size_t i = 0; i < size(); ++i)
      if (has(s, i)) out.push_back(full_.nodes()[i].id);
    return out;
  }

 private:
  const DisputeTree& full_;
  const UserProfile& u_;
  const UtilityWeights& w_;
  std::size_t budget_ = 0;
  std::vector<long> parent_;
  std::vector<bool> tagged_, preferred_;
  std::vector<double> jargon_sum_;
  std::vector<std::size_t> jargon_count_;
  std::vector<double> strength_;
};

bool same_utility(double a, double b) {
  return std::fabs(a - b) <= 1e-12 * std::max({1.0, std::fabs(a), std::fabs(b)});
}

struct Candidate {
  Evaluator::NodeSet set;
  Evaluator::Eval eval;
  std::vector<std::size_t> ids;
};

// Higher utility, then fewer nodes, then lexicographically smaller id set.
bool better(const Candidate& a, const Candidate& b) {
  if (!same_utility(a.eval.utility.score, b.eval.utility.score))
    return a.eval.utility.score > b.eval.utility.score;
  if (a.eval.count != b.eval.count) return a.eval.count < b.eval.count;
  return a.ids < b.ids;
}

struct SetHash {
  std::size_t operator()(const Evaluator::NodeSet& s) const {
    std::size_t h = 0;
    for (auto w : s) h = h * 1000003u ^ std::hash<std::uint64_t>{}(w);
    return h;
  }
};

// Positions of the full tree; ids of a restricted tree may be sparse.
std::vector<std::size_t> positions_of_children(const DisputeTree& t, std::size_t pos) {
  std::vector<std::size_t> out;
  for (std::size_t c : t.nodes()[pos].children) {
    const TreeNode* n = t.find(c);
    out.push_back(static_cast<std::size_t>(n - t.nodes().data()));
  }
  return out;
}

DisputeTree renumbered(const DisputeTree& t) {
  // Work on positions so the evaluator can index children directly.
  std::vector<TreeNode> nodes = t.nodes();
  for (std::size_t i = 0; i < nodes.size(); ++i) {
    nodes[i].children = positions_of_children(t, i);
    if (nodes[i].parent) {
      const TreeNode* p = t.find(*nodes[i].parent);
      nodes[i].parent = static_cast<std::size_t>(p - t.nodes().data());
    }
  }
  for (std::size_t i = 0; i < nodes.size(); ++i) nodes[i].id = i;
  return DisputeTree(std::move(nodes));
}

ExplanationSelection finish(const DisputeTree& full, const std::vector<std::size_t>& positions,
                            const Evaluator::Eval& e, double sigma_full, bool exact) {
  ExplanationSelection sel;
  for (std::size_t p : positions) sel.node_ids.push_back(full.nodes()[p].id);
  sel.subtree = full.restrict_to(sel.node_ids);
  sel.sigma = e.sigma;
  sel.sigma_full = sigma_full;
  sel.utility = e.utility.score;
  sel.features = e.utility.features;
  sel.exact = exact;
  return sel;
}

void require_sufficient(double sigma_full, const UtilityWeights& w) {
  if (sigma_full < w.tau) {
    throw Error(ErrorCode::Insufficient, "sufficiency " + format_number(sigma_full) +
                                             " of the full dispute tree is below threshold " + format_number(w.tau));
  }
}

}  // namespace

UtilityScore utility(const DisputeTree& t, const UserProfile& u, const UtilityWeights& w) {
  if (t.empty()) return {};
  DisputeTree local = renumbered(t);
  Evaluator ev(local, u, w);
  Evaluator::NodeSet all = ev.empty_set();
  for (std::size_t i = 0; i < ev.size(); ++i) Evaluator::add(all, i);
  return ev.evaluate(all).utility;
}

ExplanationSelection select_exact(const DisputeTree& full, const UserProfile& u, const UtilityWeights& w) {
  validate_weights(w);
  validate_profile(u);
  if (full.empty()) throw Error(ErrorCode::InvalidArgument, "empty dispute tree");
  if (full.size() > 30) throw Error(ErrorCode::LimitExceeded, "exact selection is limited to 30 nodes");
  DisputeTree local = renumbered(full);
  Evaluator ev(local, u, w);
  const std::size_t n = ev.size();

  Evaluator::NodeSet all = ev.empty_set();
  for (std::size_t i = 0; i < n; ++i) Evaluator::add(all, i);
  const double sigma_full = ev.evaluate(all).sigma;
  require_sufficient(sigma_full, w);

  std::optional<Candidate> best;
  Evaluator::NodeSet cur = ev.empty_set();
  Evaluator::add(cur, 0);
  // Positions are breadth-first, so a node's parent is decided before the node.
  auto rec = [&](auto&& self, std::size_t pos) -> void {
    if (pos == n) {
      Candidate c{cur, ev.evaluate(cur), {}};
      if (!ev.feasible(c.eval, sigma_full)) return;
      c.ids = ev.ids(cur);
      if (!best || better(c, *best)) best = std::move(c);
      return;
    }
    self(self, pos + 1);
    if (Evaluator::has(cur, static_cast<std::size_t>(ev.parent(pos)))) {
      Evaluator::add(cur, pos);
      self(self, pos + 1);
      cur[pos / 64] &= ~(std::uint64_t{1} << (pos % 64));
    }
  };
  rec(rec, 1);
  // The full tree is always feasible once sigma_full >= tau.
  return finish(full, best->ids, best->eval, sigma_full, true);
}

ExplanationSelection select_beam(const DisputeTree& full, const UserProfile& u, const UtilityWeights& w,
                                 std::size_t beam_width) {
  validate_weights(w);
  validate_profile(u);
  if (full.empty()) throw Error(ErrorCode::InvalidArgument, "empty dispute tree");
  DisputeTree local = renumbered(full);
  Evaluator ev(local, u, w);
  const std::size_t n = ev.size();

  Evaluator::NodeSet all = ev.empty_set();
  for (std::size_t i = 0; i < n; ++i) Evaluator::add(all, i);
  const double sigma_full = ev.evaluate(all).sigma;
  require_sufficient(sigma_full, w);

  std::optional<Candidate> best;
  auto consider = [&](const Candidate& c) {
    if (ev.feasible(c.eval, sigma_full) && (!best || better(c, *best))) best = c;
  };
  // Beam ranking: feasible states first, then the selection order.
  auto rank = [&](const Candidate& a, const Candidate& b) {
    bool fa = ev.feasible(a.eval, sigma_full), fb = ev.feasible(b.eval, sigma_full);
    if (fa != fb) return fa;
    return better(a, b);
  };

  Evaluator::NodeSet start = ev.empty_set();
  Evaluator::add(start, 0);
  std::vector<Candidate> layer{{start, ev.evaluate(start), ev.ids(start)}};
  consider(layer.front());

  // Every kept state can still grow, so the last layer is always the full tree.
  while (!layer.empty()) {
    std::unordered_set<Evaluator::NodeSet, SetHash> seen;
    std::vector<Candidate> next;
    for (const auto& state : layer) {
      for (std::size_t i = 1; i < n; ++i) {
        if (Evaluator::has(state.set, i) || !Evaluator::has(state.set, static_cast<std::size_t>(ev.parent(i))))
          continue;
        Evaluator::NodeSet grown = state.set;
        Evaluator::add(grown, i);
        if (!seen.insert(grown).second) continue;
        Candidate c{grown, ev.evaluate(grown), ev.ids(grown)};
        consider(c);
        next.push_back(std::move(c));
      }
    }
    if (beam_width > 0 && next.size() > beam_width) {
      std::partial_sort(next.begin(), next.begin() + static_cast<long>(beam_width), next.end(), rank);
      next.resize(beam_width);
    }
    layer = std::move(next);
  }
  return finish(full, best->ids, best->eval, sigma_full, false);
}

ExplanationSelection select_explanation(const DisputeTree& full, const UserProfile& u, const UtilityWeights& w,
                                        const SelectionOptions& options) {
  if (!options.force_beam && full.size() <= options.exact_limit) return select_exact(full, u, w);
  return select_beam(full, u, w, options.beam_width);
}

}  // namespace phax::adapt
