#pragma once

// Brute-force reference implementations. They share no code with the library
// beyond its public data types, so agreement is evidence rather than tautology.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "phax/adapt.hpp"
#include "phax/aspic.hpp"
#include "phax/theory.hpp"

namespace oracle {

// ---------------------------------------------------------------------------
// Abstract frameworks: 0 = IN, 1 = OUT, 2 = UNDEC

using Assignment = std::vector<int>;
using Matrix = std::vector<std::vector<bool>>;  // m[a][b]: a attacks b

inline bool legal_complete(const Matrix& m, const Assignment& lab) {
  const std::size_t n = lab.size();
  for (std::size_t b = 0; b < n; ++b) {
    bool all_out = true, some_in = false;
    for (std::size_t a = 0; a < n; ++a) {
      if (!m[a][b]) continue;
      if (lab[a] != 1) all_out = false;
      if (lab[a] == 0) some_in = true;
    }
    if ((lab[b] == 0) != all_out) return false;
    if ((lab[b] == 1) != some_in) return false;
  }
  return true;
}

// Every one of the 3^n assignments that is a legal complete labelling.
inline std::vector<Assignment> complete_labellings(const Matrix& m) {
  const std::size_t n = m.size();
  std::vector<Assignment> out;
  Assignment lab(n, 0);
  std::function<void(std::size_t)> rec = [&](std::size_t i) {
    if (i == n) {
      if (legal_complete(m, lab)) out.push_back(lab);
      return;
    }
    for (int v = 0; v < 3; ++v) {
      lab[i] = v;
      rec(i + 1);
    }
  };
  rec(0);
  return out;
}

inline std::set<std::size_t> in_set(const Assignment& a) {
  std::set<std::size_t> s;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i] == 0) s.insert(i);
  return s;
}

inline bool subset(const std::set<std::size_t>& a, const std::set<std::size_t>& b) {
  return std::includes(b.begin(), b.end(), a.begin(), a.end());
}

inline std::set<Assignment> semantics(const Matrix& m, const std::string& name) {
  auto all = complete_labellings(m);
  std::set<Assignment> out;
  if (name == "complete") {
    out.insert(all.begin(), all.end());
  } else if (name == "stable") {
    for (const auto& l : all)
      if (std::find(l.begin(), l.end(), 2) == l.end()) out.insert(l);
  } else if (name == "preferred") {
    for (const auto& l : all) {
      bool maximal = true;
      for (const auto& o : all)
        if (in_set(l) != in_set(o) && subset(in_set(l), in_set(o))) maximal = false;
      if (maximal) out.insert(l);
    }
  } else if (name == "grounded") {
    for (const auto& l : all) {
      bool minimal = true;
      for (const auto& o : all)
        if (!subset(in_set(l), in_set(o))) minimal = false;
      if (minimal) out.insert(l);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Dispute trees given as parent vectors (parent[0] = -1, parent[i] < i).

struct Tree {
  std::vector<int> parent;
  std::vector<double> base;
  std::vector<std::optional<std::string>> tag;
  std::vector<std::vector<double>> jargon;

  std::size_t size() const { return parent.size(); }
};

inline double sigma(const Tree& t, const std::vector<bool>& keep) {
  std::function<double(std::size_t)> strength = [&](std::size_t v) {
    double s = t.base[v];
    for (std::size_t c = 0; c < t.size(); ++c)
      if (keep[c] && t.parent[c] == static_cast<int>(v)) s *= 1.0 - strength(c);
    return s;
  };
  return strength(0);
}

inline bool ancestor_closed(const Tree& t, const std::vector<bool>& keep) {
  if (!keep[0]) return false;
  for (std::size_t i = 1; i < t.size(); ++i)
    if (keep[i] && !keep[static_cast<std::size_t>(t.parent[i])]) return false;
  return true;
}

struct Weights {
  double alpha, beta, gamma, tau, epsilon;
};

inline double utility(const Tree& t, const std::vector<bool>& keep, double l, double c,
                      const std::set<std::string>& preferred, const Weights& w) {
  std::size_t n = 0, tagged = 0, liked = 0, jn = 0;
  double js = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) {
    if (!keep[i]) continue;
    ++n;
    if (t.tag[i]) {
      ++tagged;
      if (preferred.count(*t.tag[i])) ++liked;
    }
    for (double j : t.jargon[i]) {
      js += j;
      ++jn;
    }
  }
  double budget = std::ceil(3.0 + 12.0 * c);
  double clarity = 1.0 / (1.0 + std::max(0.0, static_cast<double>(n) - budget));
  double relevance = tagged == 0 ? 1.0 : static_cast<double>(liked) / static_cast<double>(n);
  double lexical = 1.0 - (1.0 - l) * (jn == 0 ? 0.0 : js / static_cast<double>(jn));
  return w.alpha * clarity + w.beta * relevance + w.gamma * lexical;
}

// Exhaustive argmax over ancestor-closed subtrees (ties: fewer nodes, then
// lexicographically smallest index set). Empty optional when nothing is feasible.
inline std::optional<std::vector<std::size_t>> best_subtree(const Tree& t, double l, double c,
                                                            const std::set<std::string>& preferred,
                                                            const Weights& w) {
  const std::size_t n = t.size();
  std::vector<bool> all(n, true);
  const double full = sigma(t, all);
  std::optional<std::vector<std::size_t>> best;
  // A pruned subtree may clear tau when the full tree does not; that still counts
  // as insufficient, since the explanation would overstate the case.
  if (full < w.tau) return best;
  double best_u = 0.0;
  for (std::uint64_t mask = 0; mask < (std::uint64_t{1} << n); ++mask) {
    std::vector<bool> keep(n);
    std::vector<std::size_t> ids;
    for (std::size_t i = 0; i < n; ++i)
      if ((keep[i] = (mask >> i) & 1u)) ids.push_back(i);
    if (!ancestor_closed(t, keep)) continue;
    double s = sigma(t, keep);
    if (s < w.tau || std::fabs(s - full) > w.epsilon) continue;
    double u = utility(t, keep, l, c, preferred, w);
    bool take = !best;
    if (best) {
      double tol = 1e-12 * std::max({1.0, std::fabs(u), std::fabs(best_u)});
      if (std::fabs(u - best_u) > tol) take = u > best_u;
      else if (ids.size() != best->size()) take = ids.size() < best->size();
      else take = ids < *best;
    }
    if (take) {
      best = ids;
      best_u = u;
    }
  }
  return best;
}

inline Tree random_tree(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  static const std::vector<std::string> tags = {"expert_opinion", "cause_to_effect", "practical_reasoning",
                                                "analogy", "statistical_generalization", "ethical_value"};
  Tree t;
  for (std::size_t i = 0; i < n; ++i) {
    t.parent.push_back(i == 0 ? -1 : static_cast<int>(rng() % i));
    t.base.push_back(unit(rng));
    if (rng() % 3 == 0) t.tag.push_back(tags[rng() % tags.size()]);
    else t.tag.push_back(std::nullopt);
    std::vector<double> j;
    for (std::size_t k = rng() % 3; k > 0; --k) j.push_back(unit(rng));
    t.jargon.push_back(j);
  }
  return t;
}

// Converts to the library's breadth-first DisputeTree. Returns the BFS order so
// callers can map oracle indices to node ids.
inline phax::adapt::DisputeTree to_dispute_tree(const Tree& t, std::vector<std::size_t>* order_out = nullptr) {
  const std::size_t n = t.size();
  std::vector<std::vector<std::size_t>> kids(n);
  for (std::size_t i = 1; i < n; ++i) kids[static_cast<std::size_t>(t.parent[i])].push_back(i);
  std::vector<std::size_t> order{0};
  for (std::size_t k = 0; k < order.size(); ++k)
    for (std::size_t c : kids[order[k]]) order.push_back(c);
  std::vector<std::size_t> pos(n);
  for (std::size_t k = 0; k < n; ++k) pos[order[k]] = k;
  std::vector<phax::adapt::TreeNode> nodes(n);
  std::vector<std::size_t> depth(n, 1);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t i = order[k];
    auto& nd = nodes[k];
    nd.id = k;
    nd.argument = "arg" + std::to_string(i);
    nd.base = t.base[i];
    nd.scheme_tag = t.tag[i];
    nd.premise_jargon = t.jargon[i];
    if (i != 0) {
      nd.parent = pos[static_cast<std::size_t>(t.parent[i])];
      depth[i] = depth[static_cast<std::size_t>(t.parent[i])] + 1;
    }
    nd.depth = depth[i];
    nd.role = depth[i] % 2 == 1 ? phax::adapt::Role::Proponent : phax::adapt::Role::Opponent;
    for (std::size_t c : kids[i]) nd.children.push_back(pos[c]);
  }
  if (order_out) *order_out = order;
  return phax::adapt::DisputeTree(std::move(nodes));
}

// ---------------------------------------------------------------------------
// Structured arguments, generated top-down: for a literal, every premise stating
// it, and every ground rule concluding it (not already used on the path) applied
// to every combination of arguments for its body.

inline std::set<std::string> brute_force_arguments(const phax::GroundTheory& gt) {
  std::function<std::vector<std::string>(const phax::Literal&, std::set<std::string>)> build =
      [&](const phax::Literal& lit, std::set<std::string> path) {
        std::vector<std::string> out;
        for (const auto& [id, p] : gt.theory.premises)
          if (p.literal == lit) out.push_back("P:" + id);
        for (const auto& g : gt.rules) {
          if (!(g.rule.head == lit) || path.count(g.rule.id)) continue;
          auto next = path;
          next.insert(g.rule.id);
          std::vector<std::string> partial{""};
          for (const auto& b : g.rule.body) {
            auto subs = build(b, next);
            std::vector<std::string> grown;
            for (const auto& pre : partial)
              for (const auto& s : subs) grown.push_back(pre + (pre.empty() ? "" : ",") + s);
            partial = std::move(grown);
          }
          for (const auto& body : partial) out.push_back("R:" + g.rule.id + "(" + body + ")");
        }
        return out;
      };
  std::set<phax::Literal> conclusions;
  for (const auto& [_, p] : gt.theory.premises) conclusions.insert(p.literal);
  for (const auto& g : gt.rules) conclusions.insert(g.rule.head);
  std::set<std::string> all;
  for (const auto& l : conclusions)
    for (auto& s : build(l, {})) all.insert(std::move(s));
  return all;
}

// Same shape string for a constructed argument.
inline std::string shape(const phax::aspic::ArgumentSet& args, const phax::aspic::Argument& a) {
  if (a.is_premise_argument()) return "P:" + *a.premise_set.begin();
  std::string s = "R:" + *a.top_rule + "(";
  for (std::size_t i = 0; i < a.subarguments.size(); ++i)
    s += (i ? "," : "") + shape(args, args.at(a.subarguments[i]));
  return s + ")";
}

// ---------------------------------------------------------------------------
// Theory invariants, checked independently of validate_theory.

inline std::vector<std::string> invariant_violations(const phax::Theory& t) {
  std::vector<std::string> bad;
  auto unit = [](double v) { return v >= 0.0 && v <= 1.0; };
  std::map<std::string, std::size_t> arity;
  auto lit = [&](const phax::Literal& l, bool ground) {
    auto [it, fresh] = arity.emplace(l.predicate, l.args.size());
    if (!fresh && it->second != l.args.size()) bad.push_back("arity " + l.predicate);
    for (const auto& a : l.args) {
      if (a.is_variable() && ground) bad.push_back("non-ground premise " + l.to_string());
      if (!a.is_variable() && !t.constants.count(a.name)) bad.push_back("undeclared " + a.name);
      if (a.name.empty()) bad.push_back("empty term");
    }
  };
  for (const auto& [id, p] : t.premises) {
    if (t.rules.count(id)) bad.push_back("duplicate " + id);
    if (!unit(p.confidence) || !unit(p.jargon)) bad.push_back("range " + id);
    if (p.is_axiom() && p.confidence != 1.0) bad.push_back("axiom confidence " + id);
    lit(p.literal, true);
  }
  for (const auto& [id, r] : t.rules) {
    if (!unit(r.weight)) bad.push_back("weight range " + id);
    if (!r.is_defeasible() && r.weight != 1.0) bad.push_back("strict weight " + id);
    if (!r.is_defeasible() && r.body.empty()) bad.push_back("empty strict body " + id);
    for (const auto& b : r.body) lit(b, false);
    lit(r.head, false);
  }
  // Acyclicity by repeated removal of nodes with no incoming edges.
  std::set<std::string> nodes;
  for (const auto& [hi, lo] : t.preferences) {
    nodes.insert(hi);
    nodes.insert(lo);
    bool known = (t.rules.count(hi) || (t.premises.count(hi) && !t.premises.at(hi).is_axiom())) &&
                 (t.rules.count(lo) || (t.premises.count(lo) && !t.premises.at(lo).is_axiom()));
    if (!known) bad.push_back("preference endpoint " + hi + ">" + lo);
  }
  auto edges = t.preferences;
  bool progress = true;
  while (progress && !nodes.empty()) {
    progress = false;
    for (auto it = nodes.begin(); it != nodes.end();) {
      bool has_in = false;
      for (const auto& [hi, lo] : edges)
        if (lo == *it) has_in = true;
      if (!has_in) {
        std::erase_if(edges, [&](const auto& e) { return e.first == *it; });
        it = nodes.erase(it);
        progress = true;
      } else {
        ++it;
      }
    }
  }
  if (!nodes.empty()) bad.push_back("preference cycle");
  return bad;
}

}  // namespace oracle
