#include "phax/aspic.hpp"

#include <algorithm>
#include <cstdint>
#include <cstdio>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace phax::aspic {

const char* to_string(AttackKind k) {
  switch (k) {
    case AttackKind::Rebut: return "rebut";
    case AttackKind::Undercut: return "undercut";
    case AttackKind::Undermine: return "undermine";
  }
  return "rebut";
}

const char* to_string(Status s) {
  switch (s) {
    case Status::Accepted: return "accepted";
    case Status::Undecided: return "undecided";
    case Status::Rejected: return "rejected";
    case Status::Absent: return "absent";
  }
  return "absent";
}

ArgumentSet::ArgumentSet(std::vector<Argument> args) : args_(std::move(args)) {
  std::sort(args_.begin(), args_.end(), [](const Argument& a, const Argument& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < args_.size(); ++i) index_.emplace(args_[i].id, i);
}

const Argument* ArgumentSet::find(std::string_view id) const {
  auto it = index_.find(id);
  return it == index_.end() ? nullptr : &args_[it->second];
}

const Argument& ArgumentSet::at(std::string_view id) const {
  const Argument* a = find(id);
  if (!a) throw Error(ErrorCode::NotFound, "unknown argument '" + std::string(id) + "'");
  return *a;
}

const Argument* ArgumentSet::find_by_label(std::string_view label) const {
  for (const auto& a : args_)
    if (a.label == label) return &a;
  return nullptr;
}

std::vector<const Argument*> ArgumentSet::concluding(const Literal& l) const {
  std::vector<const Argument*> out;
  for (const auto& a : args_)
    if (a.conclusion == l) out.push_back(&a);
  return out;
}

std::set<std::string> ArgumentSet::all_subarguments(std::string_view id) const {
  std::set<std::string> out;
  std::vector<std::string> stack{std::string(id)};
  while (!stack.empty()) {
    std::string cur = std::move(stack.back());
    stack.pop_back();
    if (!out.insert(cur).second) continue;
    for (const auto& s : at(cur).subarguments) stack.push_back(s);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Construction

namespace {

std::string structural_id(std::string_view canonical) {
  std::uint64_t h = 14695981039346656037ull;  // FNV-1a
  for (unsigned char c : canonical) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "a%016llx", static_cast<unsigned long long>(h));
  return buf;
}

class Builder {
 public:
  Builder(const GroundTheory& gt, std::size_t cap) : gt_(gt), cap_(cap) {}

  std::vector<Argument> run() {
    for (const auto& [id, p] : gt_.theory.premises) add_premise_argument(p);
    for (const auto& g : gt_.rules)
      if (g.rule.body.empty()) add_rule_argument(g, {});

    std::size_t round_start = 0;
    while (round_start < args_.size()) {
      std::size_t round_end = args_.size();
      for (const auto& g : gt_.rules) {
        if (g.rule.body.empty()) continue;
        extend(g, round_start, round_end);
      }
      round_start = round_end;
    }
    return std::move(args_);
  }

 private:
  void add_premise_argument(const Premise& p) {
    Argument a;
    a.conclusion = p.literal;
    a.premise_set = {p.id};
    a.weight = p.is_axiom() ? 1.0 : p.confidence;
    a.label = p.id;
    insert(std::move(a), "prem:" + p.id + ":" + p.literal.to_string());
  }

  // Semi-naive: tuples that use at least one argument built in the previous round.
  void extend(const GroundRule& g, std::size_t round_start, std::size_t round_end) {
    const auto& body = g.rule.body;
    std::vector<std::vector<std::size_t>> old_c(body.size()), delta_c(body.size());
    for (std::size_t i = 0; i < body.size(); ++i) {
      auto it = by_conclusion_.find(body[i]);
      if (it == by_conclusion_.end()) return;
      for (std::size_t idx : it->second) {
        if (idx < round_start) old_c[i].push_back(idx);
        else if (idx < round_end) delta_c[i].push_back(idx);
      }
    }
    std::vector<std::size_t> choice(body.size());
    for (std::size_t first_delta = 0; first_delta < body.size(); ++first_delta) {
      std::vector<std::vector<std::size_t>> pools(body.size());
      for (std::size_t i = 0; i < body.size(); ++i) {
        if (i < first_delta) pools[i] = old_c[i];
        else if (i == first_delta) pools[i] = delta_c[i];
        else {
          pools[i] = old_c[i];
          pools[i].insert(pools[i].end(), delta_c[i].begin(), delta_c[i].end());
        }
      }
      product(g, pools, choice, 0);
    }
  }

  void product(const GroundRule& g, const std::vector<std::vector<std::size_t>>& pools,
               std::vector<std::size_t>& choice, std::size_t pos) {
    if (pos == pools.size()) {
      add_rule_argument(g, choice);
      return;
    }
    for (std::size_t idx : pools[pos]) {
      // No rule instance may repeat along a root-to-leaf path.
      if (args_[idx].rules.count(g.rule.id)) continue;
      choice[pos] = idx;
      product(g, pools, choice, pos + 1);
    }
  }

  void add_rule_argument(const GroundRule& g, const std::vector<std::size_t>& subs) {
    Argument a;
    a.conclusion = g.rule.head;
    a.top_rule = g.rule.id;
    a.top_rule_defeasible = g.rule.is_defeasible();
    a.scheme_tag = g.rule.scheme_tag;
    a.rules.insert(g.rule.id);
    a.weight = g.rule.is_defeasible() ? g.rule.weight : 1.0;
    std::string canonical = "rule:" + g.rule.id + ":" + g.rule.head.to_string() + "(";
    for (std::size_t k = 0; k < subs.size(); ++k) {
      const Argument& s = args_[subs[k]];
      a.subarguments.push_back(s.id);
      a.premise_set.insert(s.premise_set.begin(), s.premise_set.end());
      a.defeasible_rules.insert(s.defeasible_rules.begin(), s.defeasible_rules.end());
      a.rules.insert(s.rules.begin(), s.rules.end());
      a.weight = std::min(a.weight, s.weight);
      a.depth = std::max(a.depth, s.depth + 1);
      if (!g.rule.is_defeasible())
        a.last_defeasible_rules.insert(s.last_defeasible_rules.begin(), s.last_defeasible_rules.end());
      canonical += (k ? "," : "") + s.id;
    }
    canonical += ")";
    if (subs.empty()) a.depth = 1;
    if (g.rule.is_defeasible()) {
      a.defeasible_rules.insert(g.rule.id);
      a.last_defeasible_rules = {g.rule.id};
    }
    insert(std::move(a), canonical);
  }

  void insert(Argument a, const std::string& canonical) {
    if (seen_.count(canonical)) return;
    a.id = structural_id(canonical);
    if (ids_.count(a.id)) throw Error(ErrorCode::Internal, "argument id collision for " + canonical);
    if (args_.size() >= cap_)
      throw Error(ErrorCode::LimitExceeded, "argument construction exceeds " + std::to_string(cap_) + " arguments");
    seen_.insert(canonical);
    ids_.insert(a.id);
    by_conclusion_[a.conclusion].push_back(args_.size());
    args_.push_back(std::move(a));
  }

  const GroundTheory& gt_;
  std::size_t cap_;
  std::vector<Argument> args_;
  std::set<std::string> seen_;
  std::set<std::string> ids_;
  std::map<Literal, std::vector<std::size_t>> by_conclusion_;
};

void assign_labels(std::vector<Argument>& args, const GroundTheory& gt) {
  std::map<std::string, std::vector<Argument*>> by_parent, by_ground;
  for (auto& a : args) {
    if (a.is_premise_argument()) continue;
    by_parent[std::string(gt.parent_of(*a.top_rule))].push_back(&a);
    by_ground[*a.top_rule].push_back(&a);
  }
  for (auto& [parent, group] : by_parent) {
    if (group.size() == 1) {
      group.front()->label = parent;
      continue;
    }
    for (Argument* a : group) {
      auto& same = by_ground[*a->top_rule];
      if (same.size() == 1) {
        a->label = *a->top_rule;
        continue;
      }
      std::vector<Argument*> sorted = same;
      std::sort(sorted.begin(), sorted.end(), [](const Argument* x, const Argument* y) { return x->id < y->id; });
      auto pos = std::find(sorted.begin(), sorted.end(), a) - sorted.begin();
      a->label = *a->top_rule + "#" + std::to_string(pos + 1);
    }
  }
}

}  // namespace

ArgumentSet construct_arguments(const GroundTheory& gt, const ConstructionOptions& options) {
  std::vector<Argument> args = Builder(gt, options.max_arguments).run();
  assign_labels(args, gt);
  return ArgumentSet(std::move(args));
}

double argument_weight(const Argument& a, const GroundTheory& gt) {
  double w = 1.0;
  for (const auto& pid : a.premise_set) {
    const Premise* p = gt.find_premise(pid);
    if (p && !p->is_axiom()) w = std::min(w, p->confidence);
  }
  for (const auto& rid : a.defeasible_rules) {
    const GroundRule* r = gt.find_rule(rid);
    if (r) w = std::min(w, r->rule.weight);
  }
  return w;
}

// ---------------------------------------------------------------------------
// Attacks and defeats

std::vector<Attack> compute_attacks(const ArgumentSet& args, const GroundTheory& gt) {
  // super[b'] = every argument having b' as a (reflexive, transitive) subargument.
  std::map<std::string, std::vector<std::string>> super;
  for (const auto& b : args)
    for (const auto& s : args.all_subarguments(b.id)) super[s].push_back(b.id);

  std::map<Literal, std::vector<const Argument*>> by_conclusion;
  std::map<std::string, std::vector<const Argument*>> by_top_rule;  // ground and parent ids
  for (const auto& a : args) {
    by_conclusion[a.conclusion].push_back(&a);
    if (a.top_rule && a.top_rule_defeasible) {
      by_top_rule[*a.top_rule].push_back(&a);
      std::string parent(gt.parent_of(*a.top_rule));
      if (parent != *a.top_rule) by_top_rule[parent].push_back(&a);
    }
  }

  std::set<Attack> out;
  auto emit = [&](const Argument& attacker, const Argument& target, AttackKind kind) {
    for (const auto& b : super[target.id]) out.insert({attacker.id, b, kind, target.id});
  };
  for (const auto& a : args) {
    if (auto it = by_conclusion.find(a.conclusion.contrary()); it != by_conclusion.end()) {
      for (const Argument* t : it->second) {
        if (t->top_rule && t->top_rule_defeasible) {
          emit(a, *t, AttackKind::Rebut);
        } else if (t->is_premise_argument()) {
          const Premise* p = gt.find_premise(*t->premise_set.begin());
          if (p && !p->is_axiom()) emit(a, *t, AttackKind::Undermine);
        }
      }
    }
    const Literal& c = a.conclusion;
    if (c.negated && c.predicate == kApplicablePredicate && c.arity() == 1) {
      if (auto it = by_top_rule.find(c.args[0].name); it != by_top_rule.end())
        for (const Argument* t : it->second) emit(a, *t, AttackKind::Undercut);
    }
  }
  return {out.begin(), out.end()};
}

bool elitist_less(const std::set<std::string>& s1, const std::set<std::string>& s2,
                  const PreferenceOrder& order) {
  if (s1.empty()) return false;
  return std::any_of(s1.begin(), s1.end(), [&](const std::string& x) {
    return std::all_of(s2.begin(), s2.end(), [&](const std::string& y) { return order.less(x, y); });
  });
}

namespace {

std::set<std::string> parents(const std::set<std::string>& ground_ids, const GroundTheory& gt) {
  std::set<std::string> out;
  for (const auto& id : ground_ids) out.emplace(gt.parent_of(id));
  return out;
}

std::set<std::string> ordinary_premises(const Argument& a, const GroundTheory& gt) {
  std::set<std::string> out;
  for (const auto& pid : a.premise_set) {
    const Premise* p = gt.find_premise(pid);
    if (p && !p->is_axiom()) out.insert(pid);
  }
  return out;
}

}  // namespace

bool attack_succeeds(const Attack& attack, const ArgumentSet& args, const GroundTheory& gt,
                     const PreferenceOrder& order) {
  if (attack.kind == AttackKind::Undercut) return true;
  const Argument& attacker = args.at(attack.attacker);
  const Argument& target = args.at(attack.target);
  if (attack.kind == AttackKind::Rebut) {
    return !elitist_less(parents(attacker.last_defeasible_rules, gt),
                         parents(target.last_defeasible_rules, gt), order);
  }
  return !elitist_less(ordinary_premises(attacker, gt), ordinary_premises(target, gt), order);
}

DefeatGraph resolve_defeats(ArgumentSet args, std::vector<Attack> attacks, const GroundTheory& gt) {
  return resolve_defeats(std::move(args), std::move(attacks), gt, gt.theory.preferences);
}

DefeatGraph resolve_defeats(ArgumentSet args, std::vector<Attack> attacks, const GroundTheory& gt,
                            const std::set<PreferencePair>& preferences) {
  PreferenceOrder order(preferences);
  std::set<std::pair<std::string, std::string>> defeats;
  for (const auto& atk : attacks)
    if (attack_succeeds(atk, args, gt, order)) defeats.emplace(atk.attacker, atk.attacked);
  DefeatGraph dg;
  dg.arguments = std::move(args);
  dg.attacks = std::move(attacks);
  dg.defeats.assign(defeats.begin(), defeats.end());
  return dg;
}

bool DefeatGraph::defeats_pair(std::string_view from, std::string_view to) const {
  return std::binary_search(defeats.begin(), defeats.end(), std::make_pair(std::string(from), std::string(to)));
}

std::vector<std::string> DefeatGraph::defeaters_of(std::string_view id) const {
  std::vector<std::string> out;
  for (const auto& [a, b] : defeats)
    if (b == id) out.push_back(a);
  std::sort(out.begin(), out.end());
  return out;
}

Projection project_af(const DefeatGraph& dg) {
  std::vector<std::string> ids;
  for (const auto& a : dg.arguments) ids.push_back(a.id);
  Projection p{af::ArgumentationFramework(ids, dg.defeats), {}};
  p.to_argument.resize(p.af.size());
  for (std::size_t i = 0; i < p.af.size(); ++i) {
    const Argument* a = dg.arguments.find(p.af.name(i));
    p.to_argument[i] = static_cast<std::size_t>(a - dg.arguments.all().data());
  }
  return p;
}

Analysis analyze(const Theory& t, const AnalysisOptions& options) {
  Analysis a;
  a.theory = t;
  a.ground = ground_theory(t, options.grounding);
  ArgumentSet args = construct_arguments(a.ground, options.construction);
  std::vector<Attack> attacks = compute_attacks(args, a.ground);
  a.graph = resolve_defeats(std::move(args), std::move(attacks), a.ground);
  a.projection = project_af(a.graph);
  return a;
}

ConclusionStatus conclusion_status(const Analysis& a, const std::vector<af::Labelling>& labellings,
                                   const Literal& l) {
  ConclusionStatus s;
  s.conclusion = l;
  std::vector<std::size_t> idx;
  for (const Argument* arg : a.graph.arguments.concluding(l)) idx.push_back(*a.projection.af.index_of(arg->id));
  if (idx.empty()) return s;
  auto in_some = [&](const af::Labelling& lab) {
    return std::any_of(idx.begin(), idx.end(), [&](std::size_t i) { return lab[i] == af::Label::In; });
  };
  auto all_out = [&](const af::Labelling& lab) {
    return std::all_of(idx.begin(), idx.end(), [&](std::size_t i) { return lab[i] == af::Label::Out; });
  };
  s.skeptical = std::all_of(labellings.begin(), labellings.end(), in_some);
  s.credulous = std::any_of(labellings.begin(), labellings.end(), in_some);
  if (s.skeptical) s.status = Status::Accepted;
  else if (std::all_of(labellings.begin(), labellings.end(), all_out)) s.status = Status::Rejected;
  else s.status = Status::Undecided;
  return s;
}

std::vector<ConclusionStatus> all_conclusion_statuses(const Analysis& a,
                                                      const std::vector<af::Labelling>& labellings) {
  std::map<std::string, Literal> conclusions;
  for (const auto& arg : a.graph.arguments) conclusions.emplace(arg.conclusion.to_string(), arg.conclusion);
  std::vector<ConclusionStatus> out;
  for (const auto& [text, lit] : conclusions) out.push_back(conclusion_status(a, labellings, lit));
  return out;
}

// ---------------------------------------------------------------------------
// Export

std::string arguments_to_json(const ArgumentSet& args) {
  nlohmann::ordered_json out = nlohmann::ordered_json::array();
  for (const auto& a : args) {
    nlohmann::ordered_json j;
    j["id"] = a.id;
    j["label"] = a.label;
    j["conclusion"] = a.conclusion.to_string();
    j["top_rule"] = a.top_rule ? nlohmann::ordered_json(*a.top_rule) : nlohmann::ordered_json(nullptr);
    j["subarguments"] = a.subarguments;
    j["premises"] = a.premise_set;
    j["defeasible_rules"] = a.defeasible_rules;
    j["weight"] = a.weight;
    if (a.scheme_tag) j["scheme"] = *a.scheme_tag;
    out.push_back(std::move(j));
  }
  return out.dump(2);
}

namespace {

std::string dot_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out;
}

}  // namespace

std::string defeat_graph_to_dot(const DefeatGraph& dg) {
  std::ostringstream os;
  os << "digraph defeats {\n  rankdir=BT;\n  node [shape=box];\n";
  for (const auto& a : dg.arguments) {
    os << "  \"" << a.id << "\" [label=\"" << dot_escape(a.label) << "\\n"
       << dot_escape(a.conclusion.to_string()) << "\\nw=" << format_number(a.weight) << "\"];\n";
  }
  std::map<std::pair<std::string, std::string>, std::set<std::string>> kinds;
  for (const auto& atk : dg.attacks)
    if (dg.defeats_pair(atk.attacker, atk.attacked)) kinds[{atk.attacker, atk.attacked}].insert(to_string(atk.kind));
  for (const auto& [pair, ks] : kinds) {
    std::string label;
    for (const auto& k : ks) label += (label.empty() ? "" : ",") + k;
    os << "  \"" << pair.first << "\" -> \"" << pair.second << "\" [label=\"" << label << "\"];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace phax::aspic
