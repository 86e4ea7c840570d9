#include "phax/theory.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>

namespace phax {

const char* to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Parse: return "PARSE";
    case ErrorCode::InvalidArgument: return "INVALID_ARGUMENT";
    case ErrorCode::NotFound: return "NOT_FOUND";
    case ErrorCode::Insufficient: return "INSUFFICIENT";
    case ErrorCode::LimitExceeded: return "LIMIT_EXCEEDED";
    case ErrorCode::Io: return "IO";
    case ErrorCode::Internal: return "INTERNAL";
  }
  return "INTERNAL";
}

namespace {

bool is_ident_char(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '_';
}

}  // namespace

bool is_identifier(std::string_view name) {
  if (name.empty()) return false;
  char c = name.front();
  if (!((c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_')) return false;
  return std::all_of(name.begin(), name.end(), is_ident_char);
}

bool is_variable_name(std::string_view name) {
  if (!is_identifier(name)) return false;
  return (name.front() >= 'A' && name.front() <= 'Z') || name.front() == '_';
}

bool is_constant_name(std::string_view name) {
  if (name.empty()) return false;
  char c = name.front();
  if (!((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9'))) return false;
  return std::all_of(name.begin(), name.end(), is_ident_char);
}

Literal Literal::ground(std::string predicate, std::vector<std::string> constants, bool negated) {
  std::vector<Term> args;
  args.reserve(constants.size());
  for (auto& c : constants) args.push_back(Term::constant(std::move(c)));
  return Literal(std::move(predicate), std::move(args), negated);
}

bool Literal::is_ground() const {
  return std::none_of(args.begin(), args.end(), [](const Term& t) { return t.is_variable(); });
}

std::string Literal::to_string() const {
  std::string out;
  if (negated) out += '~';
  out += predicate;
  if (!args.empty()) {
    out += '(';
    for (std::size_t i = 0; i < args.size(); ++i) {
      if (i) out += ',';
      out += args[i].name;
    }
    out += ')';
  }
  return out;
}

Literal applicable_literal(std::string_view rule_id, bool negated) {
  return Literal::ground(std::string(kApplicablePredicate), {std::string(rule_id)}, negated);
}

void Theory::collect_constants() {
  auto add = [this](const Literal& l) {
    for (const auto& t : l.args)
      if (!t.is_variable()) constants.insert(t.name);
  };
  for (const auto& [id, p] : premises) add(p.literal);
  for (const auto& [id, r] : rules) {
    for (const auto& b : r.body) add(b);
    add(r.head);
  }
}

const char* to_string(Severity s) {
  switch (s) {
    case Severity::Error: return "error";
    case Severity::Warning: return "warning";
    case Severity::Note: return "note";
  }
  return "error";
}

std::string Diagnostic::format(std::string_view file) const {
  std::ostringstream os;
  os << file << ':' << line << ':' << column << ": " << to_string(severity) << ": " << message;
  return os.str();
}

bool has_errors(const std::vector<Diagnostic>& diags) {
  return std::any_of(diags.begin(), diags.end(),
                     [](const Diagnostic& d) { return d.severity == Severity::Error; });
}

std::string format_number(double v) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

// ---------------------------------------------------------------------------
// Preferences

PreferenceOrder::PreferenceOrder(const std::set<PreferencePair>& pairs) {
  std::map<std::string, std::vector<std::string>> up;  // lower -> directly preferred
  for (const auto& [hi, lo] : pairs) up[lo].push_back(hi);
  for (const auto& [lo, direct] : up) {
    std::set<std::string> seen;
    std::vector<std::string> stack(direct.begin(), direct.end());
    while (!stack.empty()) {
      std::string cur = std::move(stack.back());
      stack.pop_back();
      if (!seen.insert(cur).second) continue;
      if (auto it = up.find(cur); it != up.end())
        for (const auto& n : it->second) stack.push_back(n);
    }
    above_.emplace(lo, std::move(seen));
  }
}

bool PreferenceOrder::less(std::string_view lower, std::string_view higher) const {
  auto it = above_.find(lower);
  return it != above_.end() && it->second.count(std::string(higher)) > 0;
}

std::vector<std::vector<std::string>> preference_cycles(const std::set<PreferencePair>& pairs) {
  std::map<std::string, std::vector<std::string>> graph;
  std::set<std::string> self_loops;
  for (const auto& [hi, lo] : pairs) {
    graph[hi].push_back(lo);
    graph.try_emplace(lo);
    if (hi == lo) self_loops.insert(hi);
  }
  // Tarjan
  std::map<std::string, int> index, low;
  std::set<std::string> on_stack;
  std::vector<std::string> stack;
  std::vector<std::vector<std::string>> out;
  int counter = 0;
  std::function<void(const std::string&)> visit = [&](const std::string& v) {
    index[v] = low[v] = counter++;
    stack.push_back(v);
    on_stack.insert(v);
    for (const auto& w : graph[v]) {
      if (!index.count(w)) {
        visit(w);
        low[v] = std::min(low[v], low[w]);
      } else if (on_stack.count(w)) {
        low[v] = std::min(low[v], index[w]);
      }
    }
    if (low[v] == index[v]) {
      std::vector<std::string> comp;
      std::string w;
      do {
        w = stack.back();
        stack.pop_back();
        on_stack.erase(w);
        comp.push_back(w);
      } while (w != v);
      if (comp.size() > 1 || self_loops.count(v)) {
        std::sort(comp.begin(), comp.end());
        out.push_back(std::move(comp));
      }
    }
  };
  for (const auto& [v, _] : graph)
    if (!index.count(v)) visit(v);
  std::sort(out.begin(), out.end());
  return out;
}

// ---------------------------------------------------------------------------
// Validation

namespace {

bool in_unit(double v) { return std::isfinite(v) && v >= 0.0 && v <= 1.0; }

bool valid_band(std::string_view b) {
  return b == "lay" || b == "decision_maker" || b == "professional";
}

struct Validator {
  const Theory& t;
  std::vector<Diagnostic> out;
  std::map<std::string, std::pair<std::size_t, std::string>> arity;  // pred -> (arity, first user)

  void error(std::string msg, std::vector<std::string> ids) {
    out.push_back({Severity::Error, std::move(msg), std::move(ids)});
  }

  void check_literal(const Literal& l, const std::string& owner, bool must_be_ground) {
    if (l.predicate.empty() || !is_identifier(l.predicate) || is_variable_name(l.predicate)) {
      error("invalid predicate name '" + l.predicate + "'", {owner});
    }
    for (const auto& term : l.args) {
      if (term.name.empty()) {
        error("empty term name in " + l.to_string(), {owner});
      } else if (term.is_variable()) {
        if (!is_variable_name(term.name)) error("invalid variable name '" + term.name + "'", {owner});
        if (must_be_ground) error("premise literal must be ground: " + l.to_string(), {owner});
      } else {
        if (!is_constant_name(term.name)) error("invalid constant name '" + term.name + "'", {owner});
        else if (!t.constants.count(term.name))
          error("undeclared constant '" + term.name + "'", {owner});
      }
    }
    if (l.predicate == kApplicablePredicate && l.arity() != 1)
      error("predicate applicable takes exactly one argument", {owner});
    auto [it, fresh] = arity.try_emplace(l.predicate, l.arity(), owner);
    if (!fresh && it->second.first != l.arity()) {
      error("arity mismatch for predicate " + l.predicate + ": " + std::to_string(it->second.first) +
                " vs " + std::to_string(l.arity()),
            {owner});
    }
  }

  void run() {
    if (!is_identifier(t.name)) error("invalid theory name '" + t.name + "'", {});
    for (const auto& c : t.constants)
      if (!is_constant_name(c)) error("invalid constant name '" + c + "'", {});

    for (const auto& [key, p] : t.premises) {
      if (key != p.id) error("premise key/id mismatch for " + p.id, {p.id});
      if (!is_identifier(p.id)) error("invalid premise id '" + p.id + "'", {p.id});
      if (t.rules.count(p.id)) error("duplicate id " + p.id, {p.id});
      check_literal(p.literal, p.id, true);
      if (!in_unit(p.confidence)) error("confidence must lie in [0,1]", {p.id});
      if (!in_unit(p.jargon)) error("jargon must lie in [0,1]", {p.id});
      if (p.is_axiom() && p.confidence != 1.0) error("axiom confidence must be 1.0", {p.id});
      for (const auto& [band, text] : p.display_text) {
        if (!valid_band(band)) error("unknown display band '" + band + "'", {p.id});
        if (text.empty()) error("empty display text for band " + band, {p.id});
      }
    }
    for (const auto& [key, r] : t.rules) {
      if (key != r.id) error("rule key/id mismatch for " + r.id, {r.id});
      if (!is_identifier(r.id)) error("invalid rule id '" + r.id + "'", {r.id});
      for (const auto& b : r.body) check_literal(b, r.id, false);
      check_literal(r.head, r.id, false);
      if (!in_unit(r.weight)) error("weight must lie in [0,1]", {r.id});
      if (!r.is_defeasible() && r.weight != 1.0) error("strict weight must be 1.0", {r.id});
      if (!r.is_defeasible() && r.body.empty()) error("strict rule body must be nonempty", {r.id});
      if (r.scheme_tag && !is_identifier(*r.scheme_tag))
        error("invalid scheme tag '" + *r.scheme_tag + "'", {r.id});
    }
    for (const auto& [hi, lo] : t.preferences) {
      for (const auto& id : {hi, lo}) {
        if (t.rules.count(id)) continue;
        auto p = t.premises.find(id);
        if (p == t.premises.end()) error("preference over unknown id " + id, {id});
        else if (p->second.is_axiom()) error("preference over axiom " + id, {id});
      }
    }
    for (const auto& cycle : preference_cycles(t.preferences)) {
      std::string msg = "preference cycle {";
      for (std::size_t i = 0; i < cycle.size(); ++i) msg += (i ? "," : "") + cycle[i];
      msg += "}";
      error(msg, cycle);
    }
  }
};

}  // namespace

std::vector<Diagnostic> validate_theory(const Theory& t) {
  Validator v{t, {}, {}};
  v.run();
  return std::move(v.out);
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

void append_escaped(std::string& out, std::string_view s) {
  out += '"';
  for (unsigned char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (c < 0x20 || c == 0x7f) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", c);
          out += buf;
        } else {
          out += static_cast<char>(c);
        }
    }
  }
  out += '"';
}

void append_literals(std::string& out, const std::vector<Literal>& ls) {
  for (std::size_t i = 0; i < ls.size(); ++i) {
    if (i) out += ", ";
    out += ls[i].to_string();
  }
}

}  // namespace

std::string serialize_theory(const Theory& t) {
  std::string out = "theory " + t.name + ".\n";
  if (!t.constants.empty()) {
    out += "const ";
    bool first = true;
    for (const auto& c : t.constants) {
      if (!first) out += ", ";
      out += c;
      first = false;
    }
    out += ".\n";
  }
  for (const auto& [id, p] : t.premises) {
    out += p.is_axiom() ? "axiom " : "premise ";
    out += id + ": " + p.literal.to_string();
    std::vector<std::string> attrs;
    if (p.confidence != 1.0) attrs.push_back("confidence=" + format_number(p.confidence));
    if (p.jargon != 0.0) attrs.push_back("jargon=" + format_number(p.jargon));
    if (!p.source.empty()) {
      std::string a = "source=";
      append_escaped(a, p.source);
      attrs.push_back(std::move(a));
    }
    for (const auto& [band, text] : p.display_text) {
      std::string a = "text." + band + "=";
      append_escaped(a, text);
      attrs.push_back(std::move(a));
    }
    if (!attrs.empty()) {
      out += " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) out += (i ? ", " : "") + attrs[i];
      out += "]";
    }
    out += ".\n";
  }
  for (const auto& [id, r] : t.rules) {
    out += r.is_defeasible() ? "defeasible " : "strict ";
    out += id + ": ";
    append_literals(out, r.body);
    if (!r.body.empty()) out += ' ';
    out += r.is_defeasible() ? "=> " : "-> ";
    out += r.head.to_string();
    std::vector<std::string> attrs;
    if (r.weight != 1.0) attrs.push_back("weight=" + format_number(r.weight));
    if (r.scheme_tag) attrs.push_back("scheme=" + *r.scheme_tag);
    if (!attrs.empty()) {
      out += " [";
      for (std::size_t i = 0; i < attrs.size(); ++i) out += (i ? ", " : "") + attrs[i];
      out += "]";
    }
    out += ".\n";
  }
  for (const auto& [hi, lo] : t.preferences) out += "pref " + hi + " > " + lo + ".\n";
  return out;
}

// ---------------------------------------------------------------------------
// Grounding

const GroundRule* GroundTheory::find_rule(std::string_view ground_id) const {
  auto it = index_.find(ground_id);
  return it == index_.end() ? nullptr : &rules[it->second];
}

const Premise* GroundTheory::find_premise(std::string_view id) const {
  auto it = theory.premises.find(std::string(id));
  return it == theory.premises.end() ? nullptr : &it->second;
}

std::string_view GroundTheory::parent_of(std::string_view ground_id) const {
  const GroundRule* r = find_rule(ground_id);
  return r ? std::string_view(r->parent) : ground_id;
}

std::string ground_rule_id(std::string_view parent, const std::map<std::string, std::string>& binding) {
  std::string id(parent);
  for (const auto& [var, value] : binding) id += "__" + value;
  return id;
}

namespace {

using Binding = std::map<std::string, std::string>;

Literal substitute(const Literal& l, const Binding& b) {
  Literal out = l;
  for (auto& term : out.args) {
    if (!term.is_variable()) continue;
    term = Term::constant(b.at(term.name));
  }
  return out;
}

std::set<std::string> rule_variables(const Rule& r) {
  std::set<std::string> vars;
  auto add = [&](const Literal& l) {
    for (const auto& t : l.args)
      if (t.is_variable()) vars.insert(t.name);
  };
  for (const auto& b : r.body) add(b);
  add(r.head);
  return vars;
}

GroundRule instantiate(const Rule& r, const Binding& b) {
  GroundRule g;
  g.parent = r.id;
  g.binding = b;
  g.rule = r;
  g.rule.id = ground_rule_id(r.id, b);
  for (auto& lit : g.rule.body) lit = substitute(lit, b);
  g.rule.head = substitute(r.head, b);
  return g;
}

class InstanceSink {
 public:
  explicit InstanceSink(std::size_t cap) : cap_(cap) {}

  void add(GroundRule g) {
    if (!seen_.insert(g.rule.id).second) return;
    if (rules_.size() >= cap_) {
      throw Error(ErrorCode::LimitExceeded,
                  "grounding exceeds " + std::to_string(cap_) + " rule instances");
    }
    rules_.push_back(std::move(g));
  }
  std::vector<GroundRule> take() { return std::move(rules_); }

 private:
  std::size_t cap_;
  std::set<std::string> seen_;
  std::vector<GroundRule> rules_;
};

// Calls `fn` with every assignment of `vars` over `constants`.
void for_each_assignment(const std::vector<std::string>& vars, const std::vector<std::string>& constants,
                         Binding& current, std::size_t pos, const std::function<void(const Binding&)>& fn) {
  if (pos == vars.size()) {
    fn(current);
    return;
  }
  for (const auto& c : constants) {
    current[vars[pos]] = c;
    for_each_assignment(vars, constants, current, pos + 1, fn);
  }
  current.erase(vars[pos]);
}

void ground_by_predicate(const Theory& t, InstanceSink& sink, std::size_t cap) {
  std::set<std::string> available;
  for (const auto& [id, p] : t.premises) available.insert(p.literal.predicate);
  for (const auto& [id, r] : t.rules) available.insert(r.head.predicate);
  std::vector<std::string> constants(t.constants.begin(), t.constants.end());

  double total = 0.0;
  for (const auto& [id, r] : t.rules) {
    bool usable = std::all_of(r.body.begin(), r.body.end(),
                              [&](const Literal& l) { return available.count(l.predicate) > 0; });
    if (!usable) continue;
    total += std::pow(static_cast<double>(constants.size()),
                      static_cast<double>(rule_variables(r).size()));
  }
  if (total > static_cast<double>(cap)) {
    throw Error(ErrorCode::LimitExceeded, "grounding would produce " + format_number(total) +
                                              " rule instances (cap " + std::to_string(cap) + ")");
  }
  for (const auto& [id, r] : t.rules) {
    bool usable = std::all_of(r.body.begin(), r.body.end(),
                              [&](const Literal& l) { return available.count(l.predicate) > 0; });
    if (!usable) continue;
    auto var_set = rule_variables(r);
    std::vector<std::string> vars(var_set.begin(), var_set.end());
    Binding b;
    for_each_assignment(vars, constants, b, 0, [&](const Binding& full) { sink.add(instantiate(r, full)); });
  }
}

bool unify(const Literal& pattern, const Literal& fact, Binding& b, std::vector<std::string>& bound) {
  if (pattern.predicate != fact.predicate || pattern.negated != fact.negated ||
      pattern.args.size() != fact.args.size())
    return false;
  for (std::size_t i = 0; i < pattern.args.size(); ++i) {
    const Term& p = pattern.args[i];
    const std::string& value = fact.args[i].name;
    if (!p.is_variable()) {
      if (p.name != value) return false;
      continue;
    }
    auto it = b.find(p.name);
    if (it == b.end()) {
      b.emplace(p.name, value);
      bound.push_back(p.name);
    } else if (it->second != value) {
      return false;
    }
  }
  return true;
}

void ground_by_derivation(const Theory& t, InstanceSink& sink) {
  std::map<std::string, std::vector<Literal>> facts;  // by predicate
  std::set<Literal> known;
  auto add_fact = [&](const Literal& l) {
    if (known.insert(l).second) {
      facts[l.predicate].push_back(l);
      return true;
    }
    return false;
  };
  for (const auto& [id, p] : t.premises) add_fact(p.literal);
  std::vector<std::string> constants(t.constants.begin(), t.constants.end());
  std::set<std::string> emitted;

  bool changed = true;
  while (changed) {
    changed = false;
    for (const auto& [id, r] : t.rules) {
      auto var_set = rule_variables(r);
      std::vector<Binding> matches;
      Binding b;
      std::function<void(std::size_t)> join = [&](std::size_t i) {
        if (i == r.body.size()) {
          matches.push_back(b);
          return;
        }
        auto it = facts.find(r.body[i].predicate);
        if (it == facts.end()) return;
        for (const auto& fact : it->second) {
          std::vector<std::string> bound;
          if (unify(r.body[i], fact, b, bound)) join(i + 1);
          for (const auto& v : bound) b.erase(v);
        }
      };
      join(0);
      for (const auto& m : matches) {
        std::vector<std::string> free;
        for (const auto& v : var_set)
          if (!m.count(v)) free.push_back(v);
        Binding cur = m;
        for_each_assignment(free, constants, cur, 0, [&](const Binding& full) {
          GroundRule g = instantiate(r, full);
          if (emitted.insert(g.rule.id).second) {
            if (add_fact(g.rule.head)) changed = true;
            sink.add(std::move(g));
          }
        });
      }
    }
  }
}

}  // namespace

GroundTheory ground_theory(const Theory& t, const GroundingOptions& options) {
  GroundTheory g;
  g.theory = t;
  InstanceSink sink(options.max_instances);
  if (options.mode == GroundingMode::PredicateFilter) ground_by_predicate(t, sink, options.max_instances);
  else ground_by_derivation(t, sink);
  g.rules = sink.take();
  std::sort(g.rules.begin(), g.rules.end(),
            [](const GroundRule& a, const GroundRule& b) { return a.rule.id < b.rule.id; });
  for (std::size_t i = 0; i < g.rules.size(); ++i) g.index_.emplace(g.rules[i].rule.id, i);
  return g;
}

}  // namespace phax
