#pragma once

// Defeasible theories: terms, literals, premises, rules and the preference
// order over them, plus validation, canonical serialization and grounding.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phax/error.hpp"

namespace phax {

struct Term {
  enum class Kind { Constant, Variable };

  Kind kind = Kind::Constant;
  std::string name;

  static Term constant(std::string name) { return {Kind::Constant, std::move(name)}; }
  static Term variable(std::string name) { return {Kind::Variable, std::move(name)}; }

  bool is_variable() const { return kind == Kind::Variable; }

  auto operator<=>(const Term&) const = default;
};

// Variables start with an uppercase letter or underscore.
bool is_variable_name(std::string_view name);
bool is_identifier(std::string_view name);
bool is_constant_name(std::string_view name);

struct Literal {
  std::string predicate;
  std::vector<Term> args;
  bool negated = false;

  Literal() = default;
  Literal(std::string predicate, std::vector<Term> args, bool negated = false)
      : predicate(std::move(predicate)), args(std::move(args)), negated(negated) {}

  // Builds a literal whose arguments are all constants.
  static Literal ground(std::string predicate, std::vector<std::string> constants,
                        bool negated = false);

  Literal contrary() const {
    Literal l = *this;
    l.negated = !l.negated;
    return l;
  }
  bool is_ground() const;
  std::size_t arity() const { return args.size(); }

  // "~pred(a,B)"; zero-arity atoms print without parentheses.
  std::string to_string() const;

  auto operator<=>(const Literal&) const = default;
};

// Predicate used for undercutting: ~applicable(r) attacks uses of rule r.
inline constexpr std::string_view kApplicablePredicate = "applicable";

Literal applicable_literal(std::string_view rule_id, bool negated);

enum class RuleKind { Strict, Defeasible };
enum class PremiseKind { Axiom, Ordinary };

struct Rule {
  std::string id;
  RuleKind kind = RuleKind::Defeasible;
  std::vector<Literal> body;
  Literal head;
  double weight = 1.0;
  std::optional<std::string> scheme_tag;

  bool is_defeasible() const { return kind == RuleKind::Defeasible; }
  bool operator==(const Rule&) const = default;
};

struct Premise {
  std::string id;
  Literal literal;
  PremiseKind kind = PremiseKind::Ordinary;
  double confidence = 1.0;
  double jargon = 0.0;
  std::string source;
  // Audience sentence keyed by profile band name (lay, decision_maker, professional).
  std::map<std::string, std::string> display_text;

  bool is_axiom() const { return kind == PremiseKind::Axiom; }
  bool operator==(const Premise&) const = default;
};

// (preferred, less preferred)
using PreferencePair = std::pair<std::string, std::string>;

struct Theory {
  std::string name = "untitled";
  std::set<std::string> constants;
  std::map<std::string, Premise> premises;
  std::map<std::string, Rule> rules;
  std::set<PreferencePair> preferences;

  bool empty() const { return premises.empty() && rules.empty() && preferences.empty(); }

  // Adds every constant mentioned by a premise or rule to `constants`.
  void collect_constants();

  bool operator==(const Theory&) const = default;
};

enum class Severity { Error, Warning, Note };

struct Diagnostic {
  Severity severity = Severity::Error;
  std::string message;
  std::vector<std::string> ids;  // offending element ids, if any
  std::size_t line = 0;          // 1-based; 0 when unknown
  std::size_t column = 0;

  // "file:line:col: severity: message"
  std::string format(std::string_view file) const;
};

const char* to_string(Severity s);

std::vector<Diagnostic> validate_theory(const Theory& t);
bool has_errors(const std::vector<Diagnostic>& diags);

// Canonical text: header, constants, premises, rules, preferences; blocks sorted by id.
std::string serialize_theory(const Theory& t);

// Shortest round-trippable decimal form.
std::string format_number(double v);

// Strict partial order induced by the theory's preference pairs (transitively closed).
class PreferenceOrder {
 public:
  PreferenceOrder() = default;
  explicit PreferenceOrder(const std::set<PreferencePair>& pairs);

  // True iff `lower` is strictly less preferred than `higher`.
  bool less(std::string_view lower, std::string_view higher) const;
  bool empty() const { return above_.empty(); }

 private:
  std::map<std::string, std::set<std::string>, std::less<>> above_;
};

// Sorted ids of every non-trivial strongly connected component of the preference graph.
std::vector<std::vector<std::string>> preference_cycles(const std::set<PreferencePair>& pairs);

// ---------------------------------------------------------------------------
// Grounding

struct GroundRule {
  Rule rule;           // variable-free; id = parent id plus substitution suffix
  std::string parent;  // id of the rule it was instantiated from
  std::map<std::string, std::string> binding;
};

enum class GroundingMode {
  // Every substitution over the declared constants, kept when each body predicate
  // occurs among premise or rule-head predicates.
  PredicateFilter,
  // Only substitutions whose body literals are all derivable by forward chaining.
  Derivable,
};

struct GroundingOptions {
  std::size_t max_instances = 100'000;
  GroundingMode mode = GroundingMode::PredicateFilter;
};

struct GroundTheory {
  Theory theory;  // premises, constants and preferences of the source theory
  std::vector<GroundRule> rules;  // sorted by id

  const GroundRule* find_rule(std::string_view ground_id) const;
  const Premise* find_premise(std::string_view id) const;
  // Parent id of a ground rule; the id itself when unknown.
  std::string_view parent_of(std::string_view ground_id) const;

 private:
  friend GroundTheory ground_theory(const Theory&, const GroundingOptions&);
  std::map<std::string, std::size_t, std::less<>> index_;
};

std::string ground_rule_id(std::string_view parent, const std::map<std::string, std::string>& binding);

GroundTheory ground_theory(const Theory& t, const GroundingOptions& options = {});

}  // namespace phax
