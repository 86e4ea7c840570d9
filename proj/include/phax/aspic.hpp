#pragma once

// Structured arguments over a ground theory: construction, attacks, defeats
// under last-link elitist preferences, and projection onto an abstract framework.

#include <cstddef>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "phax/af.hpp"
#include "phax/theory.hpp"

namespace phax::aspic {

struct Argument {
  std::string id;     // structural hash, stable across runs
  std::string label;  // premise id or rule id, disambiguated with "#k"
  Literal conclusion;
  std::optional<std::string> top_rule;  // ground rule id; empty for premise-arguments
  bool top_rule_defeasible = false;
  std::vector<std::string> subarguments;        // direct children, in body order
  std::set<std::string> premise_set;            // all premises used
  std::set<std::string> defeasible_rules;       // all defeasible ground rules used
  std::set<std::string> last_defeasible_rules;  // defeasible rules closest to the conclusion
  std::set<std::string> rules;                  // every ground rule used (strict or defeasible)
  double weight = 1.0;
  std::optional<std::string> scheme_tag;
  std::size_t depth = 0;  // 0 for premise-arguments

  bool is_premise_argument() const { return !top_rule.has_value(); }
};

enum class AttackKind { Rebut, Undercut, Undermine };
const char* to_string(AttackKind k);

struct Attack {
  std::string attacker;
  std::string attacked;
  AttackKind kind = AttackKind::Rebut;
  std::string target;  // subargument of `attacked` where the attack lands

  auto operator<=>(const Attack&) const = default;
};

// Arguments sorted by id, with lookup helpers.
class ArgumentSet {
 public:
  ArgumentSet() = default;
  explicit ArgumentSet(std::vector<Argument> args);

  std::size_t size() const { return args_.size(); }
  bool empty() const { return args_.empty(); }
  const std::vector<Argument>& all() const { return args_; }
  auto begin() const { return args_.begin(); }
  auto end() const { return args_.end(); }
  const Argument& operator[](std::size_t i) const { return args_[i]; }

  const Argument* find(std::string_view id) const;
  const Argument& at(std::string_view id) const;  // throws NotFound
  const Argument* find_by_label(std::string_view label) const;
  std::vector<const Argument*> concluding(const Literal& l) const;
  // Every argument id in the subtree rooted at `id`, including `id`.
  std::set<std::string> all_subarguments(std::string_view id) const;

 private:
  std::vector<Argument> args_;
  std::map<std::string, std::size_t, std::less<>> index_;
};

struct ConstructionOptions {
  std::size_t max_arguments = 50'000;
};

ArgumentSet construct_arguments(const GroundTheory& gt, const ConstructionOptions& options = {});

// Min over ordinary-premise confidences and defeasible-rule weights in `a`; 1.0 when neither exists.
double argument_weight(const Argument& a, const GroundTheory& gt);

std::vector<Attack> compute_attacks(const ArgumentSet& args, const GroundTheory& gt);

// Elitist set comparison: s1 < s2 iff some element of s1 is strictly below every element of s2.
bool elitist_less(const std::set<std::string>& s1, const std::set<std::string>& s2,
                  const PreferenceOrder& order);

struct DefeatGraph {
  ArgumentSet arguments;
  std::vector<Attack> attacks;
  std::vector<std::pair<std::string, std::string>> defeats;  // sorted, unique

  bool defeats_pair(std::string_view from, std::string_view to) const;
  std::vector<std::string> defeaters_of(std::string_view id) const;
};

bool attack_succeeds(const Attack& attack, const ArgumentSet& args, const GroundTheory& gt,
                     const PreferenceOrder& order);

DefeatGraph resolve_defeats(ArgumentSet args, std::vector<Attack> attacks, const GroundTheory& gt);
DefeatGraph resolve_defeats(ArgumentSet args, std::vector<Attack> attacks, const GroundTheory& gt,
                            const std::set<PreferencePair>& preferences);

struct Projection {
  af::ArgumentationFramework af;
  // AF argument index -> position in DefeatGraph::arguments. Both sides are id-sorted,
  // so this is the identity permutation; kept explicit for callers.
  std::vector<std::size_t> to_argument;
};

Projection project_af(const DefeatGraph& dg);

// ---------------------------------------------------------------------------
// Whole-pipeline convenience

struct AnalysisOptions {
  GroundingOptions grounding{100'000, GroundingMode::Derivable};
  ConstructionOptions construction;
};

struct Analysis {
  Theory theory;
  GroundTheory ground;
  DefeatGraph graph;
  Projection projection;
};

Analysis analyze(const Theory& t, const AnalysisOptions& options = {});

enum class Status { Accepted, Undecided, Rejected, Absent };
const char* to_string(Status s);

struct ConclusionStatus {
  Literal conclusion;
  Status status = Status::Absent;  // best label of any argument for it
  bool skeptical = false;          // in every labelling some argument for it is IN
  bool credulous = false;          // in some labelling some argument for it is IN
};

// Conclusion-level acceptance of `l` given labellings of the projected framework.
ConclusionStatus conclusion_status(const Analysis& a, const std::vector<af::Labelling>& labellings,
                                   const Literal& l);
// Every distinct conclusion, sorted by literal text.
std::vector<ConclusionStatus> all_conclusion_statuses(const Analysis& a,
                                                      const std::vector<af::Labelling>& labellings);

// Argument forest as JSON text: [{id, label, conclusion, subarguments, weight, ...}]
std::string arguments_to_json(const ArgumentSet& args);
std::string defeat_graph_to_dot(const DefeatGraph& dg);

}  // namespace phax::aspic
