#pragma once

// Argumentation schemes with critical questions, and PICO study encoding.

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phax/profile.hpp"
#include "phax/theory.hpp"

namespace phax::schemes {

using Bindings = std::map<std::string, std::string>;  // variable -> constant

struct CriticalQuestion {
  std::string id;
  std::string text;  // "{E}"-style placeholders refer to scheme variables
};

struct Scheme {
  std::string id;
  std::string title;
  std::string description;
  std::vector<std::string> variables;
  std::vector<Literal> premise_templates;
  Literal conclusion_template;
  std::vector<CriticalQuestion> critical_questions;
  std::map<Band, std::string> audience_templates;  // phrasing of the conclusion per band
  std::string example_text;                        // illustrative sentence
  Bindings example_bindings;

  const CriticalQuestion* find_question(std::string_view cq) const;
};

// expert_opinion, cause_to_effect, practical_reasoning, analogy,
// statistical_generalization, ethical_value
const std::vector<Scheme>& builtin_schemes();
const Scheme* find_scheme(std::string_view id);

struct SchemeInstance {
  std::string scheme;
  Bindings bindings;
  std::vector<std::string> premise_ids;
  std::string rule_id;
  double confidence = 1.0;
};

struct Instantiation {
  Theory theory;
  SchemeInstance instance;
};

// Adds the instance's ordinary premises (at `confidence`) and its defeasible rule
// (tagged with the scheme id). Re-instantiating identical bindings is a no-op.
// Throws InvalidArgument on unknown scheme, incomplete bindings or bad constants.
Instantiation instantiate_scheme(const Theory& t, std::string_view scheme, const Bindings& bindings,
                                 double confidence = 1.0);

std::string instance_rule_id(const Scheme& s, const Bindings& bindings);

// Recovers a scheme instance from a tagged rule already present in `t`.
std::optional<SchemeInstance> find_instance(const Theory& t, std::string_view rule_id);

// Matches a ground rule against the scheme's templates.
std::optional<Bindings> match_scheme(const Scheme& s, const Rule& ground_rule);

std::string undercutter_id(const SchemeInstance& inst, std::string_view cq);

// Adds an ordinary premise ~applicable(<instance rule>) at `evidence_confidence`.
// Throws NotFound for an unknown critical question or an instance missing from `t`.
Theory apply_critical_question(const Theory& t, const SchemeInstance& inst, std::string_view cq,
                               double evidence_confidence);

// Replaces {Var} placeholders with bound constants (underscores become spaces).
std::string fill_template(std::string_view text, const Bindings& bindings);

// ---------------------------------------------------------------------------
// PICO

struct StudyRecord {
  std::string id;
  std::string population;
  std::string intervention;
  std::string comparison;  // ingested, not used in reasoning
  bool outcome_observed = true;
  double credibility = 1.0;
  std::uint64_t sample_size = 1;
};

void validate_study(const StudyRecord& r);

// Lowercases and maps runs of other characters to '_' so labels become constants.
std::string to_constant(std::string_view label);

std::string study_rule_id(const StudyRecord& r);

// Premises P1..P4 (population, intervention, signed outcome, credibility) and a
// defeasible rule concluding recommend(I,P), or its negation for a negative outcome.
Theory encode_study(const StudyRecord& r);

// Merges `fragment` into `t`; throws Parse-coded Error if the result is invalid.
Theory merge_theories(const Theory& t, const Theory& fragment);

enum class StudyOrder { FirstPreferred, SecondPreferred, Incomparable };
const char* to_string(StudyOrder o);

// Higher credibility wins; ties broken by larger sample size; full tie is incomparable.
StudyOrder study_preference(const StudyRecord& a, const StudyRecord& b);

// Adds the preference between the two studies' rules implied by study_preference.
Theory apply_study_preference(const Theory& t, const StudyRecord& a, const StudyRecord& b);

// Columns: id, population, intervention, comparison, outcome, credibility, sample_size.
// `outcome` accepts positive/negative, observed/not_observed, yes/no, true/false, 1/0, +/-.
std::vector<StudyRecord> studies_from_csv(std::string_view csv);
std::vector<StudyRecord> studies_from_json(std::string_view json);

}  // namespace phax::schemes
