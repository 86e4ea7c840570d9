#pragma once

// Recursive-descent parser for the .phax theory format.
//
//   % comment to end of line
//   theory simplification.
//   const heart_attack, myocardial_infarction.
//   axiom a1: eligible(patient).
//   premise p3: ambiguity(heart_attack, clinical) [confidence=0.6, jargon=0.2,
//                                                  source="NLI", text.lay="..."].
//   strict s1: eligible(X) -> candidate(X).
//   defeasible r2: ambiguity(Y, clinical) => ~prefer(Y) [weight=0.9, scheme=analogy].
//   pref r2 > r1.
//
// Repeated `~` toggles polarity. A defeasible rule may have an empty body
// ("defeasible r0: => p.").

#include <string>
#include <string_view>
#include <optional>
#include <vector>

#include "phax/theory.hpp"

namespace phax {

struct ParseResult {
  std::optional<Theory> theory;       // set iff no error diagnostics
  std::vector<Diagnostic> diagnostics;

  bool ok() const { return theory.has_value(); }
  std::string format_diagnostics(std::string_view file) const;
};

// Syntax, arity, duplicate-id and full invariant checks. Never throws on bad input.
ParseResult parse_theory(std::string_view source);

// Throws Error(Parse) carrying the formatted diagnostics.
Theory parse_theory_or_throw(std::string_view source, std::string_view file = "<input>");

// Parses a single literal such as "~prefer(heart_attack)".
std::optional<Literal> parse_literal(std::string_view text);

}  // namespace phax
