#pragma once

// Audience-adapted rendering of explanations, plus the end-to-end explain pipeline.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "phax/adapt.hpp"
#include "phax/af.hpp"
#include "phax/aspic.hpp"
#include "phax/profile.hpp"

namespace phax::render {

enum class Format { Text, Markdown, Dot };
const char* to_string(Format f);
std::optional<Format> parse_format(std::string_view name);

struct Sentence {
  std::string text;
  std::string annotation;  // weights and premises; filled for the professional band only
};

// "believe(vaccinate_group)" -> "vaccinate_group"; negations read "not p(..)"; other
// atoms keep their literal form.
std::string humanize(const Literal& l);

// Premise display text for the profile band when present, else a scheme phrasing the
// profile prefers, else a generic template.
Sentence render_argument(const aspic::Argument& a, const UserProfile& u, const GroundTheory& gt);

struct RenderedExplanation {
  Format format = Format::Text;
  std::string body;
  std::string claim;
  std::vector<std::string> supports;
  std::vector<std::string> challenges;
};

// Throws InvalidArgument when the selection's subtree is empty.
RenderedExplanation render_explanation(const adapt::ExplanationSelection& sel, const aspic::Analysis& analysis,
                                       const UserProfile& u, Format format);

std::string render_af_dot(const af::ArgumentationFramework& af, const af::Labelling& lab);

// ---------------------------------------------------------------------------

struct ExplainOptions {
  adapt::UtilityWeights weights;
  adapt::SelectionOptions selection;
  std::size_t max_depth = 6;
  Format format = Format::Text;
};

struct Explanation {
  std::string root;  // argument id
  adapt::DisputeTree full;
  adapt::ExplanationSelection selection;
  RenderedExplanation rendered;
};

// Resolves `target` (argument id, argument label or literal) to a root argument.
// For a literal the argument with the strongest full dispute tree wins, ties by id.
// Throws NotFound when nothing matches.
std::string resolve_target(const aspic::Analysis& analysis, std::string_view target, std::size_t max_depth = 6);

Explanation explain(const aspic::Analysis& analysis, std::string_view target, const UserProfile& u,
                    const ExplainOptions& options = {});

}  // namespace phax::render
