#pragma once

// JSON and text views shared by the HTTP service and the C API, so both
// surfaces print the same thing for the same request.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "phax/af.hpp"
#include "phax/aspic.hpp"
#include "phax/render.hpp"
#include "phax/schemes.hpp"

namespace phax::report {

using Json = nlohmann::ordered_json;

// Bundled profile name, inline JSON object, or path to a JSON file.
UserProfile resolve_profile(std::string_view source);

Json literal_json(const Literal& l);

Json arguments_json(const aspic::Analysis& a);
std::string arguments_text(const aspic::Analysis& a);

std::vector<af::Labelling> labellings(const af::ArgumentationFramework& af, af::Semantics s);

// Labellings over abstract argument names.
Json labellings_json(const af::ArgumentationFramework& af, const std::vector<af::Labelling>& labs,
                     af::Semantics s);
std::string labellings_text(const af::ArgumentationFramework& af, const std::vector<af::Labelling>& labs);

// Same, naming arguments by label, plus conclusion-level statuses.
Json extensions_json(const aspic::Analysis& a, af::Semantics s);
std::string extensions_text(const aspic::Analysis& a, af::Semantics s);

Json conclusions_json(const std::vector<aspic::ConclusionStatus>& statuses);
std::vector<aspic::ConclusionStatus> conclusions(const aspic::Analysis& a, af::Semantics s);

// Conclusions whose verdict differs between two statuses lists.
Json acceptance_delta(const std::vector<aspic::ConclusionStatus>& before,
                      const std::vector<aspic::ConclusionStatus>& after);

Json explanation_json(const render::Explanation& e, const aspic::Analysis& a);

Json schemes_json();

std::string check_summary(const Theory& t);

}  // namespace phax::report
