#include <doctest.h>

#include <regex>

#include "phax/render.hpp"
#include "util.hpp"

using namespace phax;
using namespace phax::render;

namespace {

const std::string kTarget = "prioritize(vaccine,risk_group)";

Explanation vaccine_for(const std::string& profile, Format f = Format::Text) {
  static const auto a = aspic::analyze(fixture("vaccine.phax"));
  ExplainOptions o;
  o.format = f;
  return explain(a, kTarget, *find_bundled_profile(profile), o);
}

}  // namespace

TEST_CASE("humanize") {
  CHECK(humanize(lit("believe(vaccinate_group)")) == "vaccinate_group");
  CHECK(humanize(lit("~prefer(heart_attack)")) == "not prefer(heart_attack)");
  CHECK(humanize(lit("q(a,b)")) == "q(a,b)");
}

TEST_CASE("band selects the premise sentence") {
  CHECK(vaccine_for("patient").rendered.claim == kTarget);
  CHECK(vaccine_for("patient").rendered.body.find("helped many people like you stay safe") != std::string::npos);
  CHECK(vaccine_for("clinician").rendered.body.find("92% efficacy") != std::string::npos);
  CHECK(vaccine_for("policymaker").rendered.body.find("overloading ICUs by 45%") != std::string::npos);
}

TEST_CASE("lay output carries no numbers beyond the display text; professional shows sigma") {
  std::string lay = vaccine_for("patient").rendered.body;
  CHECK_FALSE(std::regex_search(lay, std::regex("0\\.[0-9]")));
  std::string pro = vaccine_for("clinician").rendered.body;
  CHECK(std::regex_search(pro, std::regex("Sufficiency: [01]\\.[0-9]{2}")));
  CHECK(pro.find("confidence 0.95") != std::string::npos);
}

TEST_CASE("the full vaccine tree is selected") {
  auto e = vaccine_for("clinician");
  CHECK(e.full.size() == 3);
  CHECK(e.selection.node_ids.size() == 3);
  CHECK(e.selection.sigma_full == doctest::Approx(0.85 * (1 - 0.5 * (1 - 0.8))));
  CHECK(e.rendered.challenges.size() == 2);
}

TEST_CASE("markdown and dot") {
  auto md = vaccine_for("policymaker", Format::Markdown).rendered.body;
  CHECK(md.rfind("## Claim: ", 0) == 0);
  auto dot = vaccine_for("clinician", Format::Dot).rendered.body;
  CHECK(dot.rfind("digraph", 0) == 0);
  CHECK(parse_format("md") == Format::Markdown);
  CHECK_FALSE(parse_format("pdf"));
}

TEST_CASE("scheme phrasing when no display text exists") {
  auto inst = parse_theory_or_throw(
      "premise a: goal(safety).\npremise b: action(masking).\npremise c: promotes(masking, safety).\n"
      "defeasible r: goal(G), action(A), promotes(A, G) => do(A) [scheme=practical_reasoning].\n");
  auto an = aspic::analyze(inst);
  UserProfile u = *find_bundled_profile("policymaker");
  u.preferred_schemes = {"practical_reasoning"};
  auto s = render_argument(*an.graph.arguments.find_by_label("r"), u, an.ground);
  CHECK(s.text == "To achieve safety, masking is the recommended action.");
  u.preferred_schemes.clear();
  s = render_argument(*an.graph.arguments.find_by_label("r"), u, an.ground);
  CHECK(s.text == "It follows that: masking.");
}

TEST_CASE("target resolution") {
  auto a = aspic::analyze(fixture("simplification.phax"));
  auto r2 = a.graph.arguments.find_by_label("r2")->id;
  CHECK(resolve_target(a, r2) == r2);
  CHECK(resolve_target(a, "r2") == r2);
  CHECK(resolve_target(a, "~prefer(heart_attack)") == r2);
  CHECK_THROWS_AS(resolve_target(a, "missing(x)"), Error);
}
