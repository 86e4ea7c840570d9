#include <doctest.h>

#include "phax/aspic.hpp"
#include "phax/schemes.hpp"
#include "util.hpp"

using namespace phax;
using namespace phax::schemes;

TEST_CASE("six schemes, each with questions and templates for every band") {
  CHECK(builtin_schemes().size() == 6);
  for (const auto& s : builtin_schemes()) {
    CAPTURE(s.id);
    CHECK(!s.critical_questions.empty());
    CHECK(s.audience_templates.size() == 3);
    std::set<std::string> vars(s.variables.begin(), s.variables.end());
    auto covered = [&](const Literal& l) {
      for (const auto& a : l.args)
        if (a.is_variable() && !vars.count(a.name)) return false;
      return true;
    };
    for (const auto& p : s.premise_templates) CHECK(covered(p));
    CHECK(covered(s.conclusion_template));
    for (const auto& v : s.variables) CHECK(s.example_bindings.count(v));
  }
  CHECK(find_scheme("nope") == nullptr);
}

TEST_CASE("expert opinion instance") {
  Bindings b{{"E", "who"}, {"D", "immunization"}, {"P", "vaccinate_group"}};
  auto inst = instantiate_scheme(Theory{}, "expert_opinion", b, 0.8);
  const Theory& t = inst.theory;
  CHECK(t.premises.size() == 3);
  const Rule& r = t.rules.at(inst.instance.rule_id);
  CHECK(r.head.to_string() == "believe(vaccinate_group)");
  CHECK(r.scheme_tag == "expert_opinion");
  CHECK(r.body[0].to_string() == "is_expert(who,immunization)");
  for (const auto& id : inst.instance.premise_ids) CHECK(t.premises.at(id).confidence == doctest::Approx(0.8));
  CHECK(t.constants.count("who"));

  auto again = instantiate_scheme(t, "expert_opinion", b, 0.8);
  CHECK(again.theory == t);

  auto found = find_instance(t, inst.instance.rule_id);
  REQUIRE(found);
  CHECK(found->bindings == b);
  CHECK(match_scheme(*find_scheme("expert_opinion"), r) == b);
}

TEST_CASE("instantiation errors") {
  CHECK_THROWS_AS(instantiate_scheme(Theory{}, "nope", {}), Error);
  CHECK_THROWS_AS(instantiate_scheme(Theory{}, "cause_to_effect", {{"A", "masking"}}), Error);
  CHECK_THROWS_AS(instantiate_scheme(Theory{}, "cause_to_effect", {{"A", "Bad"}, {"E", "x"}}), Error);
}

TEST_CASE("instantiation is monotone") {
  Theory base = fixture("simplification.phax");
  auto before = aspic::analyze(base);
  auto inst = instantiate_scheme(base, "analogy", find_scheme("analogy")->example_bindings);
  auto after = aspic::analyze(inst.theory);
  for (const auto& a : before.graph.arguments) CHECK(after.graph.arguments.find(a.id) != nullptr);
}

TEST_CASE("critical questions undercut the instance") {
  auto inst = instantiate_scheme(Theory{}, "cause_to_effect", {{"A", "masking"}, {"E", "reduced_transmission"}});
  Theory posed = apply_critical_question(inst.theory, inst.instance, "confounders", 0.3);
  std::string uid = undercutter_id(inst.instance, "confounders");
  REQUIRE(posed.premises.count(uid));
  CHECK(posed.premises.at(uid).literal == applicable_literal(inst.instance.rule_id, true));
  CHECK(posed.premises.at(uid).confidence == doctest::Approx(0.3));
  for (const auto& [id, p] : inst.theory.premises) CHECK(posed.premises.at(id) == p);
  CHECK_THROWS_AS(apply_critical_question(inst.theory, inst.instance, "nope", 0.3), Error);
  CHECK_THROWS_AS(apply_critical_question(Theory{}, inst.instance, "confounders", 0.3), Error);
}

TEST_CASE("templates fill with spaces for underscores") {
  CHECK(fill_template("{A} helps bring about {E}.", {{"A", "masking"}, {"E", "reduced_transmission"}}) ==
        "masking helps bring about reduced transmission.");
}

TEST_CASE("study ingestion") {
  auto csv = studies_from_csv(slurp(kFixtures / "pico_studies.csv"));
  REQUIRE(csv.size() == 2);
  CHECK(csv[0].population == "adults over 65");
  CHECK(csv[0].outcome_observed);
  CHECK_FALSE(csv[1].outcome_observed);
  CHECK(csv[1].sample_size == 300);
  CHECK(to_constant("Adults over 65") == "adults_over_65");
  CHECK_THROWS_AS(studies_from_csv("id,population\ns1,x\n"), Error);
  CHECK_THROWS_AS(studies_from_json("[{\"id\":\"s\"}]"), Error);

  Theory t = encode_study(csv[0]);
  CHECK(t.premises.size() == 4);
  const Rule& r = t.rules.at(study_rule_id(csv[0]));
  CHECK(r.head.to_string() == "recommend(influenza_vaccine,adults_over_65)");
  CHECK(encode_study(csv[1]).rules.begin()->second.head.negated);
}

TEST_CASE("study preference") {
  StudyRecord a{"a", "p", "i", "c", true, 0.9, 100};
  StudyRecord b{"b", "p", "i", "c", false, 0.6, 1000};
  CHECK(study_preference(a, b) == StudyOrder::FirstPreferred);
  b.credibility = 0.9;
  CHECK(study_preference(a, b) == StudyOrder::SecondPreferred);
  a.sample_size = 500;
  b.sample_size = 200;
  CHECK(study_preference(a, b) == StudyOrder::FirstPreferred);
  b.sample_size = 500;
  CHECK(study_preference(a, b) == StudyOrder::Incomparable);
  a.credibility = 1.5;
  CHECK_THROWS_AS(validate_study(a), Error);
}
