#include <doctest.h>

#include "oracles.hpp"
#include "phax/parser.hpp"
#include "util.hpp"

using namespace phax;

namespace {

bool rejects(const std::string& src, const std::string& needle) {
  auto r = parse_theory(src);
  if (r.ok()) return false;
  for (const auto& d : r.diagnostics)
    if (d.message.find(needle) != std::string::npos) return true;
  INFO(r.format_diagnostics("t"));
  return false;
}

}  // namespace

TEST_CASE("literals print and parse back") {
  auto l = parse_literal("~prefer(heart_attack)");
  REQUIRE(l);
  CHECK(l->negated);
  CHECK(l->to_string() == "~prefer(heart_attack)");
  CHECK(parse_literal("~~p(a)")->negated == false);
  CHECK(parse_literal("rain")->arity() == 0);
  CHECK_FALSE(parse_literal("p(a"));
  CHECK(Literal::ground("q", {"a", "b"}).is_ground());
  CHECK_FALSE(parse_literal("q(X)")->is_ground());
}

TEST_CASE("the simplification fixture parses with the expected shape") {
  Theory t = fixture("simplification.phax");
  CHECK(t.name == "simplification");
  CHECK(t.premises.size() == 3);
  CHECK(t.rules.size() == 2);
  CHECK(t.premises.at("p3").jargon == doctest::Approx(0.2));
  CHECK(t.premises.at("p1").source == "layperson corpus counts");
  CHECK(t.rules.at("r2").weight == doctest::Approx(0.9));
  CHECK(t.preferences == std::set<PreferencePair>{{"r2", "r1"}});
  CHECK(oracle::invariant_violations(t).empty());
}

TEST_CASE("diagnostics carry positions") {
  auto r = parse_theory("theory x.\npremise p1: q(a) [confidence=1.5].\n");
  REQUIRE_FALSE(r.ok());
  CHECK(r.diagnostics.front().line == 2);
  CHECK(r.format_diagnostics("f.phax").find("f.phax:2:") == 0);
}

TEST_CASE("validation rejects broken theories") {
  CHECK(rejects("premise p1: q(a) [confidence=1.5].", "confidence"));
  CHECK(rejects("premise p1: q(a) [jargon=-0.1].", "number"));
  CHECK(rejects("premise p1: q(a) [jargon=1.1].", "jargon"));
  CHECK(rejects("axiom a1: q(a) [confidence=0.5].", "axiom"));
  CHECK(rejects("premise p1: q(X).", "ground"));
  CHECK(rejects("premise p1: q(a).\npremise p2: q(a, b).", "arity"));
  CHECK(rejects("premise p1: q(a).\ndefeasible p1: q(a) => t.", "p1"));
  CHECK(rejects("strict s1: q(a) -> t [weight=0.5].", "weight"));
  CHECK(rejects("premise p1: q.\ndefeasible r1: q => t.\npref r1 > r1.", "cycle"));
  CHECK(rejects("premise p1: q.\ndefeasible r1: q => t.\ndefeasible r2: q => u.\npref r1 > r2.\npref r2 > r1.", "cycle"));
  CHECK(rejects("premise p1: q.\npref p1 > nobody.", "nobody"));
  CHECK(rejects("axiom a1: q.\ndefeasible r1: q => t.\npref r1 > a1.", "axiom"));
  CHECK(rejects("premise p1: q [text.alien=\"x\"].", "alien"));
  CHECK(rejects("premise p1: applicable(a, b).", "applicable"));
  CHECK(parse_theory("").ok());
}

TEST_CASE("scheme tags must be identifiers") {
  Theory t = parse_theory_or_throw("premise p: q.\ndefeasible r1: q => t [scheme=analogy].");
  CHECK_FALSE(has_errors(validate_theory(t)));
  t.rules.at("r1").scheme_tag = "not valid";
  CHECK(has_errors(validate_theory(t)));
}

TEST_CASE("every shipped theory round-trips") {
  for (const auto& e : std::filesystem::directory_iterator(kFixtures)) {
    if (e.path().extension() != ".phax") continue;
    CAPTURE(e.path());
    Theory t = fixture(e.path().filename().string());
    auto again = parse_theory(serialize_theory(t));
    REQUIRE(again.ok());
    CHECK(*again.theory == t);
  }
}

TEST_CASE("numbers keep their shortest form") {
  CHECK(format_number(0.95) == "0.95");
  CHECK(format_number(1.0) == "1");
  CHECK(format_number(0.1 + 0.2) == "0.30000000000000004");
}

TEST_CASE("preference order is transitive and strict") {
  PreferenceOrder o({{"a", "b"}, {"b", "c"}});
  CHECK(o.less("c", "a"));
  CHECK(o.less("b", "a"));
  CHECK_FALSE(o.less("a", "c"));
  CHECK_FALSE(o.less("a", "a"));
  CHECK(preference_cycles({{"a", "b"}, {"b", "a"}, {"c", "c"}}).size() == 2);
}

TEST_CASE("grounding instantiates over declared constants") {
  Theory t = parse_theory_or_throw(
      "const a, b, c.\n"
      "premise p1: q(a, b).\n"
      "defeasible r1: q(X, Y) => t(Y, X).\n");
  // Predicate filter keeps every substitution of the body predicate: 3 x 3.
  auto pf = ground_theory(t);
  CHECK(pf.rules.size() == 9);
  std::size_t expected = t.constants.size() * t.constants.size();
  CHECK(pf.rules.size() == expected);
  // Derivable mode keeps only the instance whose body holds.
  auto dv = ground_theory(t, {100, GroundingMode::Derivable});
  REQUIRE(dv.rules.size() == 1);
  CHECK(dv.rules[0].rule.head.to_string() == "t(b,a)");
  CHECK(dv.rules[0].parent == "r1");
  CHECK(dv.parent_of(dv.rules[0].rule.id) == "r1");

  try {
    ground_theory(t, {4, GroundingMode::PredicateFilter});
    FAIL("expected limit");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::LimitExceeded);
  }
}

TEST_CASE("predicate-filter instance counts match brute-force substitution counts") {
  // Body predicates present: |constants|^|variables| instances; a missing body predicate: none.
  const std::vector<std::string> consts = {"c1", "c2", "c3", "c4"};
  for (std::size_t nc = 1; nc <= 4; ++nc) {
    for (std::size_t nv = 0; nv <= 3; ++nv) {
      for (bool present : {true, false}) {
        std::string src = "const";
        for (std::size_t i = 0; i < nc; ++i) src += (i ? ", " : " ") + consts[i];
        src += ".\n";
        if (present) src += "premise p: b.\n";
        std::string args;
        for (std::size_t v = 0; v < nv; ++v) args += (v ? "," : "") + std::string(1, static_cast<char>('X' + v));
        std::string head = nv ? "h(" + args + ")" : "h";
        std::string body = nv ? "b, u(" + args + ")" : "b";
        // Rule g only makes u a known head predicate of the right arity.
        std::string u_args;
        for (std::size_t v = 0; v < nv; ++v) u_args += (v ? "," : "") + consts[0];
        src += "defeasible g: b => " + (nv ? "u(" + u_args + ")" : std::string("u")) + ".\n";
        src += "defeasible r: " + body + " => " + head + ".\n";
        CAPTURE(src);
        auto t = parse_theory_or_throw(src);
        auto gt = ground_theory(t);
        std::size_t expected = 0;
        std::size_t subs = 1;
        for (std::size_t v = 0; v < nv; ++v) subs *= nc;
        if (present) expected = subs;
        std::size_t got = 0;
        for (const auto& g : gt.rules) {
          CHECK(g.rule.head.is_ground());
          for (const auto& b : g.rule.body) CHECK(b.is_ground());
          if (g.parent == "r") ++got;
        }
        CHECK(got == expected);
      }
    }
  }
}

TEST_CASE("practical reasoning over one goal and two actions") {
  Theory t = parse_theory_or_throw(
      "premise g: goal(safety).\npremise a1: action(masking).\npremise a2: action(lockdown).\n"
      "premise m1: promotes(masking, safety).\npremise m2: promotes(lockdown, safety).\n"
      "defeasible pr: goal(G), action(A), promotes(A, G) => do(A).\n");
  CHECK(ground_theory(t, {100, GroundingMode::Derivable}).rules.size() == 2);
  // The predicate filter keeps every substitution over the three constants.
  CHECK(ground_theory(t).rules.size() == 9);
}
