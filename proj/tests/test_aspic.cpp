#include <doctest.h>

#include "oracles.hpp"
#include "phax/aspic.hpp"
#include "util.hpp"

using namespace phax;
using namespace phax::aspic;

namespace {

Analysis run(const std::string& src) { return analyze(parse_theory_or_throw(src)); }

std::set<std::string> shapes(const Analysis& a) {
  std::set<std::string> s;
  for (const auto& arg : a.graph.arguments) s.insert(oracle::shape(a.graph.arguments, arg));
  return s;
}

bool has_attack(const Analysis& a, const std::string& from, const std::string& to, AttackKind k) {
  const auto* x = a.graph.arguments.find_by_label(from);
  const auto* y = a.graph.arguments.find_by_label(to);
  REQUIRE(x);
  REQUIRE(y);
  for (const auto& at : a.graph.attacks)
    if (at.attacker == x->id && at.attacked == y->id && at.kind == k) return true;
  return false;
}

bool defeats(const Analysis& a, const std::string& from, const std::string& to) {
  return a.graph.defeats_pair(a.graph.arguments.find_by_label(from)->id, a.graph.arguments.find_by_label(to)->id);
}

}  // namespace

TEST_CASE("argument sets match the brute-force generator") {
  for (const char* f : {"simplification.phax", "vaccine.phax", "dung_example.phax"}) {
    CAPTURE(f);
    auto a = analyze(fixture(f));
    CHECK(shapes(a) == oracle::brute_force_arguments(a.ground));
  }
  auto a = run(
      "premise p: a.\npremise q: b.\n"
      "defeasible r1: a => c.\ndefeasible r2: b => c.\n"
      "defeasible r3: c, c => d.\n"
      "strict s1: d -> a.\n");
  CHECK(shapes(a) == oracle::brute_force_arguments(a.ground));
  // d can use either argument for c in each body slot: 4 combinations.
  CHECK(a.graph.arguments.concluding(lit("d")).size() == 4);
}

TEST_CASE("weights take the minimum over premises and defeasible rules") {
  auto a = run("premise p: a [confidence=0.9].\ndefeasible r: a => b [weight=0.8].\nstrict s: b -> c.");
  CHECK(a.graph.arguments.find_by_label("r")->weight == doctest::Approx(0.8));
  CHECK(a.graph.arguments.find_by_label("s")->weight == doctest::Approx(0.8));
  auto ax = run("axiom x: a.\nstrict s: a -> b.");
  CHECK(ax.graph.arguments.find_by_label("s")->weight == 1.0);
}

TEST_CASE("ids are stable structural hashes") {
  auto a = analyze(fixture("simplification.phax"));
  auto b = analyze(fixture("simplification.phax"));
  for (std::size_t i = 0; i < a.graph.arguments.size(); ++i) CHECK(a.graph.arguments[i].id == b.graph.arguments[i].id);
}

TEST_CASE("rebut only targets defeasible conclusions") {
  auto a = run("axiom x: a.\nstrict s: a -> b.\npremise p: c.\ndefeasible r: c => ~b.");
  CHECK(has_attack(a, "s", "r", AttackKind::Rebut));
  CHECK_FALSE(has_attack(a, "r", "s", AttackKind::Rebut));
}

TEST_CASE("undermine hits ordinary premises but never axioms") {
  auto a = run("premise p: a.\naxiom x: c.\npremise q: ~a.\npremise z: ~c.");
  CHECK(has_attack(a, "q", "p", AttackKind::Undermine));
  CHECK_FALSE(has_attack(a, "z", "x", AttackKind::Undermine));
}

TEST_CASE("undercut always succeeds") {
  auto a = run(
      "premise p: a [confidence=1.0].\ndefeasible r: a => b.\n"
      "premise u: ~applicable(r) [confidence=0.1].\npref p > u.");
  CHECK(has_attack(a, "u", "r", AttackKind::Undercut));
  CHECK(defeats(a, "u", "r"));
}

TEST_CASE("last-link preferences decide rebuttals") {
  auto a = analyze(fixture("simplification.phax"));
  CHECK(defeats(a, "r2", "r1"));
  CHECK_FALSE(defeats(a, "r1", "r2"));
  auto b = analyze(fixture("simplification_nopref.phax"));
  CHECK(defeats(b, "r2", "r1"));
  CHECK(defeats(b, "r1", "r2"));
}

TEST_CASE("elitist comparison") {
  PreferenceOrder o({{"a", "b"}, {"a", "c"}});
  CHECK(elitist_less({"b"}, {"a"}, o));
  CHECK(elitist_less({"b", "a"}, {"a"}, o));
  CHECK_FALSE(elitist_less({"a"}, {"b"}, o));
  CHECK_FALSE(elitist_less({}, {"a"}, o));
  // A nonempty set is below the empty one; the empty set is below nothing.
  CHECK(elitist_less({"b"}, {}, o));
}

TEST_CASE("changing preferences changes defeats, never arguments") {
  Theory t = fixture("simplification.phax");
  auto a = analyze(t);
  t.preferences = {{"r1", "r2"}};
  auto b = analyze(t);
  CHECK(shapes(a) == shapes(b));
  CHECK(a.graph.attacks == b.graph.attacks);
  CHECK(a.graph.defeats != b.graph.defeats);
}

TEST_CASE("conclusion status") {
  auto a = analyze(fixture("simplification.phax"));
  auto labs = af::enumerate_labellings(a.projection.af, af::Semantics::Grounded);
  CHECK(conclusion_status(a, labs, lit("~prefer(heart_attack)")).status == Status::Accepted);
  CHECK(conclusion_status(a, labs, lit("prefer(heart_attack)")).status == Status::Rejected);
  CHECK(conclusion_status(a, labs, lit("nothing")).status == Status::Absent);
  auto b = analyze(fixture("simplification_nopref.phax"));
  auto lb = af::enumerate_labellings(b.projection.af, af::Semantics::Grounded);
  CHECK(conclusion_status(b, lb, lit("prefer(heart_attack)")).status == Status::Undecided);
  auto pb = af::enumerate_labellings(b.projection.af, af::Semantics::Preferred);
  auto st = conclusion_status(b, pb, lit("prefer(heart_attack)"));
  CHECK(st.credulous);
  CHECK_FALSE(st.skeptical);
}

TEST_CASE("construction cap") {
  Theory t = fixture("vaccine.phax");
  auto gt = ground_theory(t);
  CHECK_THROWS_AS(construct_arguments(gt, {2}), Error);
}
