#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "phax/af.hpp"

using namespace phax;
using namespace phax::af;

namespace {

ArgumentationFramework make(std::vector<std::string> args, std::vector<std::pair<std::string, std::string>> atts) {
  return ArgumentationFramework(std::move(args), atts);
}

}  // namespace

TEST_CASE("grounded labelling of a chain") {
  auto f = make({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}});
  auto g = grounded_labelling(f);
  CHECK(g.ids(f, Label::In) == std::vector<std::string>{"a", "c"});
  CHECK(g.ids(f, Label::Out) == std::vector<std::string>{"b"});
}

TEST_CASE("mutual attack: grounded undecided, two preferred, two stable") {
  auto f = make({"a", "b"}, {{"a", "b"}, {"b", "a"}});
  CHECK(grounded_labelling(f).indices(Label::Undec).size() == 2);
  CHECK(enumerate_labellings(f, Semantics::Preferred).size() == 2);
  CHECK(enumerate_labellings(f, Semantics::Stable).size() == 2);
  CHECK(enumerate_labellings(f, Semantics::Complete).size() == 3);
  CHECK(acceptance(f, "a", Semantics::Preferred, Mode::Credulous));
  CHECK_FALSE(acceptance(f, "a", Semantics::Preferred, Mode::Skeptical));
}

TEST_CASE("odd cycle has no stable labelling") {
  auto f = make({"a", "b", "c"}, {{"a", "b"}, {"b", "c"}, {"c", "a"}});
  CHECK(enumerate_labellings(f, Semantics::Stable).empty());
  auto p = enumerate_labellings(f, Semantics::Preferred);
  REQUIRE(p.size() == 1);
  CHECK(p[0].indices(Label::Undec).size() == 3);
}

TEST_CASE("self attack") {
  auto f = make({"a", "b"}, {{"a", "a"}, {"a", "b"}});
  auto g = grounded_labelling(f);
  CHECK(g[0] == Label::Undec);
  CHECK(g[1] == Label::Undec);
}

TEST_CASE("constructor rejects bad input") {
  CHECK_THROWS_AS(make({"a", "a"}, {}), Error);
  CHECK_THROWS_AS(make({"a"}, {{"a", "z"}}), Error);
  CHECK_THROWS_AS(make({"a", "b"}, {{"a", "b"}, {"a", "b"}}), Error);
}

TEST_CASE("enumeration cap") {
  std::vector<std::string> names;
  for (int i = 0; i < 30; ++i) names.push_back("x" + std::to_string(100 + i));
  std::vector<std::pair<std::string, std::string>> atts;
  for (int i = 0; i < 30; i += 2) {
    atts.emplace_back(names[i], names[i + 1]);
    atts.emplace_back(names[i + 1], names[i]);
  }
  auto f = make(names, atts);
  CHECK_THROWS_AS(enumerate_labellings(f, Semantics::Preferred, {10}), Error);
  CHECK(grounded_labelling(f).indices(Label::Undec).size() == 30);
}

TEST_CASE("ICCMA round trip") {
  auto f = parse_iccma("p af 3\n# comment\n1 2\n2 3\n");
  CHECK(f.size() == 3);
  CHECK(f.attacks(0, 1));
  CHECK(to_iccma(f) == "p af 3\n1 2\n2 3\n");
  CHECK(looks_like_iccma("p af 2\n"));
  CHECK_FALSE(looks_like_iccma("theory x."));
  CHECK_THROWS_AS(parse_iccma("p af 2\n1 3\n"), Error);
  CHECK_THROWS_AS(parse_iccma("1 2\n"), Error);
}

TEST_CASE("every semantics matches the labelling oracle on small random frameworks") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t n = rng() % 7;
    oracle::Matrix m(n, std::vector<bool>(n, false));
    std::vector<std::string> names;
    std::vector<std::pair<std::string, std::string>> atts;
    for (std::size_t i = 0; i < n; ++i) names.push_back("a" + std::to_string(i));
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (rng() % 3 == 0) {
          m[i][j] = true;
          atts.emplace_back(names[i], names[j]);
        }
    auto f = make(names, atts);
    for (auto [s, name] : {std::pair{Semantics::Complete, "complete"}, std::pair{Semantics::Stable, "stable"}}) {
      std::set<oracle::Assignment> got;
      for (const auto& l : enumerate_labellings(f, s)) {
        oracle::Assignment v;
        for (auto x : l.labels()) v.push_back(x == Label::In ? 0 : x == Label::Out ? 1 : 2);
        got.insert(v);
        CHECK(is_complete_labelling(f, l));
      }
      CHECK(got == oracle::semantics(m, name));
    }
  }
}
