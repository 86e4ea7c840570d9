#include <doctest.h>

#include <random>

#include "oracles.hpp"
#include "phax/adapt.hpp"
#include "util.hpp"

using namespace phax;
using namespace phax::adapt;

namespace {

oracle::Tree tree(std::vector<int> parent, std::vector<double> base) {
  oracle::Tree t;
  t.parent = std::move(parent);
  t.base = std::move(base);
  t.tag.assign(t.parent.size(), std::nullopt);
  t.jargon.assign(t.parent.size(), {});
  return t;
}

}  // namespace

TEST_CASE("sufficiency hand values") {
  CHECK(sufficiency(oracle::to_dispute_tree(tree({-1}, {0.8}))) == doctest::Approx(0.8).epsilon(1e-12));
  CHECK(sufficiency(oracle::to_dispute_tree(tree({-1, 0}, {1.0, 0.6}))) == doctest::Approx(0.4).epsilon(1e-12));
  CHECK(sufficiency(oracle::to_dispute_tree(tree({-1, 0, 1}, {1.0, 0.9, 1.0}))) == doctest::Approx(1.0));
  // Two attackers multiply: 1 * 0.5 * 0.5.
  CHECK(sufficiency(oracle::to_dispute_tree(tree({-1, 0, 0}, {1.0, 0.5, 0.5}))) == doctest::Approx(0.25));
}

TEST_CASE("dispute tree from the simplification theory") {
  auto a = aspic::analyze(fixture("simplification_nopref.phax"));
  auto root = a.graph.arguments.find_by_label("r1")->id;
  auto t = build_dispute_tree(a.graph, a.ground, root);
  REQUIRE(t.size() == 2);
  CHECK(t.root().role == Role::Proponent);
  CHECK(t.nodes()[1].role == Role::Opponent);
  CHECK(t.nodes()[1].children.empty());
  CHECK(sufficiency(t) == doctest::Approx(0.95 * 0.4));
  CHECK_THROWS_AS(build_dispute_tree(a.graph, a.ground, "zzz"), Error);
}

TEST_CASE("depth limit") {
  auto a = aspic::analyze(parse_theory_or_throw(
      "premise p: a.\ndefeasible r: a => b.\n"
      "premise q: c.\ndefeasible s: c => ~applicable(r).\n"
      "premise w: d.\ndefeasible v: d => ~applicable(s).\n"));
  auto root = a.graph.arguments.find_by_label("r")->id;
  CHECK(build_dispute_tree(a.graph, a.ground, root).size() == 3);
  CHECK(build_dispute_tree(a.graph, a.ground, root, 2).size() == 2);
  CHECK(build_dispute_tree(a.graph, a.ground, root, 1).size() == 1);
}

TEST_CASE("restrict_to requires ancestor closure") {
  auto t = oracle::to_dispute_tree(tree({-1, 0, 1}, {1.0, 0.5, 0.5}));
  CHECK(t.restrict_to({0, 1}).size() == 2);
  CHECK_THROWS_AS(t.restrict_to({0, 2}), Error);
  CHECK_THROWS_AS(t.restrict_to({1}), Error);
}

TEST_CASE("utility features") {
  oracle::Tree t = tree({-1, 0, 0}, {1.0, 0.2, 0.2});
  t.tag = {std::string("expert_opinion"), std::nullopt, std::string("analogy")};
  t.jargon = {{0.4, 0.6}, {}, {0.2}};
  UserProfile u{"u", 0.5, 0.5, 0.0, {"expert_opinion"}};
  UtilityWeights w{0.2, 0.3, 0.5, 0.0, 1.0};
  auto s = utility(oracle::to_dispute_tree(t), u, w);
  CHECK(node_budget(0.0) == 3);
  CHECK(node_budget(0.5) == 9);
  CHECK(node_budget(1.0) == 15);
  CHECK(s.features.clarity == doctest::Approx(1.0));
  CHECK(s.features.relevance == doctest::Approx(1.0 / 3.0));
  CHECK(s.features.lexical_fit == doctest::Approx(1.0 - 0.5 * 0.4));
  std::vector<bool> all(3, true);
  oracle::Weights ow{w.alpha, w.beta, w.gamma, w.tau, w.epsilon};
  CHECK(s.score == doctest::Approx(oracle::utility(t, all, 0.5, 0.0, u.preferred_schemes, ow)));

  u.lexical_tolerance = 1.0;
  CHECK(utility(oracle::to_dispute_tree(t), u, w).features.lexical_fit == doctest::Approx(1.0));
  u.preferred_schemes.clear();
  t.tag.assign(3, std::nullopt);
  CHECK(utility(oracle::to_dispute_tree(t), u, w).features.relevance == doctest::Approx(1.0));
}

TEST_CASE("clarity drops past the node budget") {
  std::vector<int> parent{-1};
  for (int i = 1; i < 6; ++i) parent.push_back(0);
  auto t = oracle::to_dispute_tree(tree(parent, std::vector<double>(6, 0.1)));
  UserProfile u{"u", 0.5, 0.5, 0.0, {}};
  CHECK(utility(t, u, {}).features.clarity == doctest::Approx(1.0 / 4.0));
}

TEST_CASE("selection basics") {
  UserProfile u;
  UtilityWeights w;
  auto one = select_explanation(oracle::to_dispute_tree(tree({-1}, {0.8})), u, w);
  CHECK(one.node_ids == std::vector<std::size_t>{0});
  CHECK(one.sigma == doctest::Approx(0.8));

  try {
    select_explanation(oracle::to_dispute_tree(tree({-1, 0}, {1.0, 0.6})), u, w);
    FAIL("expected INSUFFICIENT");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::Insufficient);
    CHECK(std::string(e.what()).find("0.4") != std::string::npos);
  }

  // Pruning a weak attacker is allowed when it stays within epsilon.
  auto pruned = select_explanation(oracle::to_dispute_tree(tree({-1, 0}, {1.0, 0.01})), u, w);
  CHECK(pruned.node_ids == std::vector<std::size_t>{0});
  w.epsilon = 0.0;
  auto kept = select_explanation(oracle::to_dispute_tree(tree({-1, 0}, {1.0, 0.01})), u, w);
  CHECK(kept.node_ids.size() == 2);
}

TEST_CASE("weights are validated") {
  CHECK_THROWS_AS(validate_weights({-1, 0, 0, 0.5, 0.1}), Error);
  CHECK_THROWS_AS(validate_weights({1, 1, 1, 1.5, 0.1}), Error);
  CHECK_THROWS_AS(validate_weights({0, 0, 0, 0.5, 0.1}), Error);
  CHECK_NOTHROW(validate_weights({}));
}

TEST_CASE("beam search on trees past the exact limit is feasible and deterministic") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 5; ++i) {
    auto t = oracle::random_tree(rng, 40);
    auto dt = oracle::to_dispute_tree(t);
    UserProfile u{"u", 0.5, 0.5, 0.5, {"analogy"}};
    UtilityWeights w;
    w.tau = 0.0;
    w.epsilon = 0.2;
    auto a = select_explanation(dt, u, w);
    auto b = select_explanation(dt, u, w);
    CHECK_FALSE(a.exact);
    CHECK(a.node_ids == b.node_ids);
    CHECK(std::fabs(sufficiency(a.subtree) - sufficiency(dt)) <= w.epsilon + 1e-12);
  }
}
