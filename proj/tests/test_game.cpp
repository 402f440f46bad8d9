#include <gtest/gtest.h>

#include <random>

#include "qcsp/errors.hpp"
#include "qcsp/game.hpp"
#include "qcsp/generators.hpp"
#include "qcsp/parser.hpp"
#include "support/oracles.hpp"

namespace qcsp {
namespace {

bool eval(const Structure& a, const char* text) {
  return evaluate(a, parse_sentence(text)).value;
}

TEST(Evaluate, KnownTruths) {
  EXPECT_TRUE(eval(p01(), "exists x forall y : E(x,y) & E(y,x)"));
  EXPECT_TRUE(eval(clique(1), "exists x forall y : x = y"));
  EXPECT_FALSE(eval(edgeless(2), "exists x forall y : x = y"));
  EXPECT_TRUE(eval(dp1_star(), "exists x forall y : E(x,y)"));
  EXPECT_TRUE(eval(linear_order(3), "exists x forall y : E(y,x)"));
  EXPECT_TRUE(eval(linear_order(3), "forall x exists y : E(x,y) & E(y,x) & x = y"));
  EXPECT_FALSE(eval(linear_order(3), "forall x y : E(x,y)"));
}

TEST(Evaluate, EmptyMatrixAndPrefix) {
  EXPECT_TRUE(eval(clique(2), "forall x : true"));
  EXPECT_TRUE(evaluate(clique(2), PhSentence{}).value);
}

TEST(Evaluate, Errors) {
  EXPECT_THROW(eval(clique(2), "exists x : U(x)"), SignatureError);
  EXPECT_THROW(eval(clique(2), "exists x : E(x)"), SignatureError);
  Structure empty(Signature({{"E", 2}}), 0, {Relation(2, {})});
  EXPECT_THROW(eval(empty, "exists x : E(x,x)"), PreconditionError);
}

TEST(Evaluate, AgreesWithNaiveRecursion) {
  testing::Rng rng(23);
  const Signature sig({{"E", 2}, {"U", 1}});
  for (int i = 0; i < 1500; ++i) {
    Structure a = testing::random_structure(rng, sig, std::uniform_int_distribution<int>(1, 3)(rng), 0.5);
    testing::SentenceParams p;
    p.max_vars = 6;
    p.max_atoms = 5;
    p.equality = 0.1;
    PhSentence s = testing::random_sentence(rng, sig, p);
    ASSERT_EQ(evaluate(a, s).value, testing::brute_eval(a, s)) << to_string(s);
  }
}

TEST(Evaluate, StrategiesReplay) {
  testing::Rng rng(29);
  const Signature sig = testing::digraph_signature();
  int wins = 0;
  for (int i = 0; i < 400; ++i) {
    Structure a = testing::random_digraph(rng, std::uniform_int_distribution<int>(1, 3)(rng), 0.6);
    testing::SentenceParams p;
    p.max_vars = 5;
    p.max_atoms = 3;
    PhSentence s = testing::random_sentence(rng, sig, p);
    EvaluateOptions o;
    o.want_strategy = true;
    GameResult r = evaluate(a, s, o);
    if (!r.value) {
      EXPECT_FALSE(r.strategy);
      continue;
    }
    ++wins;
    ASSERT_TRUE(r.strategy);
    EXPECT_TRUE(verify_strategy(a, s, *r.strategy)) << to_string(s);
  }
  EXPECT_GT(wins, 50);
}

TEST(VerifyStrategy, RejectsLosingStrategy) {
  PhSentence s = parse_sentence("forall x exists y : E(x,y)");
  Strategy bad{{{1, {0}}, 0}, {{1, {1}}, 1}};
  EXPECT_FALSE(verify_strategy(clique(2), s, bad));
  Strategy good{{{1, {0}}, 1}, {{1, {1}}, 0}};
  EXPECT_TRUE(verify_strategy(clique(2), s, good));
}

TEST(Pi2ViaSuperprodukt, Examples) {
  PhSentence three_by_four = parse_sentence(
      "forall x1 x2 x3 exists y1 y2 y3 y4 : E(y1,x1) & E(x1,y2) & E(x1,y3) & "
      "E(y3,y2) & E(y4,x2) & E(x3,y4)");
  EXPECT_EQ(evaluate_pi2_via_superprodukt(clique(2), three_by_four), evaluate(clique(2), three_by_four).value);
  EXPECT_THROW(evaluate_pi2_via_superprodukt(clique(3), three_by_four), ResourceError);
  PhSentence total = parse_sentence("forall x exists y : E(x,y)");
  EXPECT_FALSE(evaluate_pi2_via_superprodukt(clique(1), total));
  EXPECT_FALSE(evaluate(clique(1), total).value);
  EXPECT_TRUE(evaluate_pi2_via_superprodukt(clique(2), total));
  EXPECT_TRUE(evaluate(clique(2), total).value);
}

TEST(Pi2ViaSuperprodukt, RandomAgreementOnThreeElements) {
  testing::Rng rng(31);
  for (int i = 0; i < 200; ++i) {
    Structure a = testing::random_digraph(rng, 3, 0.5);
    PhSentence s = parse_sentence("forall x exists y z : E(x,y) & E(y,z)");
    s.matrix.push_back(Atom::rel("E", {"z", std::uniform_int_distribution<int>(0, 1)(rng) ? "x" : "z"}));
    EXPECT_EQ(evaluate_pi2_via_superprodukt(a, s), evaluate(a, s).value);
  }
}

}  // namespace
}  // namespace qcsp
