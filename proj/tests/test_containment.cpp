#include <gtest/gtest.h>

#include <random>

#include "qcsp/containment.hpp"
#include "qcsp/errors.hpp"
#include "qcsp/game.hpp"
#include "qcsp/generators.hpp"
#include "qcsp/hom.hpp"
#include "qcsp/parser.hpp"
#include "support/oracles.hpp"

namespace qcsp {
namespace {

TEST(DecideContainment, K3IntoH2) {
  ContainmentVerdict v = decide_containment(clique(3), h2());
  ASSERT_EQ(v.outcome, Outcome::kYes);
  EXPECT_EQ(v.exponent, 2);
  ASSERT_TRUE(v.witness);
  EXPECT_TRUE(is_homomorphism(power(clique(3), 2), h2(), v.witness->mapping));
  EXPECT_TRUE(is_surjective(v.witness->mapping, 4));
  EXPECT_EQ(v.bound_kind, BoundKind::kOrbit);
  EXPECT_EQ(v.bound, 14);
}

TEST(DecideContainment, UnaryFamily) {
  ContainmentVerdict v = decide_containment(a_k_unary(3), b_k_unary(3));
  ASSERT_EQ(v.outcome, Outcome::kYes);
  EXPECT_EQ(v.exponent, 3);
  ContainmentOptions forced;
  forced.bound_mode = BoundMode::kFixed;
  forced.fixed_bound = 2;
  ContainmentVerdict no = decide_containment(a_k_unary(3), b_k_unary(3), forced);
  EXPECT_EQ(no.outcome, Outcome::kNo);
  EXPECT_EQ(no.bound_kind, BoundKind::kFixed);
}

TEST(DecideContainment, OnePointIntoTwoPoints) {
  ContainmentVerdict v = decide_containment(clique(1), edgeless(2));
  EXPECT_EQ(v.outcome, Outcome::kNo);
  EXPECT_EQ(v.bound, 1);
}

TEST(DecideContainment, CapGivesInconclusive) {
  ContainmentOptions o;
  o.cap = 2;
  ContainmentVerdict v = decide_containment(a_k_unary(3), b_k_unary(3), o);
  EXPECT_EQ(v.outcome, Outcome::kInconclusive);
  EXPECT_EQ(v.cap, 2);
  ContainmentOptions tiny;
  tiny.limits.max_elements = 10;
  ContainmentVerdict w = decide_containment(a_k_unary(3), b_k_unary(3), tiny);
  EXPECT_EQ(w.outcome, Outcome::kInconclusive);
  EXPECT_FALSE(w.diagnostics.empty());
}

TEST(DecideContainment, Preconditions) {
  EXPECT_THROW(decide_containment(clique(2), a_k_unary(2)), SignatureError);
  EXPECT_THROW(decide_containment(expansion(clique(2), {0}), expansion(clique(2), {0})),
               PreconditionError);
}

TEST(DecideContainment, CardinalityBound) {
  ContainmentOptions o;
  o.bound_mode = BoundMode::kCardinality;
  ContainmentVerdict v = decide_containment(clique(3), h2(), o);
  EXPECT_EQ(v.bound, 81);
  EXPECT_EQ(v.bound_kind, BoundKind::kCardinality);
  EXPECT_EQ(v.exponent, 2);
}

TEST(DecideContainment, MonotoneInTheExponent) {
  testing::Rng rng(37);
  int checked = 0;
  ContainmentOptions small;
  small.limits.max_elements = 4096;
  for (int i = 0; i < 200 && checked < 40; ++i) {
    Structure a = testing::random_digraph(rng, std::uniform_int_distribution<int>(1, 3)(rng), 0.5);
    Structure b = testing::random_digraph(rng, std::uniform_int_distribution<int>(1, 3)(rng), 0.5);
    ContainmentVerdict v = decide_containment(a, b, small);
    if (v.outcome != Outcome::kYes || v.exponent > 3) continue;
    ++checked;
    auto lifted = lift_witness(v.witness->mapping, a.size());
    EXPECT_TRUE(is_homomorphism(power(a, v.exponent + 1), b, lifted));
    EXPECT_TRUE(is_surjective(lifted, b.size()));
    if (v.exponent > 1) {
      EXPECT_FALSE(find_surjective_hom(power(a, v.exponent - 1), b));
    }
  }
  EXPECT_GT(checked, 10);
}

TEST(DecideContainment, YesIsSoundForSampledSentences) {
  testing::Rng rng(41);
  int yes = 0;
  for (int i = 0; i < 150; ++i) {
    Structure a = testing::random_digraph(rng, std::uniform_int_distribution<int>(1, 3)(rng), 0.5);
    Structure b = testing::random_digraph(rng, std::uniform_int_distribution<int>(1, 3)(rng), 0.5);
    ContainmentOptions small;
    small.limits.max_elements = 4096;
    if (decide_containment(a, b, small).outcome != Outcome::kYes) continue;
    ++yes;
    for (int k = 0; k < 20; ++k) {
      testing::SentenceParams p;
      p.max_vars = 6;
      p.max_atoms = 4;
      PhSentence s = testing::random_sentence(rng, testing::digraph_signature(), p);
      if (evaluate(a, s).value) {
        EXPECT_TRUE(evaluate(b, s).value) << to_string(s);
      }
    }
  }
  EXPECT_GT(yes, 10);
}

TEST(DecideContainment, NoVerdictsAgreeWithBruteForceAtTheBound) {
  testing::Rng rng(43);
  for (int i = 0; i < 60; ++i) {
    Structure a = testing::random_digraph(rng, 2, 0.5);
    Structure b = testing::random_digraph(rng, std::uniform_int_distribution<int>(1, 2)(rng), 0.5);
    ContainmentVerdict v = decide_containment(a, b);
    ASSERT_NE(v.outcome, Outcome::kInconclusive);
    // Cardinality bound |A|^|B| <= 4: check every power up to it directly.
    bool any = false;
    for (int r = 1; r <= 4 && !any; ++r) any = testing::brute_hom_exists(power(a, r), b, true);
    EXPECT_EQ(v.outcome == Outcome::kYes, any);
  }
}

TEST(Equivalent, Examples) {
  EXPECT_EQ(equivalent(clique(3), h2()).value, Tribool::kTrue);
  EXPECT_EQ(equivalent(clique(2), cycle(6)).value, Tribool::kTrue);
  EquivalenceResult r = equivalent(clique(2), clique(3));
  EXPECT_EQ(r.value, Tribool::kFalse);
  // Every power of K3 is non-bipartite, so it cannot map onto K2 at all.
  EXPECT_FALSE(evaluate(clique(2), canonical_query(clique(3))).value);
  EXPECT_TRUE(evaluate(clique(3), canonical_query(clique(3))).value);
  ContainmentOptions o;
  o.cap = 1;
  EXPECT_EQ(equivalent(clique(3), h2(), o).value, Tribool::kUnknown);
}

TEST(DistinguishingSentence, Examples) {
  EXPECT_FALSE(distinguishing_sentence(h2(), h2(), 1));
  // A_2^2 maps onto B, so only the reverse direction can be separated.
  EXPECT_FALSE(distinguishing_sentence(a_k_unary(2), b_k_unary(2), 1));
  auto phi = distinguishing_sentence(b_k_unary(2), a_k_unary(2), 1);
  ASSERT_TRUE(phi);
  EXPECT_TRUE(classify(*phi).is_pi2);
  EXPECT_TRUE(evaluate(b_k_unary(2), *phi).value);
  EXPECT_FALSE(evaluate(a_k_unary(2), *phi).value);
  auto order = distinguishing_sentence(dp1_star(), clique(2, true), 1);
  EXPECT_FALSE(order);
  auto back = distinguishing_sentence(edgeless(2), clique(1), 1);
  EXPECT_FALSE(back);
}

TEST(DistinguishingSentence, AlwaysPi2AndVerified) {
  testing::Rng rng(47);
  int found = 0;
  for (int i = 0; i < 150; ++i) {
    Structure a = testing::random_digraph(rng, 2, 0.5);
    Structure b = testing::random_digraph(rng, std::uniform_int_distribution<int>(1, 3)(rng), 0.5);
    auto phi = distinguishing_sentence(a, b, 1);
    if (!phi) continue;
    ++found;
    EXPECT_TRUE(classify(*phi).is_pi2);
    EXPECT_TRUE(testing::brute_eval(a, *phi));
    EXPECT_FALSE(testing::brute_eval(b, *phi));
    EXPECT_NE(decide_containment(a, b).outcome, Outcome::kYes);
  }
  EXPECT_GT(found, 5);
}

TEST(CspContainment, Examples) {
  EXPECT_TRUE(csp_containment(clique(3), clique(3)));
  EXPECT_FALSE(csp_containment(clique(3), clique(2)));
  testing::Rng rng(53);
  for (int i = 0; i < 100; ++i) {
    auto graphs = testing::all_graphs(4);
    const auto& g = graphs[static_cast<std::size_t>(std::uniform_int_distribution<int>(0, 63)(rng))];
    EXPECT_EQ(csp_containment(g, clique(3)), testing::brute_three_colourable(g));
  }
}

TEST(LiftWitness, DropsLastCoordinate) {
  EXPECT_EQ(lift_witness({0, 1}, 2), (std::vector<int>{0, 0, 1, 1}));
}

}  // namespace
}  // namespace qcsp
