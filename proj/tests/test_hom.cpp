#include <gtest/gtest.h>

#include <random>
#include <set>

#include "qcsp/errors.hpp"
#include "qcsp/generators.hpp"
#include "qcsp/hom.hpp"
#include "support/oracles.hpp"

namespace qcsp {
namespace {

using testing::brute_hom_exists;
using testing::maps_tuples;

TEST(FindHom, Cliques) {
  EXPECT_TRUE(find_hom(clique(2), clique(3)));
  EXPECT_FALSE(find_hom(clique(3), clique(2)));
  EXPECT_TRUE(find_hom(clique(3), clique(3)));
}

TEST(FindHom, PartialMap) {
  HomOptions o;
  o.partial = {1, std::nullopt};
  auto w = find_hom(clique(2), clique(3), o);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->mapping, (std::vector<int>{1, 0}));
  o.partial = {1, 1};
  EXPECT_FALSE(find_hom(clique(2), clique(3), o));
}

TEST(FindHom, IsDeterministicLeastWitness) {
  auto w = find_hom(clique(2), clique(3));
  ASSERT_TRUE(w);
  EXPECT_EQ(w->mapping, (std::vector<int>{0, 1}));
  EXPECT_EQ(find_hom(h2(), clique(3))->mapping, find_hom(h2(), clique(3))->mapping);
}

TEST(FindHom, RespectsConstants) {
  Structure a = expansion(clique(2), {0});
  Structure b = expansion(clique(2), {1});
  HomOptions o;
  o.respect_constants = true;
  auto w = find_hom(a, b, o);
  ASSERT_TRUE(w);
  EXPECT_EQ(w->mapping, (std::vector<int>{1, 0}));
  EXPECT_TRUE(w->constant_preserving);
}

TEST(FindHom, SignatureMismatch) {
  EXPECT_THROW(find_hom(clique(2), a_k_unary(2)), SignatureError);
}

TEST(FindHom, AgreesWithBruteForce) {
  testing::Rng rng(5);
  const Signature sig({{"E", 2}, {"U", 1}});
  for (int i = 0; i < 400; ++i) {
    std::uniform_int_distribution<int> size(1, 4);
    Structure a = testing::random_structure(rng, sig, size(rng), 0.3);
    Structure b = testing::random_structure(rng, sig, size(rng), 0.5);
    for (bool surjective : {false, true}) {
      auto w = surjective ? find_surjective_hom(a, b) : find_hom(a, b);
      ASSERT_EQ(w.has_value(), brute_hom_exists(a, b, surjective)) << i;
      if (w) {
        EXPECT_TRUE(is_homomorphism(a, b, w->mapping));
        EXPECT_TRUE(maps_tuples(a, b, w->mapping));
        if (surjective) {
          EXPECT_TRUE(is_surjective(w->mapping, b.size()));
        }
      }
    }
  }
}

TEST(FindSurjectiveHom, KnownCases) {
  auto w = find_surjective_hom(power(clique(3), 2), h2());
  ASSERT_TRUE(w);
  EXPECT_TRUE(maps_tuples(power(clique(3), 2), h2(), w->mapping));
  EXPECT_TRUE(w->surjective);
  // The witness s(1,1)=1, s(2,1)=2, s(2,2)=3 is one valid choice.
  std::vector<int> s{0, 0, 1, 2};
  EXPECT_TRUE(is_homomorphism(power(dp1_star(), 2), linear_order(3), s));
  EXPECT_TRUE(find_surjective_hom(power(dp1_star(), 2), linear_order(3)));
  EXPECT_FALSE(find_surjective_hom(clique(2), clique(3)));
}

TEST(FindSurjectiveHom, ComposesWithProjection) {
  testing::Rng rng(9);
  for (int i = 0; i < 100; ++i) {
    Structure a = testing::random_digraph(rng, 3, 0.5);
    Structure b = testing::random_digraph(rng, 2, 0.5);
    Structure c = testing::random_digraph(rng, 2, 0.7);
    auto w = find_surjective_hom(a, b);
    if (!w) continue;
    Structure ac = product(a, c);
    // Projection onto the first factor, then w.
    std::vector<int> composed(static_cast<std::size_t>(ac.size()));
    for (int x = 0; x < ac.size(); ++x) composed[static_cast<std::size_t>(x)] = w->mapping[static_cast<std::size_t>(x / c.size())];
    EXPECT_TRUE(is_homomorphism(ac, b, composed));
    EXPECT_TRUE(find_surjective_hom(ac, b).has_value());
  }
}

TEST(IsHomomorphism, RejectsBadMaps) {
  EXPECT_FALSE(is_homomorphism(clique(2), clique(2), {0, 0}));
  EXPECT_FALSE(is_homomorphism(clique(2), clique(2), {0}));
  EXPECT_FALSE(is_homomorphism(clique(2), clique(2), {0, 2}));
  EXPECT_TRUE(is_homomorphism(clique(2), clique(2), {1, 0}));
}

TEST(Automorphisms, Examples) {
  EXPECT_EQ(automorphisms(clique(3)).size(), 6u);
  EXPECT_EQ(automorphisms(dp1_star()), (std::vector<std::vector<int>>{{0, 1}}));
  EXPECT_EQ(automorphisms(edgeless(2)).size(), 2u);
  AutomorphismOptions small;
  small.max_size = 3;
  EXPECT_THROW(automorphisms(h2(), small), ResourceError);
}

TEST(Automorphisms, FormAGroupMatchingBruteForce) {
  testing::Rng rng(13);
  for (int i = 0; i < 60; ++i) {
    Structure a = testing::random_digraph(rng, std::uniform_int_distribution<int>(1, 5)(rng), 0.4);
    auto group = automorphisms(a);
    EXPECT_EQ(group, testing::brute_automorphisms(a));
    std::set<std::vector<int>> set(group.begin(), group.end());
    std::vector<int> id(static_cast<std::size_t>(a.size()));
    for (int k = 0; k < a.size(); ++k) id[static_cast<std::size_t>(k)] = k;
    EXPECT_TRUE(set.count(id));
    for (const auto& g : group) {
      std::vector<int> inv(g.size());
      for (std::size_t k = 0; k < g.size(); ++k) inv[static_cast<std::size_t>(g[k])] = static_cast<int>(k);
      EXPECT_TRUE(set.count(inv));
      for (const auto& h : group) {
        std::vector<int> gh(g.size());
        for (std::size_t k = 0; k < g.size(); ++k) gh[k] = g[static_cast<std::size_t>(h[k])];
        EXPECT_TRUE(set.count(gh));
      }
    }
  }
}

TEST(OrbitCount, Examples) {
  EXPECT_EQ(orbit_count(clique(3), 1), 1u);
  EXPECT_EQ(orbit_count(clique(3), 2), 2u);
  EXPECT_EQ(orbit_count(edgeless(2), 2), 2u);
  EXPECT_EQ(orbit_count(clique(3), 4), 14u);
}

TEST(OrbitCount, MatchesUnionFind) {
  testing::Rng rng(17);
  for (int i = 0; i < 40; ++i) {
    Structure a = testing::random_digraph(rng, std::uniform_int_distribution<int>(1, 4)(rng), 0.4);
    for (int n = 1; n <= 3; ++n) {
      EXPECT_EQ(static_cast<std::int64_t>(orbit_count(a, n)), testing::brute_orbit_count(a, n));
    }
  }
}

void expect_majority(const Structure& a, const std::vector<int>& f) {
  const int n = a.size();
  EXPECT_TRUE(is_homomorphism(power(a, 3), a, f));
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      EXPECT_EQ(f[static_cast<std::size_t>((x * n + x) * n + y)], x);
      EXPECT_EQ(f[static_cast<std::size_t>((x * n + y) * n + x)], x);
      EXPECT_EQ(f[static_cast<std::size_t>((y * n + x) * n + x)], x);
    }
  }
}

TEST(Majority, KnownCases) {
  for (const auto& a : {clique(2), clique(1), k1s(), path("10")}) {
    auto f = find_majority_polymorphism(a);
    ASSERT_TRUE(f) << a.name();
    expect_majority(a, *f);
  }
  EXPECT_FALSE(find_majority_polymorphism(clique(3)));
}

TEST(Majority, RandomWitnessesSatisfyIdentities) {
  testing::Rng rng(19);
  int found = 0;
  for (int i = 0; i < 60; ++i) {
    Structure a = testing::random_digraph(rng, std::uniform_int_distribution<int>(1, 3)(rng), 0.5);
    auto f = find_majority_polymorphism(a);
    if (!f) continue;
    ++found;
    expect_majority(a, *f);
  }
  EXPECT_GT(found, 0);
}

}  // namespace
}  // namespace qcsp
