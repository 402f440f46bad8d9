#include <gtest/gtest.h>

#include <random>

#include "qcsp/containment.hpp"
#include "qcsp/errors.hpp"
#include "qcsp/game.hpp"
#include "qcsp/generators.hpp"
#include "qcsp/hom.hpp"
#include "qcsp/parser.hpp"
#include "qcsp/qcore.hpp"
#include "support/oracles.hpp"

namespace qcsp {
namespace {

Structure erg_structure() {
  StructureBuilder b(Signature({{"E", 2}, {"R", 1}, {"G", 1}}), 3);
  b.add("E", {0, 0}).add("E", {1, 2}).add("E", {2, 1});
  b.add("R", {0}).add("R", {1}).add("G", {0}).add("G", {2});
  return b.labels({"1", "2", "3"}).build();
}

void expect_certified(const Structure& a, const QcoreReport& r) {
  ASSERT_TRUE(r.found);
  ASSERT_EQ(r.forward.outcome, Outcome::kYes);
  ASSERT_EQ(r.backward.outcome, Outcome::kYes);
  EXPECT_TRUE(is_homomorphism(power(a, r.forward.exponent), r.core, r.forward.witness->mapping));
  EXPECT_TRUE(is_surjective(r.forward.witness->mapping, r.core.size()));
  EXPECT_TRUE(is_homomorphism(power(r.core, r.backward.exponent), a, r.backward.witness->mapping));
  EXPECT_TRUE(is_surjective(r.backward.witness->mapping, a.size()));
  for (const auto& c : r.minimality) {
    Structure weaker = substructure(a, c.spec.elements, c.spec.tuples);
    EXPECT_NE(equivalent(a, weaker).value, Tribool::kTrue);
  }
}

TEST(FindQcore, NonInducedExample) {
  Structure a = erg_structure();
  QcoreReport r = find_qcore(a);
  expect_certified(a, r);
  EXPECT_FALSE(r.inconclusive);
  EXPECT_FALSE(r.is_induced);
  EXPECT_EQ(r.core.size(), 3);
  EXPECT_EQ(r.core.relation("R").flat(), std::vector<int>{0});
  EXPECT_EQ(r.core.relation("G").flat(), std::vector<int>{0});
  EXPECT_EQ(r.core.relation("E").size(), 3u);
  // One weakening per kept tuple and per kept element.
  EXPECT_EQ(r.minimality.size(), 5u + 3u);
}

TEST(FindQcore, SixCycleGivesK2) {
  QcoreOptions o;
  o.max_input_size = 6;
  QcoreReport r = find_qcore(cycle(6), o);
  expect_certified(cycle(6), r);
  EXPECT_TRUE(r.core.same_as(clique(2)));
}

TEST(FindQcore, K3IsItsOwnQcore) {
  QcoreReport r = find_qcore(clique(3));
  expect_certified(clique(3), r);
  EXPECT_TRUE(r.core.same_as(clique(3)));
  EXPECT_TRUE(r.is_induced);
  EXPECT_FALSE(r.inconclusive);
}

TEST(FindQcore, BipartiteWithIsolatedVertex) {
  QcoreReport r = find_qcore(disjoint_union(path("000"), clique(1)));
  expect_certified(disjoint_union(path("000"), clique(1)), r);
  EXPECT_TRUE(r.core.same_as(disjoint_union(clique(2), clique(1))));
}

TEST(FindQcore, Preconditions) {
  EXPECT_THROW(find_qcore(expansion(clique(2), {0})), PreconditionError);
  EXPECT_THROW(find_qcore(cycle(6)), ResourceError);
}

TEST(FindQcore, NeverLargerThanInput) {
  testing::Rng rng(59);
  for (int i = 0; i < 25; ++i) {
    Structure a = testing::random_digraph(rng, std::uniform_int_distribution<int>(1, 3)(rng), 0.5);
    QcoreReport r = find_qcore(a);
    ASSERT_TRUE(r.found);
    EXPECT_LE(r.core.size(), a.size());
    EXPECT_LE(r.core.tuple_count(), a.tuple_count());
    expect_certified(a, r);
  }
}

TEST(Idempotency, P01) {
  IdempotencyResult r = check_idempotency_obstruction(p01(), 0, 1);
  EXPECT_TRUE(r.holds);
  ASSERT_TRUE(r.witness);
  EXPECT_EQ(r.square.size(), 4);
  EXPECT_TRUE(is_homomorphism(r.square, r.target, r.witness->mapping, true));
  EXPECT_TRUE(is_surjective(r.witness->mapping, 2));
}

TEST(Idempotency, Preconditions) {
  EXPECT_THROW(check_idempotency_obstruction(k1s(), 0, 0), PreconditionError);
  EXPECT_THROW(check_idempotency_obstruction(clique(2), 0, 1), PreconditionError);
  EXPECT_THROW(check_idempotency_obstruction(p01(), 1, 0), PreconditionError);
  EXPECT_THROW(check_idempotency_obstruction(p01(), 0, 2), PreconditionError);
}

TEST(DominatingVertexClass, EquivalentToP01) {
  testing::Rng rng(61);
  int checked = 0;
  for (int i = 0; i < 400 && checked < 40; ++i) {
    const int n = std::uniform_int_distribution<int>(2, 4)(rng);
    Structure g = testing::random_digraph(rng, n, 0.4);
    // Force vertex n-1 to dominate and vertex 0 to be loop-free.
    std::vector<int> flat;
    const Relation& e = g.relation(0);
    for (std::size_t t = 0; t < e.size(); ++t) {
      auto tup = e.tuple(t);
      if (tup[0] == 0 && tup[1] == 0) continue;
      flat.insert(flat.end(), tup.begin(), tup.end());
    }
    for (int y = 0; y < n; ++y) flat.insert(flat.end(), {n - 1, y, y, n - 1});
    Structure h(g.signature(), n, {Relation(2, flat)});
    ++checked;
    EXPECT_EQ(equivalent(h, p01()).value, Tribool::kTrue);
    EXPECT_TRUE(evaluate(h, parse_sentence("exists x forall y : E(x,y) & E(y,x)")).value);
  }
  EXPECT_GE(checked, 40);
}

}  // namespace
}  // namespace qcsp
