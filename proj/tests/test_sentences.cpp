#include <gtest/gtest.h>

#include <algorithm>
#include <random>

#include "qcsp/errors.hpp"
#include "qcsp/game.hpp"
#include "qcsp/generators.hpp"
#include "qcsp/parser.hpp"
#include "qcsp/sentence.hpp"
#include "support/oracles.hpp"

namespace qcsp {
namespace {

const char* kThreeByFour =
    "forall x1 x2 x3 exists y1 y2 y3 y4 : E(y1,x1) & E(x1,y2) & E(x1,y3) & "
    "E(y3,y2) & E(y4,x2) & E(x3,y4)";

TEST(Parser, Basic) {
  PhSentence s = parse_sentence("forall x exists y : E(x,y) & E(y,x)");
  ASSERT_EQ(s.prefix.size(), 2u);
  EXPECT_EQ(s.prefix[0].quantifier, Quantifier::kForall);
  EXPECT_EQ(s.prefix[0].variables, std::vector<std::string>{"x"});
  EXPECT_EQ(s.prefix[1].variables, std::vector<std::string>{"y"});
  EXPECT_EQ(s.matrix.size(), 2u);
}

TEST(Parser, Equality) {
  PhSentence s = parse_sentence("exists x forall y : x = y");
  ASSERT_EQ(s.matrix.size(), 1u);
  EXPECT_TRUE(s.matrix[0].is_equality());
  EXPECT_TRUE(classify(s).has_equality);
}

TEST(Parser, EmptyMatrixIsAnError) {
  try {
    parse_sentence("forall x :");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 1);
    EXPECT_GT(e.column(), 0);
  }
  EXPECT_TRUE(parse_sentence("forall x : true").matrix.empty());
}

TEST(Parser, ReportsPositions) {
  try {
    parse_sentence("forall x\n  exists y : E(x,y) & E(y z)");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2);
    EXPECT_EQ(e.column(), 27);
  }
}

TEST(Parser, BindingErrors) {
  EXPECT_THROW(parse_sentence("forall x : E(x,y)"), ParseError);
  EXPECT_THROW(parse_sentence("forall x exists x : E(x,x)"), ParseError);
  EXPECT_THROW(parse_sentence("forall _d1 : E(_d1,_d1)"), ParseError);
  EXPECT_THROW(parse_sentence("forall x : E(x,x) &"), ParseError);
}

TEST(Parser, CommentsAndWhitespace) {
  PhSentence s = parse_sentence("# header\nforall x   # trailing\n exists y:E(x,y)\n");
  EXPECT_EQ(s, parse_sentence("forall x exists y : E(x,y)"));
}

TEST(Parser, PrintParseRoundTrip) {
  for (const char* text : {kThreeByFour, "exists x forall y : x = y", "forall x : true",
                           "forall x y exists z : R(x,y,z) & U(z) & x = y"}) {
    PhSentence s = parse_sentence(text);
    EXPECT_EQ(parse_sentence(to_string(s)), s) << text;
  }
}

TEST(Normalize, InsertsDummies) {
  PhSentence s = normalize_strict_alternation(
      parse_sentence("forall x z exists y : E(x,y) & E(y,z)"));
  EXPECT_EQ(to_string(s), "forall x exists _d1 forall z exists y : E(x,y) & E(y,z)");
  PhSentence e = normalize_strict_alternation(parse_sentence("exists y : E(y,y)"));
  EXPECT_EQ(to_string(e), "forall _d1 exists y : E(y,y)");
  PhSentence strict = parse_sentence("forall x exists y : E(x,y)");
  EXPECT_EQ(normalize_strict_alternation(strict), strict);
  EXPECT_EQ(strip_dummy_variables(s),
            parse_sentence("forall x z exists y : E(x,y) & E(y,z)"));
}

TEST(Classify, Shapes) {
  SentenceShape d = classify(parse_sentence("forall x exists y forall x2 exists y2 : x = x2"));
  EXPECT_TRUE(d.is_degenerate);
  SentenceShape p = classify(parse_sentence("forall x exists y : E(x,y)"));
  EXPECT_TRUE(p.is_pi2);
  EXPECT_EQ(p.universal_count, 1);
  EXPECT_EQ(p.existential_count, 1);
  EXPECT_EQ(p.depth, 1);
  SentenceShape s = classify(parse_sentence("exists x y : E(x,y)"));
  EXPECT_TRUE(s.is_sigma1);
  EXPECT_TRUE(classify(parse_sentence("exists y forall x : x = y")).is_degenerate);
  EXPECT_FALSE(classify(parse_sentence("forall x exists y : x = y")).is_degenerate);
  EXPECT_EQ(classify(parse_sentence("forall a exists b forall c exists d : E(a,d)")).depth, 2);
}

TEST(PropagateEqualities, Examples) {
  EXPECT_EQ(propagate_equalities(parse_sentence("forall x exists y : y = x & E(y,y)")),
            parse_sentence("forall x : E(x,x)"));
  EXPECT_EQ(propagate_equalities(parse_sentence("exists y z : y = z & E(y,z)")),
            parse_sentence("exists y : E(y,y)"));
  PhSentence plain = parse_sentence("forall x exists y : E(x,y)");
  EXPECT_EQ(propagate_equalities(plain), plain);
  EXPECT_THROW(propagate_equalities(parse_sentence("forall x y : x = y")), PreconditionError);
}

TEST(PropagateEqualities, PreservesTruthOnAllSmallDigraphs) {
  std::vector<Structure> models;
  for (int n = 1; n <= 3; ++n) {
    for (auto& s : testing::all_digraphs(n)) models.push_back(std::move(s));
  }
  testing::Rng rng(7);
  int checked = 0;
  while (checked < 60) {
    testing::SentenceParams p;
    p.max_vars = 4;
    p.equality = 0.4;
    PhSentence s = testing::random_sentence(rng, testing::digraph_signature(), p);
    if (!s.has_equality() || classify(s).is_degenerate) continue;
    ++checked;
    PhSentence t = propagate_equalities(s);
    EXPECT_FALSE(t.has_equality());
    for (const auto& a : models) {
      ASSERT_EQ(testing::brute_eval(a, s), testing::brute_eval(a, t))
          << to_string(s) << " vs " << to_string(t);
    }
  }
}

TEST(Normalize, PreservesTruth) {
  testing::Rng rng(11);
  for (int i = 0; i < 300; ++i) {
    testing::SentenceParams p;
    p.max_vars = 5;
    p.equality = 0.1;
    PhSentence s = testing::random_sentence(rng, testing::digraph_signature(), p);
    Structure a = testing::random_digraph(rng, std::uniform_int_distribution<int>(1, 3)(rng), 0.5);
    EXPECT_EQ(evaluate(a, s).value, evaluate(a, normalize_strict_alternation(s)).value)
        << to_string(s);
  }
}

TEST(SentenceStructure, ThreeByFourRoundTrip) {
  PhSentence s = parse_sentence(kThreeByFour);
  Structure d = sentence_to_structure(s);
  EXPECT_EQ(d.size(), 7);
  EXPECT_EQ(d.tuple_count(), 6u);
  EXPECT_EQ(d.constants(), (std::vector<int>{0, 1, 2}));
  PhSentence back = structure_to_sentence(d);
  EXPECT_EQ(back.prefix, s.prefix);
  auto key = [](const Atom& a) { return std::make_pair(a.relation, a.args); };
  auto atoms = [&](const PhSentence& p) {
    std::vector<std::pair<std::string, std::vector<std::string>>> out;
    for (const auto& a : p.matrix) out.push_back(key(a));
    std::sort(out.begin(), out.end());
    return out;
  };
  EXPECT_EQ(atoms(back), atoms(s));
}

TEST(SentenceStructure, SmallCases) {
  Structure d = sentence_to_structure(parse_sentence("forall x exists y : E(x,y)"));
  EXPECT_EQ(d.size(), 2);
  EXPECT_EQ(d.tuple_count(), 1u);
  EXPECT_EQ(d.signature().constant_count(), 1);
  Structure d2 = sentence_to_structure(parse_sentence("forall x1 x2 exists y : E(x1,y) & E(x2,y)"));
  EXPECT_EQ(d2.size(), 3);
  EXPECT_EQ(d2.tuple_count(), 2u);
  EXPECT_EQ(d2.signature().constant_count(), 2);
  EXPECT_THROW(sentence_to_structure(parse_sentence("exists x forall y : E(x,y)")), Error);
  EXPECT_THROW(sentence_to_structure(parse_sentence("forall x exists y : x = y")), Error);
}

TEST(SentenceStructure, Inverse) {
  Structure one(Signature({{"E", 2}}, 1), 1, {Relation(2, {})}, {0});
  EXPECT_EQ(to_string(structure_to_sentence(one)), "forall v0 : true");
  Structure collide(Signature({{"E", 2}}, 2), 1, {Relation(2, {})}, {0, 0});
  EXPECT_THROW(structure_to_sentence(collide), PreconditionError);
}

TEST(SentenceStructure, RoundTripRandomPi2) {
  testing::Rng rng(3);
  for (int i = 0; i < 300; ++i) {
    std::uniform_int_distribution<int> d(1, 3);
    const int u = d(rng), e = d(rng) - 1;
    PhSentence s;
    std::vector<std::string> vars;
    s.prefix.push_back({Quantifier::kForall, {}});
    for (int k = 0; k < u; ++k) {
      vars.push_back("x" + std::to_string(k));
      s.prefix[0].variables.push_back(vars.back());
    }
    if (e > 0) s.prefix.push_back({Quantifier::kExists, {}});
    for (int k = 0; k < e; ++k) {
      vars.push_back("y" + std::to_string(k));
      s.prefix[1].variables.push_back(vars.back());
    }
    std::uniform_int_distribution<int> pick(0, static_cast<int>(vars.size()) - 1);
    for (int k = 0; k < 3; ++k) {
      s.matrix.push_back(Atom::rel("E", {vars[static_cast<std::size_t>(pick(rng))],
                                         vars[static_cast<std::size_t>(pick(rng))]}));
    }
    Structure d1 = sentence_to_structure(s);
    PhSentence back = structure_to_sentence(d1);
    EXPECT_TRUE(sentence_to_structure(back, d1.signature()).same_as(d1)) << to_string(s);
  }
}

TEST(CanonicalQuery, Examples) {
  PhSentence k2 = canonical_query(clique(2));
  EXPECT_EQ(to_string(k2), "exists v0 v1 : E(v0,v1) & E(v1,v0)");
  EXPECT_EQ(to_string(canonical_query(edgeless(2))), "exists v0 v1 : true");
  PhSentence k3 = canonical_query(clique(3));
  EXPECT_EQ(k3.variable_count(), 3u);
  EXPECT_EQ(k3.matrix.size(), 6u);
}

TEST(Signatures, CheckAndInfer) {
  PhSentence s = parse_sentence("forall x exists y : E(x,y) & U(y)");
  Signature inferred = infer_signature(s);
  EXPECT_EQ(inferred.relation_count(), 2u);
  EXPECT_NO_THROW(check_signature(s, inferred));
  EXPECT_THROW(check_signature(s, Signature({{"E", 2}})), SignatureError);
  EXPECT_THROW(check_signature(s, Signature({{"E", 3}, {"U", 1}})), SignatureError);
  EXPECT_THROW(infer_signature(parse_sentence("exists x : E(x,x) & E(x)")), SignatureError);
}

}  // namespace
}  // namespace qcsp
