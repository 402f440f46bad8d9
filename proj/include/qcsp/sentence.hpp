#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcsp/structure.hpp"

namespace qcsp {

enum class Quantifier { kForall, kExists };

struct QuantifierBlock {
  Quantifier quantifier = Quantifier::kForall;
  std::vector<std::string> variables;

  bool operator==(const QuantifierBlock&) const = default;
};

// Half-open byte range into the source text; line/column of its start.
struct SourceSpan {
  int begin = 0;
  int end = 0;
  int line = 0;
  int column = 0;
};

struct Atom {
  enum class Kind { kRelation, kEquality };

  Kind kind = Kind::kRelation;
  std::string relation;            // empty for equalities
  std::vector<std::string> args;   // two entries for equalities
  SourceSpan span;

  static Atom rel(std::string name, std::vector<std::string> args);
  static Atom eq(std::string x, std::string y);

  bool is_equality() const { return kind == Kind::kEquality; }
  // Spans are not compared.
  bool operator==(const Atom& o) const {
    return kind == o.kind && relation == o.relation && args == o.args;
  }
};

// Prenex positive Horn sentence: prefix and a conjunction of atoms. An empty
// matrix is the constant true.
struct PhSentence {
  std::vector<QuantifierBlock> prefix;
  std::vector<Atom> matrix;

  bool operator==(const PhSentence&) const = default;

  struct Bound {
    Quantifier quantifier;
    std::string name;
  };
  // Prefix flattened into single variables, outermost first.
  std::vector<Bound> flat_prefix() const;
  std::size_t variable_count() const;
  bool has_equality() const;
};

struct SentenceShape {
  int universal_count = 0;
  int existential_count = 0;
  // Maximal universal blocks, with a leading existential block counted as one
  // (it acquires a dummy universal under strict alternation).
  int depth = 0;
  bool is_pi2 = false;
  bool is_sigma1 = false;
  bool is_degenerate = false;
  bool has_equality = false;
};

// Checks binding: every matrix variable bound, no variable bound twice.
// Throws ParseError.
void validate(const PhSentence& s);

// Checks relation atoms against `sig`. Throws SignatureError.
void check_signature(const PhSentence& s, const Signature& sig);

// The relations used by s, in order of first occurrence.
Signature infer_signature(const PhSentence& s);

SentenceShape classify(const PhSentence& s);

// Strict alternation forall x1 exists y1 ... with singleton blocks. Dummies are
// named _d1, _d2, ... and never occur in the matrix.
PhSentence normalize_strict_alternation(const PhSentence& s);

// Removes dummies introduced by normalize_strict_alternation (any variable with
// the reserved prefix that the matrix does not use) and merges blocks.
PhSentence strip_dummy_variables(const PhSentence& s);

// Removes every equality by substituting each equality class by its earliest
// bound variable. Throws PreconditionError on degenerate input.
PhSentence propagate_equalities(const PhSentence& s);

// D_phi: elements are the variables in prefix order, tuples are the atoms,
// c_i names the i-th universal. Requires a Pi_2, equality-free sentence.
Structure sentence_to_structure(const PhSentence& s);
// Same, over a given signature (which must contain every relation used).
Structure sentence_to_structure(const PhSentence& s, const Signature& sig);

// phi_D: universals for constant-bearing elements (ordered by constant index),
// existentials for the rest. Throws PreconditionError when two constants share
// an element or there are no constants.
PhSentence structure_to_sentence(const Structure& d);

// Sigma_1 sentence with one existential per element and one atom per fact.
PhSentence canonical_query(const Structure& a);

// Reserved prefix for generated variable names.
inline constexpr const char* kDummyPrefix = "_d";

}  // namespace qcsp
