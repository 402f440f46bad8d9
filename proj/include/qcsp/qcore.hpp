#pragma once

#include <optional>
#include <string>
#include <vector>

#include "qcsp/containment.hpp"
#include "qcsp/structure.hpp"

namespace qcsp {

// A weak substructure given by kept elements and kept tuples, both in the
// indices of the original structure.
struct SubstructureSpec {
  std::vector<int> elements;
  std::vector<std::vector<int>> tuples;  // flat, per relation
};

struct RejectedCandidate {
  SubstructureSpec spec;
  // "hom" (no homomorphism from the input), "sentence" (a distinguishing
  // sentence), "containment" (a No verdict), or "inconclusive".
  std::string reason;
  std::optional<PhSentence> sentence;
  bool failed_forward = false;  // input not contained in candidate
};

struct QcoreOptions {
  int max_input_size = 5;
  std::size_t max_candidates = 1'000'000;
  ContainmentOptions containment;
};

struct QcoreReport {
  bool found = false;
  bool inconclusive = false;
  Structure core;
  SubstructureSpec spec;
  bool is_induced = false;
  ContainmentVerdict forward;   // input in core
  ContainmentVerdict backward;  // core in input
  // Immediate weakenings of the core (one element or one tuple dropped).
  std::vector<RejectedCandidate> minimality;
  std::size_t candidates_examined = 0;
  std::vector<std::string> diagnostics;
};

// Enumerates weak substructures by (element count, tuple count, lexicographic)
// and returns the first one pH-equivalent to a.
QcoreReport find_qcore(const Structure& a, const QcoreOptions& options = {});

// Whether power(expansion(h, [nonloop, dominating]), 2) surjects onto
// expansion(h, [dominating, dominating]) preserving constants.
struct IdempotencyResult {
  bool holds = false;
  std::optional<HomWitness> witness;
  Structure square;
  Structure target;
};

IdempotencyResult check_idempotency_obstruction(const Structure& h, int nonloop,
                                                int dominating,
                                                const ResourceLimits& limits = {});

}  // namespace qcsp
