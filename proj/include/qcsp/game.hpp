#pragma once

#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "qcsp/sentence.hpp"
#include "qcsp/structure.hpp"

namespace qcsp {

// Existential's choices keyed by (prefix position, values of all earlier
// variables in prefix order).
using Strategy = std::map<std::pair<int, std::vector<int>>, int>;

struct GameResult {
  bool value = false;
  std::optional<Strategy> strategy;
  std::size_t memo_entries = 0;
};

struct EvaluateOptions {
  bool want_strategy = false;
  // Memo table cap; past it, entries are no longer added.
  std::size_t max_memo = 5'000'000;
};

// Model-checking game on a finite structure. Throws SignatureError on unknown
// relations and PreconditionError when a nonempty prefix meets an empty domain.
GameResult evaluate(const Structure& a, const PhSentence& s,
                    const EvaluateOptions& options = {});

// Replays `strategy` against every line of Universal play; true iff every
// line ends with the matrix satisfied.
bool verify_strategy(const Structure& a, const PhSentence& s,
                     const Strategy& strategy);

// Pi_2 shortcut: find_hom(D_phi, superprodukt(a, m)) with constants respected,
// m the number of universals.
bool evaluate_pi2_via_superprodukt(const Structure& a, const PhSentence& s,
                                   const ResourceLimits& limits = {});

}  // namespace qcsp
