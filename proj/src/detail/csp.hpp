#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "qcsp/structure.hpp"

namespace qcsp::detail {

// Lookup tables over the relations of a fixed target structure.
class TargetIndex {
 public:
  explicit TargetIndex(const Structure& target);

  const Structure& target() const { return *target_; }

  // Indices (into relation r) of tuples carrying value v at position p.
  std::span<const std::uint32_t> with(std::size_t r, int p, int v) const;
  bool contains(std::size_t r, std::span<const int> t) const;

 private:
  struct PerRelation {
    std::vector<std::uint32_t> offsets;  // (p * n + v) -> start
    std::vector<std::uint32_t> entries;
    std::vector<std::uint64_t> dense;    // bitmap over n^arity when small
  };

  const Structure* target_;
  std::vector<PerRelation> rels_;
};

struct Constraint {
  std::size_t relation;
  std::vector<int> scope;
};

struct CspProblem {
  int num_vars = 0;
  const TargetIndex* index = nullptr;
  std::vector<Constraint> constraints;
  // Per variable allowed values; an empty outer vector means all values, an
  // empty inner optional means all values for that variable.
  std::vector<std::optional<std::vector<int>>> domains;
  bool surjective = false;
  std::int64_t max_nodes = 0;  // 0: unlimited; otherwise ResourceError
};

// Depth-first search with forward checking and generalized arc consistency.
// Variables are tried in a fixed static order (singleton domains, then
// descending degree, then index) and values ascending, so the result is the
// least solution in that order.
std::optional<std::vector<int>> solve(const CspProblem& problem);

// The static order used by solve().
std::vector<int> variable_order(const CspProblem& problem);

}  // namespace qcsp::detail
