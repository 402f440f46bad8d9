#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "qcsp/structure.hpp"

namespace qcsp {

struct HomWitness {
  std::vector<int> mapping;  // element of A -> element of B
  bool surjective = false;
  bool constant_preserving = false;
};

struct HomOptions {
  // Fixed images; nullopt leaves an element free. Empty means no fixing.
  std::vector<std::optional<int>> partial;
  bool respect_constants = false;
  bool surjective = false;
  // Per element allowed images (empty outer vector: no restriction).
  std::vector<std::optional<std::vector<int>>> allowed;
  // Search nodes before giving up with ResourceError; 0 means unlimited.
  std::int64_t max_nodes = 0;
};

// Least homomorphism in the solver's static variable order (elements by
// descending degree, then index), values ascending.
std::optional<HomWitness> find_hom(const Structure& a, const Structure& b,
                                   const HomOptions& options = {});

std::optional<HomWitness> find_surjective_hom(const Structure& a,
                                              const Structure& b,
                                              bool respect_constants = false);

// Straight re-check of every tuple; independent of the search code.
bool is_homomorphism(const Structure& a, const Structure& b,
                     const std::vector<int>& mapping,
                     bool respect_constants = false);
bool is_surjective(const std::vector<int>& mapping, int target_size);

struct AutomorphismOptions {
  int max_size = 8;
};

// Full automorphism group, permutations in lexicographic order.
std::vector<std::vector<int>> automorphisms(const Structure& a,
                                            const AutomorphismOptions& options = {});

// Orbits of n-tuples under Aut(a), by Burnside's lemma.
std::uint64_t orbit_count(const Structure& a, int n,
                          const AutomorphismOptions& options = {});

// A homomorphism f: a^3 -> a with f(x,x,y) = f(x,y,x) = f(y,x,x) = x, indexed
// like power(a, 3).
std::optional<std::vector<int>> find_majority_polymorphism(
    const Structure& a, const ResourceLimits& limits = {});

}  // namespace qcsp
