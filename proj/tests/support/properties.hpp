#pragma once

// Randomized and exhaustive property suites shared by the gtest suite and the
// acceptance runner. Each returns how many cases it checked and how many
// failed; randomized suites are seeded and deterministic.

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

namespace qcsp::testing {

struct PropertyResult {
  std::string name;
  std::int64_t cases = 0;
  std::int64_t failures = 0;
  std::int64_t skipped = 0;  // instances beyond resource caps
  std::string first_failure;

  void fail(const std::string& what) {
    if (failures++ == 0) first_failure = what;
  }
};

inline constexpr std::uint32_t kPropertySeed = 20240611;

PropertyResult surjection_preserves_sentences(std::uint32_t seed, int cases);
PropertyResult square_preserves_sentences(std::uint32_t seed, int cases);
PropertyResult pi2_superprodukt_matches_game();  // exhaustive
PropertyResult truncation_size_bound(std::uint32_t seed, int cases);
PropertyResult truncation_nesting(std::uint32_t seed, int cases);
PropertyResult constant_substitution_closure(std::uint32_t seed, int cases);
PropertyResult constant_permutation_closure(std::uint32_t seed, int cases);
PropertyResult rank_substitution_spot_check(std::uint32_t seed, int cases);
PropertyResult conservative_hom_into_truncation(std::uint32_t seed, int cases);
PropertyResult three_colouring_reduction();  // exhaustive up to 5 vertices
PropertyResult entailment_sound_on_small_models(std::uint32_t seed, int cases);

struct PropertySuite {
  std::string name;
  std::int64_t min_cases;
  std::function<PropertyResult()> run;
};

// The suites the acceptance gate requires, with their default sizes.
std::vector<PropertySuite> acceptance_suites();

}  // namespace qcsp::testing
