#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "qcsp/sentence.hpp"
#include "qcsp/structure.hpp"

namespace qcsp {

struct SkolemFunction {
  std::string name;      // f_<variable>
  std::string variable;  // the existential it replaces
  int arity = 0;         // universals bound before it
};

// Argument of a quantified atom: a universal variable or f(x_1, ..., x_arity)
// applied to the first `arity` universals.
struct SkolemArg {
  bool is_function = false;
  int index = 0;  // universal index, or function index
};

struct QuantifiedAtom {
  std::string relation;
  std::vector<SkolemArg> args;
};

struct SkolemForm {
  std::vector<std::string> universals;
  std::vector<SkolemFunction> functions;
  std::vector<QuantifiedAtom> atoms;
  Signature signature;
};

// Closed term over constants c1..cl and Skolem functions. Immutable, shares
// subterms.
class SkolemTerm {
 public:
  static SkolemTerm constant(int index);  // 1-based
  static SkolemTerm apply(int function, std::vector<SkolemTerm> args);

  bool is_constant() const { return node_->constant > 0; }
  int constant_index() const { return node_->constant; }
  int function() const { return node_->function; }
  const std::vector<SkolemTerm>& args() const { return node_->args; }
  int rank() const { return node_->rank; }
  // Bit i-1 set iff c_i occurs.
  std::uint64_t support() const { return node_->support; }

  // Order by rank, then constants by index, then function, then arguments.
  friend bool operator<(const SkolemTerm& a, const SkolemTerm& b);
  friend bool operator==(const SkolemTerm& a, const SkolemTerm& b);
  friend bool operator!=(const SkolemTerm& a, const SkolemTerm& b) { return !(a == b); }

  std::string to_string(const SkolemForm* form = nullptr) const;

 private:
  struct Node {
    int constant = 0;
    int function = -1;
    std::vector<SkolemTerm> args;
    int rank = 0;
    std::uint64_t support = 0;
  };
  explicit SkolemTerm(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
  std::shared_ptr<const Node> node_;
};

// t[old/replacement], replacing every occurrence of `old`.
SkolemTerm substitute(const SkolemTerm& t, const SkolemTerm& old,
                      const SkolemTerm& replacement);
// Renames constants: c_i becomes c_{perm[i-1]+1}.
SkolemTerm permute_constants(const SkolemTerm& t, const std::vector<int>& perm);

struct Fact {
  std::size_t relation;
  std::vector<int> args;  // term indices

  auto operator<=>(const Fact&) const = default;
};

// T^m_phi(C_l): all terms of rank <= m and every instantiated quantified atom
// whose argument terms all have rank <= m.
struct Truncation {
  SkolemForm form;
  int l = 0;
  int m = 0;
  std::vector<SkolemTerm> terms;  // sorted by SkolemTerm order
  std::vector<Fact> facts;        // sorted, unique

  std::optional<int> index_of(const SkolemTerm& t) const;
  bool has_fact(std::size_t relation, const std::vector<int>& args) const;
  // Terms as labelled elements; signature of the form without constants.
  Structure to_structure() const;
};

// General prenex is accepted. A leading existential gets a dummy universal in
// front so every Skolem function has arity >= 1. Throws on equality.
SkolemForm skolemize(const PhSentence& phi);

// |T^m_phi(C_l)| from the exact rank recurrence, or nullopt past `limit`.
std::optional<std::int64_t> truncation_size(const SkolemForm& form, int l, int m,
                                            std::int64_t limit = INT64_MAX);

struct TruncationLimits {
  std::int64_t max_terms = 100'000;
  std::int64_t max_facts = 20'000'000;
};

Truncation build_truncation(const PhSentence& phi, int l, int m,
                            const TruncationLimits& limits = {});
Truncation build_truncation(const SkolemForm& form, int l, int m,
                            const TruncationLimits& limits = {});

// Existential's moves keyed by the terms played so far (prefix order).
using CcStrategy = std::map<std::vector<int>, int>;

struct RelCcOptions {
  std::int64_t max_states = 10'000'000;
  bool want_strategy = false;
};

struct RelCcResult {
  bool win = false;
  std::int64_t states = 0;
  std::optional<CcStrategy> strategy;
};

// The psi-rel-cc game on a truncation: Universal plays constants c1..cl,
// Existential plays terms whose constants were already played by Universal.
// psi is normalized to strict alternation first. Throws PreconditionError if
// psi has more universals than l, ResourceError past max_states.
RelCcResult solve_rel_cc_game(const Truncation& t, const PhSentence& psi,
                              const RelCcOptions& options = {});

// Replays a strategy on every Universal line (all constants, no symmetry).
bool verify_cc_strategy(const Truncation& t, const PhSentence& psi,
                        const CcStrategy& strategy);

enum class EntailmentVerdict { kYes, kNo, kResourceExceeded };

struct EntailmentOptions {
  TruncationLimits truncation;
  std::int64_t max_states = 10'000'000;
  bool want_strategy = false;
};

struct EntailmentResult {
  EntailmentVerdict verdict = EntailmentVerdict::kResourceExceeded;
  int l = 0;
  int rank_bound = 0;       // m*
  int rank_reached = -1;    // last m examined
  bool degenerate = false;
  std::optional<Truncation> truncation;  // the one deciding the verdict
  std::optional<CcStrategy> strategy;
  PhSentence normalized_psi;
  std::vector<std::string> diagnostics;
};

// |= phi -> psi.
EntailmentResult decide_entailment(const PhSentence& phi, const PhSentence& psi,
                                   const EntailmentOptions& options = {});

// All one-element structures over sig: each relation empty or full.
std::vector<Structure> enumerate_one_element_models(const Signature& sig);

const char* to_string(EntailmentVerdict v);

}  // namespace qcsp
