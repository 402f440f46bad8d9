#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qcsp/hom.hpp"
#include "qcsp/sentence.hpp"
#include "qcsp/structure.hpp"

namespace qcsp {

enum class BoundMode { kAuto, kOrbit, kCardinality, kFixed };

struct ContainmentOptions {
  // Largest exponent the caller is willing to try; nullopt means no cap.
  std::optional<std::int64_t> cap;
  BoundMode bound_mode = BoundMode::kAuto;
  std::int64_t fixed_bound = 0;  // used with kFixed
  int start_exponent = 1;
  ResourceLimits limits;
  AutomorphismOptions automorphism;
};

enum class Outcome { kYes, kNo, kInconclusive };

enum class BoundKind { kCardinality, kOrbit, kFixed };

struct ContainmentVerdict {
  Outcome outcome = Outcome::kInconclusive;
  int exponent = 0;                   // the r of a Yes
  std::optional<HomWitness> witness;  // surjection power(a, r) ->> b
  std::int64_t bound = 0;             // theoretical bound on r
  BoundKind bound_kind = BoundKind::kCardinality;
  std::int64_t cap = 0;               // last exponent tried when inconclusive
  std::vector<std::string> diagnostics;
};

// QCSP(a) contained in QCSP(b): tries r = start, start+1, ... for a
// surjective homomorphism power(a, r) ->> b, up to the bound. Preimage rows
// are reduced modulo endomorphisms of a; when few enough remain, each r is
// decided by pinning columns instead of a generic surjective search.
ContainmentVerdict decide_containment(const Structure& a, const Structure& b,
                                      const ContainmentOptions& options = {});

enum class Tribool { kFalse, kTrue, kUnknown };

struct EquivalenceResult {
  Tribool value = Tribool::kUnknown;
  ContainmentVerdict forward;   // a in b
  ContainmentVerdict backward;  // b in a
};

EquivalenceResult equivalent(const Structure& a, const Structure& b,
                             const ContainmentOptions& options = {});

// phi of superprodukt(a, m), returned only when it holds on a and fails on b.
std::optional<PhSentence> distinguishing_sentence(const Structure& a,
                                                  const Structure& b, int m,
                                                  const ResourceLimits& limits = {});

// CSP(a) contained in CSP(b) iff a -> b.
bool csp_containment(const Structure& a, const Structure& b);

// Turns a surjection power(a, r) ->> b into one from power(a, r+1) by
// composing with the projection that drops the last coordinate.
std::vector<int> lift_witness(const std::vector<int>& mapping, int base_size);

const char* to_string(Outcome o);
const char* to_string(BoundKind k);

}  // namespace qcsp
