#include "qcsp/containment.hpp"

#include <algorithm>

#include "qcsp/errors.hpp"
#include "qcsp/game.hpp"
#include "qcsp/hom.hpp"

namespace qcsp {

const char* to_string(Outcome o) {
  switch (o) {
    case Outcome::kYes: return "yes";
    case Outcome::kNo: return "no";
    case Outcome::kInconclusive: return "inconclusive";
  }
  return "?";
}

const char* to_string(BoundKind k) {
  switch (k) {
    case BoundKind::kCardinality: return "cardinality";
    case BoundKind::kOrbit: return "orbit";
    case BoundKind::kFixed: return "fixed";
  }
  return "?";
}

std::vector<int> lift_witness(const std::vector<int>& mapping, int base_size) {
  std::vector<int> out(mapping.size() * static_cast<std::size_t>(base_size));
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = mapping[i / static_cast<std::size_t>(base_size)];
  }
  return out;
}

namespace {

void require_containment_inputs(const Structure& a, const Structure& b) {
  if (a.signature().relations() != b.signature().relations()) {
    throw SignatureError("containment between structures of different signatures");
  }
  if (a.signature().constant_count() != 0 || b.signature().constant_count() != 0) {
    throw PreconditionError("containment is defined for constant-free structures");
  }
  if (a.size() == 0 || b.size() == 0) {
    throw PreconditionError("containment needs nonempty structures");
  }
}

// Rows are |B|-tuples over A read off a surjection's preimages of the
// elements of B, one row per coordinate. A row that is an endomorphic image of
// another is redundant, so only maximal rows need to be considered.
struct RowSearch {
  std::vector<std::vector<int>> rows;
  std::int64_t total = 0;
  std::optional<std::vector<int>> full;  // witness using every row
};

constexpr std::int64_t kMaxRows = 4096;
constexpr std::int64_t kMaxEndoCandidates = 200'000;
constexpr std::int64_t kMaxSubsetsPerExponent = 20'000;

std::vector<std::vector<int>> endomorphisms(const Structure& a) {
  const int n = a.size();
  std::vector<std::vector<int>> out;
  if (!checked_pow(n, n, kMaxEndoCandidates)) {
    // Too many maps to scan: automorphisms alone still give a valid reduction.
    try {
      return automorphisms(a);
    } catch (const ResourceError&) {
      std::vector<int> id(static_cast<std::size_t>(n));
      for (int i = 0; i < n; ++i) id[static_cast<std::size_t>(i)] = i;
      return {id};
    }
  }
  std::vector<int> map(static_cast<std::size_t>(n), 0);
  while (true) {
    if (is_homomorphism(a, a, map)) out.push_back(map);
    int k = n - 1;
    while (k >= 0 && ++map[static_cast<std::size_t>(k)] == n) map[static_cast<std::size_t>(k--)] = 0;
    if (k < 0) break;
  }
  return out;
}

std::optional<RowSearch> reduce_rows(const Structure& a, int nb) {
  auto total = checked_pow(a.size(), nb, kMaxRows);
  if (!total) return std::nullopt;
  const auto count = static_cast<std::size_t>(*total);
  const auto endos = endomorphisms(a);
  auto encode = [&](const std::vector<int>& row) {
    std::size_t code = 0;
    for (int x : row) code = code * static_cast<std::size_t>(a.size()) + static_cast<std::size_t>(x);
    return code;
  };
  // below[s] lists the rows reachable from row s.
  std::vector<std::vector<bool>> below(count, std::vector<bool>(count, false));
  std::vector<int> image(static_cast<std::size_t>(nb));
  for (std::size_t s = 0; s < count; ++s) {
    auto row = power_coordinates(static_cast<std::int64_t>(s), a.size(), nb);
    for (const auto& e : endos) {
      for (int k = 0; k < nb; ++k) {
        image[static_cast<std::size_t>(k)] = e[static_cast<std::size_t>(row[static_cast<std::size_t>(k)])];
      }
      below[s][encode(image)] = true;
    }
  }
  RowSearch out;
  out.total = *total;
  for (std::size_t s = 0; s < count; ++s) {
    bool keep = true;
    for (std::size_t t = 0; t < count && keep; ++t) {
      if (t == s || !below[t][s]) continue;
      // t reaches s: s survives only if it reaches t back and comes first.
      if (!below[s][t] || t < s) keep = false;
    }
    if (keep) out.rows.push_back(power_coordinates(static_cast<std::int64_t>(s), a.size(), nb));
  }
  return out;
}

// A surjection power(a, |chosen|) ->> b sending, for each element y of b, the
// tuple whose k-th coordinate is row chosen[k] at y to y. With targets, only
// the listed elements are pinned (row positions follow the list).
std::optional<std::vector<int>> try_rows(const Structure& a, const Structure& b,
                                         const RowSearch& rows, const std::vector<int>& chosen,
                                         const ResourceLimits& limits,
                                         const Structure* prebuilt = nullptr,
                                         const std::vector<int>* targets = nullptr) {
  const int r = static_cast<int>(chosen.size());
  std::optional<Structure> built;
  if (!prebuilt) built = power(a, r, limits);
  const Structure& p = prebuilt ? *prebuilt : *built;
  HomOptions o;
  o.partial.assign(static_cast<std::size_t>(p.size()), std::nullopt);
  const int width = targets ? static_cast<int>(targets->size()) : b.size();
  for (int j = 0; j < width; ++j) {
    const int y = targets ? (*targets)[static_cast<std::size_t>(j)] : j;
    std::int64_t index = 0;
    for (int k : chosen) {
      index = index * a.size() + rows.rows[static_cast<std::size_t>(k)][static_cast<std::size_t>(j)];
    }
    auto& slot = o.partial[static_cast<std::size_t>(index)];
    if (slot && *slot != y) return std::nullopt;
    slot = y;
  }
  o.max_nodes = limits.max_search_nodes;
  auto w = find_hom(p, b, o);
  if (!w) return std::nullopt;
  return std::move(w->mapping);
}

// Whether power(a, r) is small enough for an optional shortcut check.
bool cheap_power(const Structure& a, int r, const ResourceLimits& limits) {
  constexpr std::int64_t kShortcutTuples = 1'000'000;
  if (!checked_pow(a.size(), r, limits.max_elements)) return false;
  std::int64_t tuples = 0;
  for (const auto& rel : a.relations()) {
    auto t = checked_pow(static_cast<std::int64_t>(rel.size()), r, kShortcutTuples);
    if (!t) return false;
    tuples += *t;
  }
  return tuples <= kShortcutTuples;
}

// Repeats the last coordinate until the mapping lives on power(a, r).
std::vector<int> lift_to(std::vector<int> mapping, int from, int r, int base) {
  for (int k = from; k < r; ++k) mapping = lift_witness(mapping, base);
  return mapping;
}

bool next_subset(std::vector<int>& s, int n) {
  const int k = static_cast<int>(s.size());
  int i = k - 1;
  while (i >= 0 && s[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++s[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j) s[static_cast<std::size_t>(j)] = s[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

// Some surjection power(a, r) ->> b, or none.
std::optional<std::vector<int>> surjection_at(const Structure& a, const Structure& b, int r,
                                              const RowSearch* rows,
                                              const ResourceLimits& limits) {
  if (rows) {
    const int n = static_cast<int>(rows->rows.size());
    if (r >= n && rows->full) return lift_to(*rows->full, n, r, a.size());
    // Any r rows can be taken distinct and reduced, so r-subsets suffice.
    std::int64_t binom = 1;
    for (int i = 0; i < r && binom <= kMaxSubsetsPerExponent; ++i) binom = binom * (n - i) / (i + 1);
    if (r < n && binom <= kMaxSubsetsPerExponent) {
      Structure p = power(a, r, limits);
      std::vector<int> chosen(static_cast<std::size_t>(r));
      for (int i = 0; i < r; ++i) chosen[static_cast<std::size_t>(i)] = i;
      do {
        if (auto m = try_rows(a, b, *rows, chosen, limits, &p)) return m;
      } while (next_subset(chosen, n));
      return std::nullopt;
    }
  }
  Structure p = power(a, r, limits);
  HomOptions o;
  o.surjective = true;
  o.max_nodes = limits.max_search_nodes;
  auto w = find_hom(p, b, o);
  if (!w) return std::nullopt;
  return std::move(w->mapping);
}

}  // namespace

ContainmentVerdict decide_containment(const Structure& a, const Structure& b,
                                      const ContainmentOptions& options) {
  require_containment_inputs(a, b);
  if (options.start_exponent < 1) {
    throw PreconditionError("start exponent must be at least 1");
  }
  ContainmentVerdict v;

  const std::int64_t cardinality =
      checked_pow(a.size(), b.size()).value_or(INT64_MAX);
  std::optional<std::int64_t> orbit;
  if (options.bound_mode == BoundMode::kAuto || options.bound_mode == BoundMode::kOrbit) {
    try {
      std::uint64_t o = orbit_count(a, b.size(), options.automorphism);
      orbit = static_cast<std::int64_t>(std::min<std::uint64_t>(o, INT64_MAX));
    } catch (const ResourceError& e) {
      v.diagnostics.push_back(std::string("orbit bound unavailable: ") + e.what());
    }
  }
  switch (options.bound_mode) {
    case BoundMode::kFixed:
      if (options.fixed_bound < 1) throw PreconditionError("fixed bound must be positive");
      v.bound = options.fixed_bound;
      v.bound_kind = BoundKind::kFixed;
      break;
    case BoundMode::kCardinality:
      v.bound = cardinality;
      v.bound_kind = BoundKind::kCardinality;
      break;
    case BoundMode::kOrbit:
    case BoundMode::kAuto:
      if (orbit && *orbit < cardinality) {
        v.bound = *orbit;
        v.bound_kind = BoundKind::kOrbit;
      } else {
        v.bound = cardinality;
        v.bound_kind = BoundKind::kCardinality;
      }
      break;
  }

  // A embeds diagonally in every power, so A^r -> B forces A -> B.
  if (!find_hom(a, b)) {
    v.outcome = Outcome::kNo;
    v.diagnostics.push_back("no homomorphism from A to B, so none from any power");
    return v;
  }

  // Every pair of elements of B must be covered by some power of A.
  if (b.size() > 2) {
    if (auto pair_rows = reduce_rows(a, 2)) {
      std::vector<int> all(pair_rows->rows.size());
      for (std::size_t i = 0; i < all.size(); ++i) all[i] = static_cast<int>(i);
      if (cheap_power(a, static_cast<int>(all.size()), options.limits)) {
        try {
          Structure p = power(a, static_cast<int>(all.size()), options.limits);
          for (int y1 = 0; y1 < b.size(); ++y1) {
            for (int y2 = y1 + 1; y2 < b.size(); ++y2) {
              std::vector<int> pair{y1, y2};
              if (!try_rows(a, b, *pair_rows, all, options.limits, &p, &pair)) {
                v.outcome = Outcome::kNo;
                v.diagnostics.push_back("no power of A maps onto a set containing " +
                                        b.label(y1) + " and " + b.label(y2));
                return v;
              }
            }
          }
        } catch (const ResourceError& e) {
          v.diagnostics.push_back(std::string("pair check skipped: ") + e.what());
        }
      }
    }
  }

  std::optional<RowSearch> rows = reduce_rows(a, b.size());
  if (rows) {
    v.diagnostics.push_back(std::to_string(rows->rows.size()) + " of " +
                            std::to_string(rows->total) + " rows after endomorphism reduction");
    // With every reduced row present the question is a single extension problem.
    const int full = static_cast<int>(rows->rows.size());
    if (cheap_power(a, full, options.limits)) {
      std::vector<int> all(static_cast<std::size_t>(full));
      for (int i = 0; i < full; ++i) all[static_cast<std::size_t>(i)] = i;
      bool settled = true;
      try {
        rows->full = try_rows(a, b, *rows, all, options.limits);
      } catch (const ResourceError& e) {
        settled = false;
        v.diagnostics.push_back(std::string("full row check skipped: ") + e.what());
      }
      if (settled && !rows->full) {
        v.outcome = Outcome::kNo;
        v.diagnostics.push_back("no surjection from A^" + std::to_string(full) +
                                " with the reduced rows, so none from any power");
        return v;
      }
    }
  }

  for (std::int64_t r = options.start_exponent; r <= v.bound; ++r) {
    if (options.cap && r > *options.cap) {
      v.outcome = Outcome::kInconclusive;
      v.cap = *options.cap;
      v.diagnostics.push_back("exponent cap " + std::to_string(*options.cap) +
                              " reached before the bound " + std::to_string(v.bound));
      return v;
    }
    auto elements = checked_pow(a.size(), r, options.limits.max_elements);
    if (!elements) {
      v.outcome = Outcome::kInconclusive;
      v.cap = r - 1;
      v.diagnostics.push_back("power " + std::to_string(r) + " exceeds the element cap");
      return v;
    }
    // A power smaller than b cannot cover it.
    if (*elements < b.size()) continue;
    std::optional<std::vector<int>> found;
    try {
      found = surjection_at(a, b, static_cast<int>(r), rows ? &*rows : nullptr, options.limits);
    } catch (const ResourceError& e) {
      v.outcome = Outcome::kInconclusive;
      v.cap = r - 1;
      v.diagnostics.push_back(std::string("power ") + std::to_string(r) + ": " + e.what());
      return v;
    }
    if (found) {
      v.outcome = Outcome::kYes;
      v.exponent = static_cast<int>(r);
      HomWitness w;
      w.mapping = std::move(*found);
      w.surjective = true;
      v.witness = std::move(w);
      return v;
    }
  }
  v.outcome = Outcome::kNo;
  return v;
}

EquivalenceResult equivalent(const Structure& a, const Structure& b,
                             const ContainmentOptions& options) {
  EquivalenceResult r;
  r.forward = decide_containment(a, b, options);
  if (r.forward.outcome == Outcome::kNo) {
    r.value = Tribool::kFalse;
    r.backward.diagnostics.push_back("not computed: forward containment fails");
    return r;
  }
  r.backward = decide_containment(b, a, options);
  if (r.backward.outcome == Outcome::kNo) {
    r.value = Tribool::kFalse;
  } else if (r.forward.outcome == Outcome::kYes && r.backward.outcome == Outcome::kYes) {
    r.value = Tribool::kTrue;
  } else {
    r.value = Tribool::kUnknown;
  }
  return r;
}

std::optional<PhSentence> distinguishing_sentence(const Structure& a,
                                                  const Structure& b, int m,
                                                  const ResourceLimits& limits) {
  Structure sp = superprodukt(a, m, limits);
  PhSentence phi = structure_to_sentence(sp);
  if (!evaluate(a, phi).value) return std::nullopt;
  if (evaluate(b, phi).value) return std::nullopt;
  return phi;
}

bool csp_containment(const Structure& a, const Structure& b) {
  return find_hom(a, b).has_value();
}

}  // namespace qcsp
