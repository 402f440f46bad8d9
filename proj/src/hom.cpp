#include "qcsp/hom.hpp"

#include <algorithm>
#include <numeric>

#include "detail/csp.hpp"
#include "qcsp/errors.hpp"

namespace qcsp {

namespace {

void require_compatible(const Structure& a, const Structure& b,
                        bool respect_constants) {
  const auto& sa = a.signature();
  const auto& sb = b.signature();
  if (sa.relations() != sb.relations()) {
    throw SignatureError("homomorphism between structures of different signatures");
  }
  if (respect_constants && sa.constant_count() != sb.constant_count()) {
    throw SignatureError("constant counts differ");
  }
}

}  // namespace

std::optional<HomWitness> find_hom(const Structure& a, const Structure& b,
                                   const HomOptions& options) {
  require_compatible(a, b, options.respect_constants);
  const int n = a.size();
  detail::TargetIndex index(b);
  detail::CspProblem problem;
  problem.num_vars = n;
  problem.index = &index;
  problem.surjective = options.surjective;
  problem.max_nodes = options.max_nodes;
  for (std::size_t r = 0; r < a.relations().size(); ++r) {
    const Relation& rel = a.relation(r);
    for (std::size_t t = 0; t < rel.size(); ++t) {
      auto tup = rel.tuple(t);
      problem.constraints.push_back({r, std::vector<int>(tup.begin(), tup.end())});
    }
  }

  std::vector<std::optional<std::vector<int>>> domains(static_cast<std::size_t>(n));
  bool restricted = false;
  auto restrict_to = [&](int v, const std::vector<int>& values) {
    auto& d = domains[static_cast<std::size_t>(v)];
    if (!d) {
      d = values;
    } else {
      std::vector<int> keep;
      for (int x : *d) {
        if (std::find(values.begin(), values.end(), x) != values.end()) keep.push_back(x);
      }
      d = std::move(keep);
    }
    restricted = true;
  };
  if (!options.allowed.empty()) {
    if (static_cast<int>(options.allowed.size()) != n) {
      throw PreconditionError("allowed list has the wrong length");
    }
    for (int v = 0; v < n; ++v) {
      if (options.allowed[static_cast<std::size_t>(v)]) {
        restrict_to(v, *options.allowed[static_cast<std::size_t>(v)]);
      }
    }
  }
  if (!options.partial.empty()) {
    if (static_cast<int>(options.partial.size()) != n) {
      throw PreconditionError("partial map has the wrong length");
    }
    for (int v = 0; v < n; ++v) {
      if (auto img = options.partial[static_cast<std::size_t>(v)]) {
        if (*img < 0 || *img >= b.size()) {
          throw PreconditionError("partial map value out of range");
        }
        restrict_to(v, {*img});
      }
    }
  }
  if (options.respect_constants) {
    for (std::size_t i = 0; i < a.constants().size(); ++i) {
      restrict_to(a.constants()[i], {b.constants()[i]});
    }
  }
  if (restricted) {
    for (const auto& d : domains) {
      if (d && d->empty()) return std::nullopt;
    }
    problem.domains = std::move(domains);
  }

  auto solution = detail::solve(problem);
  if (!solution) return std::nullopt;
  HomWitness w;
  w.mapping = std::move(*solution);
  w.surjective = is_surjective(w.mapping, b.size());
  w.constant_preserving = a.signature().constant_count() == b.signature().constant_count() &&
                          is_homomorphism(a, b, w.mapping, true);
  return w;
}

std::optional<HomWitness> find_surjective_hom(const Structure& a,
                                              const Structure& b,
                                              bool respect_constants) {
  HomOptions options;
  options.surjective = true;
  options.respect_constants = respect_constants;
  return find_hom(a, b, options);
}

bool is_surjective(const std::vector<int>& mapping, int target_size) {
  std::vector<bool> hit(static_cast<std::size_t>(target_size), false);
  for (int v : mapping) {
    if (v >= 0 && v < target_size) hit[static_cast<std::size_t>(v)] = true;
  }
  return std::all_of(hit.begin(), hit.end(), [](bool x) { return x; });
}

bool is_homomorphism(const Structure& a, const Structure& b,
                     const std::vector<int>& mapping, bool respect_constants) {
  if (a.signature().relations() != b.signature().relations()) return false;
  if (static_cast<int>(mapping.size()) != a.size()) return false;
  for (int v : mapping) {
    if (v < 0 || v >= b.size()) return false;
  }
  std::vector<int> image;
  for (std::size_t r = 0; r < a.relations().size(); ++r) {
    const Relation& ra = a.relation(r);
    for (std::size_t t = 0; t < ra.size(); ++t) {
      image.clear();
      for (int v : ra.tuple(t)) image.push_back(mapping[static_cast<std::size_t>(v)]);
      if (!b.relation(r).contains(image)) return false;
    }
  }
  if (respect_constants) {
    if (a.constants().size() != b.constants().size()) return false;
    for (std::size_t i = 0; i < a.constants().size(); ++i) {
      if (mapping[static_cast<std::size_t>(a.constants()[i])] != b.constants()[i]) {
        return false;
      }
    }
  }
  return true;
}

std::vector<std::vector<int>> automorphisms(const Structure& a,
                                            const AutomorphismOptions& options) {
  if (a.size() > options.max_size) {
    throw ResourceError("automorphisms: " + std::to_string(a.size()) +
                        " elements exceed the cap of " +
                        std::to_string(options.max_size));
  }
  std::vector<int> perm(static_cast<std::size_t>(a.size()));
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<std::vector<int>> out;
  do {
    // A bijection preserving every tuple of a finite structure is onto each
    // relation, so it is an automorphism.
    if (is_homomorphism(a, a, perm, true)) out.push_back(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return out;
}

std::uint64_t orbit_count(const Structure& a, int n,
                          const AutomorphismOptions& options) {
  if (n < 1) throw PreconditionError("orbit_count needs n >= 1");
  auto group = automorphisms(a, options);
  unsigned __int128 total = 0;
  for (const auto& g : group) {
    std::int64_t fixed = 0;
    for (std::size_t i = 0; i < g.size(); ++i) fixed += g[i] == static_cast<int>(i);
    unsigned __int128 term = 1;
    for (int k = 0; k < n; ++k) {
      term *= static_cast<unsigned __int128>(fixed);
      if (term > (static_cast<unsigned __int128>(1) << 100)) {
        throw ResourceError("orbit count overflows");
      }
    }
    total += term;
  }
  unsigned __int128 result = total / group.size();
  if (result > UINT64_MAX) throw ResourceError("orbit count overflows");
  return static_cast<std::uint64_t>(result);
}

std::optional<std::vector<int>> find_majority_polymorphism(
    const Structure& a, const ResourceLimits& limits) {
  if (!a.constants().empty()) {
    throw PreconditionError("majority polymorphisms of structures with constants");
  }
  Structure cube = power(a, 3, limits);
  const int n = a.size();
  HomOptions options;
  options.partial.assign(static_cast<std::size_t>(cube.size()), std::nullopt);
  for (int x = 0; x < n; ++x) {
    for (int y = 0; y < n; ++y) {
      options.partial[static_cast<std::size_t>((x * n + x) * n + y)] = x;
      options.partial[static_cast<std::size_t>((x * n + y) * n + x)] = x;
      options.partial[static_cast<std::size_t>((y * n + x) * n + x)] = x;
    }
  }
  auto w = find_hom(cube, a, options);
  if (!w) return std::nullopt;
  return w->mapping;
}

}  // namespace qcsp
