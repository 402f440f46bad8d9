#include "support/oracles.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <set>

namespace qcsp::testing {

void for_each_map(int n, int m, const std::function<bool(const std::vector<int>&)>& f) {
  std::vector<int> h(static_cast<std::size_t>(n), 0);
  if (n > 0 && m == 0) return;
  while (true) {
    if (!f(h)) return;
    int i = n - 1;
    while (i >= 0 && h[static_cast<std::size_t>(i)] == m - 1) {
      h[static_cast<std::size_t>(i)] = 0;
      --i;
    }
    if (i < 0) return;
    ++h[static_cast<std::size_t>(i)];
  }
}

bool maps_tuples(const Structure& a, const Structure& b, const std::vector<int>& h) {
  for (std::size_t r = 0; r < a.relations().size(); ++r) {
    const Relation& ra = a.relation(r);
    const Relation& rb = b.relation(r);
    std::vector<int> img(static_cast<std::size_t>(ra.arity()));
    for (std::size_t t = 0; t < ra.size(); ++t) {
      auto tup = ra.tuple(t);
      for (std::size_t k = 0; k < img.size(); ++k) img[k] = h[static_cast<std::size_t>(tup[k])];
      if (!rb.contains(img)) return false;
    }
  }
  return true;
}

bool brute_hom_exists(const Structure& a, const Structure& b, bool surjective,
                      bool respect_constants) {
  bool found = false;
  for_each_map(a.size(), b.size(), [&](const std::vector<int>& h) {
    if (respect_constants) {
      for (std::size_t i = 0; i < a.constants().size(); ++i) {
        if (h[static_cast<std::size_t>(a.constants()[i])] != b.constants()[i]) return true;
      }
    }
    if (surjective) {
      std::set<int> image(h.begin(), h.end());
      if (static_cast<int>(image.size()) != b.size()) return true;
    }
    if (maps_tuples(a, b, h)) {
      found = true;
      return false;
    }
    return true;
  });
  return found;
}

namespace {

bool eval_rec(const Structure& a, const std::vector<PhSentence::Bound>& flat,
              const std::vector<std::vector<int>>& atoms, const PhSentence& s,
              std::vector<int>& values, std::size_t pos) {
  if (pos == flat.size()) {
    for (std::size_t i = 0; i < s.matrix.size(); ++i) {
      std::vector<int> v;
      for (int p : atoms[i]) v.push_back(values[static_cast<std::size_t>(p)]);
      if (s.matrix[i].is_equality()) {
        if (v[0] != v[1]) return false;
      } else if (!a.relation(s.matrix[i].relation).contains(v)) {
        return false;
      }
    }
    return true;
  }
  const bool universal = flat[pos].quantifier == Quantifier::kForall;
  for (int x = 0; x < a.size(); ++x) {
    values[pos] = x;
    bool sub = eval_rec(a, flat, atoms, s, values, pos + 1);
    if (universal && !sub) return false;
    if (!universal && sub) return true;
  }
  return universal;
}

}  // namespace

bool brute_eval(const Structure& a, const PhSentence& s) {
  auto flat = s.flat_prefix();
  std::map<std::string, int> pos;
  for (std::size_t i = 0; i < flat.size(); ++i) pos[flat[i].name] = static_cast<int>(i);
  std::vector<std::vector<int>> atoms;
  for (const auto& atom : s.matrix) {
    std::vector<int> p;
    for (const auto& v : atom.args) p.push_back(pos.at(v));
    atoms.push_back(p);
  }
  std::vector<int> values(flat.size(), 0);
  return eval_rec(a, flat, atoms, s, values, 0);
}

bool brute_three_colourable(const Structure& g) {
  bool ok = false;
  const Relation& e = g.relation(0);
  for_each_map(g.size(), 3, [&](const std::vector<int>& c) {
    for (std::size_t t = 0; t < e.size(); ++t) {
      auto tup = e.tuple(t);
      if (c[static_cast<std::size_t>(tup[0])] == c[static_cast<std::size_t>(tup[1])]) return true;
    }
    ok = true;
    return false;
  });
  return ok;
}

std::vector<std::vector<int>> brute_automorphisms(const Structure& a) {
  std::vector<std::vector<int>> out;
  std::vector<int> p(static_cast<std::size_t>(a.size()));
  std::iota(p.begin(), p.end(), 0);
  do {
    // A bijection preserving every tuple of a finite structure also reflects
    // them: tuple counts are equal.
    if (maps_tuples(a, a, p)) out.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));
  return out;
}

std::int64_t brute_orbit_count(const Structure& a, int n) {
  auto group = brute_automorphisms(a);
  std::int64_t total = 1;
  for (int i = 0; i < n; ++i) total *= a.size();
  std::vector<std::int64_t> parent(static_cast<std::size_t>(total));
  std::iota(parent.begin(), parent.end(), 0);
  std::function<std::int64_t(std::int64_t)> find = [&](std::int64_t x) {
    while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
    return x;
  };
  for (std::int64_t t = 0; t < total; ++t) {
    for (const auto& g : group) {
      std::int64_t image = 0, rest = t, scale = 1;
      for (int i = 0; i < n; ++i) {
        image += g[static_cast<std::size_t>(rest % a.size())] * scale;
        rest /= a.size();
        scale *= a.size();
      }
      parent[static_cast<std::size_t>(find(t))] = find(image);
    }
  }
  std::int64_t orbits = 0;
  for (std::int64_t t = 0; t < total; ++t) orbits += find(t) == t;
  return orbits;
}

Signature digraph_signature() { return Signature({{"E", 2}}); }

std::vector<Structure> all_digraphs(int n) {
  std::vector<Structure> out;
  const int cells = n * n;
  for (std::int64_t mask = 0; mask < (std::int64_t{1} << cells); ++mask) {
    std::vector<int> flat;
    for (int c = 0; c < cells; ++c) {
      if (mask >> c & 1) {
        flat.push_back(c / n);
        flat.push_back(c % n);
      }
    }
    out.emplace_back(digraph_signature(), n, std::vector<Relation>{Relation(2, flat)});
  }
  return out;
}

std::vector<Structure> all_graphs(int n) {
  std::vector<std::pair<int, int>> pairs;
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) pairs.push_back({i, j});
  }
  std::vector<Structure> out;
  for (std::int64_t mask = 0; mask < (std::int64_t{1} << pairs.size()); ++mask) {
    std::vector<int> flat;
    for (std::size_t k = 0; k < pairs.size(); ++k) {
      if (mask >> k & 1) {
        flat.insert(flat.end(), {pairs[k].first, pairs[k].second, pairs[k].second,
                                 pairs[k].first});
      }
    }
    out.emplace_back(digraph_signature(), n, std::vector<Relation>{Relation(2, flat)});
  }
  return out;
}

Structure random_structure(Rng& rng, const Signature& sig, int n, double density) {
  std::bernoulli_distribution coin(density);
  std::vector<Relation> rels;
  for (const auto& sym : sig.relations()) {
    std::vector<int> flat;
    std::vector<int> t(static_cast<std::size_t>(sym.arity), 0);
    for_each_map(sym.arity, n, [&](const std::vector<int>& tuple) {
      if (coin(rng)) flat.insert(flat.end(), tuple.begin(), tuple.end());
      return true;
    });
    rels.emplace_back(sym.arity, flat);
  }
  return Structure(sig, n, std::move(rels));
}

Structure random_digraph(Rng& rng, int n, double density) {
  return random_structure(rng, digraph_signature(), n, density);
}

namespace {

int uniform(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

Atom random_atom(Rng& rng, const Signature& sig, const std::vector<std::string>& vars,
                 double equality) {
  auto pick = [&] { return vars[static_cast<std::size_t>(uniform(rng, 0, static_cast<int>(vars.size()) - 1))]; };
  if (std::bernoulli_distribution(equality)(rng)) return Atom::eq(pick(), pick());
  const auto& sym = sig.relation(static_cast<std::size_t>(
      uniform(rng, 0, static_cast<int>(sig.relation_count()) - 1)));
  std::vector<std::string> args;
  for (int k = 0; k < sym.arity; ++k) args.push_back(pick());
  return Atom::rel(sym.name, args);
}

}  // namespace

PhSentence random_sentence(Rng& rng, const Signature& sig, const SentenceParams& p) {
  PhSentence s;
  const int n = uniform(rng, p.min_vars, p.max_vars);
  std::vector<std::string> vars;
  for (int i = 0; i < n; ++i) {
    std::string name = "v" + std::to_string(i);
    vars.push_back(name);
    Quantifier q = uniform(rng, 0, 1) ? Quantifier::kForall : Quantifier::kExists;
    if (s.prefix.empty() || s.prefix.back().quantifier != q) s.prefix.push_back({q, {}});
    s.prefix.back().variables.push_back(name);
  }
  const int atoms = uniform(rng, 1, p.max_atoms);
  for (int i = 0; i < atoms; ++i) s.matrix.push_back(random_atom(rng, sig, vars, p.equality));
  return s;
}

PhSentence random_strict_sentence(Rng& rng, const Signature& sig, int max_depth,
                                  int max_atoms) {
  PhSentence s;
  const int k = uniform(rng, 1, max_depth);
  std::vector<std::string> vars;
  for (int i = 1; i <= k; ++i) {
    s.prefix.push_back({Quantifier::kForall, {"x" + std::to_string(i)}});
    s.prefix.push_back({Quantifier::kExists, {"y" + std::to_string(i)}});
    vars.push_back("x" + std::to_string(i));
    vars.push_back("y" + std::to_string(i));
  }
  const int atoms = uniform(rng, 1, max_atoms);
  for (int i = 0; i < atoms; ++i) s.matrix.push_back(random_atom(rng, sig, vars, 0.0));
  return s;
}

Structure surjective_image(Rng& rng, const Structure& a, const std::vector<int>& h, int m,
                           double extra) {
  std::bernoulli_distribution coin(extra);
  std::vector<Relation> rels;
  for (std::size_t r = 0; r < a.relations().size(); ++r) {
    const Relation& ra = a.relation(r);
    std::vector<int> flat;
    for (std::size_t t = 0; t < ra.size(); ++t) {
      for (int x : ra.tuple(t)) flat.push_back(h[static_cast<std::size_t>(x)]);
    }
    for_each_map(ra.arity(), m, [&](const std::vector<int>& tuple) {
      if (coin(rng)) flat.insert(flat.end(), tuple.begin(), tuple.end());
      return true;
    });
    rels.emplace_back(ra.arity(), flat);
  }
  return Structure(a.signature(), m, std::move(rels));
}

}  // namespace qcsp::testing
