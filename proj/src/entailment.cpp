#include "qcsp/entailment.hpp"

#include <algorithm>
#include <climits>
#include <map>
#include <set>
#include <unordered_map>

#include "qcsp/errors.hpp"
#include "qcsp/game.hpp"

namespace qcsp {

// --- terms -------------------------------------------------------------------

SkolemTerm SkolemTerm::constant(int index) {
  if (index < 1 || index > 64) throw PreconditionError("constant index must be in 1..64");
  auto n = std::make_shared<Node>();
  n->constant = index;
  n->support = std::uint64_t{1} << (index - 1);
  return SkolemTerm(std::move(n));
}

SkolemTerm SkolemTerm::apply(int function, std::vector<SkolemTerm> args) {
  if (function < 0) throw PreconditionError("negative function index");
  auto n = std::make_shared<Node>();
  n->function = function;
  int rank = 0;
  for (const auto& a : args) {
    rank = std::max(rank, a.rank());
    n->support |= a.support();
  }
  n->rank = rank + 1;
  n->args = std::move(args);
  return SkolemTerm(std::move(n));
}

bool operator<(const SkolemTerm& a, const SkolemTerm& b) {
  if (a.node_ == b.node_) return false;
  if (a.rank() != b.rank()) return a.rank() < b.rank();
  if (a.is_constant() != b.is_constant()) return a.is_constant();
  if (a.is_constant()) return a.constant_index() < b.constant_index();
  if (a.function() != b.function()) return a.function() < b.function();
  return std::lexicographical_compare(a.args().begin(), a.args().end(),
                                      b.args().begin(), b.args().end());
}

bool operator==(const SkolemTerm& a, const SkolemTerm& b) {
  return !(a < b) && !(b < a);
}

std::string SkolemTerm::to_string(const SkolemForm* form) const {
  if (is_constant()) return "c" + std::to_string(constant_index());
  std::string out;
  if (form && function() < static_cast<int>(form->functions.size())) {
    out = form->functions[static_cast<std::size_t>(function())].name;
  } else {
    out = "f" + std::to_string(function());
  }
  out += "(";
  for (std::size_t i = 0; i < args().size(); ++i) {
    if (i) out += ",";
    out += args()[i].to_string(form);
  }
  return out + ")";
}

SkolemTerm substitute(const SkolemTerm& t, const SkolemTerm& old,
                      const SkolemTerm& replacement) {
  if (t == old) return replacement;
  if (t.is_constant()) return t;
  std::vector<SkolemTerm> args;
  args.reserve(t.args().size());
  for (const auto& a : t.args()) args.push_back(substitute(a, old, replacement));
  return SkolemTerm::apply(t.function(), std::move(args));
}

SkolemTerm permute_constants(const SkolemTerm& t, const std::vector<int>& perm) {
  if (t.is_constant()) {
    return SkolemTerm::constant(perm.at(static_cast<std::size_t>(t.constant_index() - 1)) + 1);
  }
  std::vector<SkolemTerm> args;
  for (const auto& a : t.args()) args.push_back(permute_constants(a, perm));
  return SkolemTerm::apply(t.function(), std::move(args));
}

// --- Skolem form -------------------------------------------------------------

SkolemForm skolemize(const PhSentence& phi) {
  validate(phi);
  if (phi.has_equality()) {
    throw PreconditionError("skolemize needs an equality-free sentence");
  }
  SkolemForm form;
  form.signature = infer_signature(phi);
  auto flat = phi.flat_prefix();
  std::set<std::string> names;
  for (const auto& b : flat) names.insert(b.name);
  if (!flat.empty() && flat.front().quantifier == Quantifier::kExists) {
    std::string dummy;
    int k = 0;
    do {
      dummy = std::string(kDummyPrefix) + std::to_string(++k);
    } while (names.count(dummy));
    form.universals.push_back(dummy);
  }
  std::map<std::string, SkolemArg> arg_of;
  for (const auto& b : flat) {
    if (b.quantifier == Quantifier::kForall) {
      arg_of[b.name] = {false, static_cast<int>(form.universals.size())};
      form.universals.push_back(b.name);
    } else {
      arg_of[b.name] = {true, static_cast<int>(form.functions.size())};
      form.functions.push_back(
          {"f_" + b.name, b.name, static_cast<int>(form.universals.size())});
    }
  }
  for (const auto& atom : phi.matrix) {
    QuantifiedAtom q{atom.relation, {}};
    for (const auto& v : atom.args) q.args.push_back(arg_of.at(v));
    form.atoms.push_back(std::move(q));
  }
  return form;
}

std::optional<std::int64_t> truncation_size(const SkolemForm& form, int l, int m,
                                            std::int64_t limit) {
  if (l < 1 || m < 0) throw PreconditionError("truncation needs l >= 1 and m >= 0");
  std::int64_t tau = l;
  if (tau > limit) return std::nullopt;
  for (int r = 1; r <= m; ++r) {
    std::int64_t next = l;
    for (const auto& f : form.functions) {
      auto p = checked_pow(tau, f.arity, limit);
      if (!p || next > limit - *p) return std::nullopt;
      next += *p;
    }
    if (next == tau) return tau;  // no functions: stationary
    tau = next;
  }
  return tau;
}

// --- truncation --------------------------------------------------------------

std::optional<int> Truncation::index_of(const SkolemTerm& t) const {
  auto it = std::lower_bound(terms.begin(), terms.end(), t);
  if (it == terms.end() || *it != t) return std::nullopt;
  return static_cast<int>(it - terms.begin());
}

bool Truncation::has_fact(std::size_t relation, const std::vector<int>& args) const {
  return std::binary_search(facts.begin(), facts.end(), Fact{relation, args});
}

Structure Truncation::to_structure() const {
  StructureBuilder b(form.signature.with_constants(0), static_cast<int>(terms.size()));
  for (const auto& f : facts) b.add(f.relation, f.args);
  std::vector<std::string> labels;
  for (const auto& t : terms) labels.push_back(t.to_string(&form));
  return b.labels(std::move(labels)).build();
}

Truncation build_truncation(const PhSentence& phi, int l, int m,
                            const TruncationLimits& limits) {
  return build_truncation(skolemize(phi), l, m, limits);
}

Truncation build_truncation(const SkolemForm& form, int l, int m,
                            const TruncationLimits& limits) {
  if (l < 1 || l > 64) throw PreconditionError("l must be in 1..64");
  if (m < 0) throw PreconditionError("m must be non-negative");
  if (!truncation_size(form, l, m, limits.max_terms)) {
    throw ResourceError("truncation of rank " + std::to_string(m) + " over " +
                        std::to_string(l) + " constants exceeds " +
                        std::to_string(limits.max_terms) + " terms");
  }
  Truncation t;
  t.form = form;
  t.l = l;
  t.m = m;
  std::map<std::pair<int, std::vector<int>>, int> app_index;
  for (int c = 1; c <= l; ++c) t.terms.push_back(SkolemTerm::constant(c));
  // rank_end[r]: number of terms of rank <= r.
  std::vector<int> rank_end{l};
  for (int r = 1; r <= m; ++r) {
    const int upto = rank_end[static_cast<std::size_t>(r - 1)];
    const int fresh_from = r >= 2 ? rank_end[static_cast<std::size_t>(r - 2)] : 0;
    for (int f = 0; f < static_cast<int>(form.functions.size()); ++f) {
      const int arity = form.functions[static_cast<std::size_t>(f)].arity;
      std::vector<int> args(static_cast<std::size_t>(arity), 0);
      while (true) {
        bool new_rank = arity == 0 ? r == 1
                                   : std::any_of(args.begin(), args.end(),
                                                 [&](int x) { return x >= fresh_from; });
        if (new_rank) {
          std::vector<SkolemTerm> sub;
          for (int x : args) sub.push_back(t.terms[static_cast<std::size_t>(x)]);
          app_index[{f, args}] = static_cast<int>(t.terms.size());
          t.terms.push_back(SkolemTerm::apply(f, std::move(sub)));
        }
        int pos = arity - 1;
        while (pos >= 0 && ++args[static_cast<std::size_t>(pos)] == upto) {
          args[static_cast<std::size_t>(pos)] = 0;
          --pos;
        }
        if (pos < 0) break;
      }
    }
    rank_end.push_back(static_cast<int>(t.terms.size()));
  }

  const int all_terms = static_cast<int>(t.terms.size());
  const int inner_terms = m >= 1 ? rank_end[static_cast<std::size_t>(m - 1)] : 0;
  const int universals = static_cast<int>(form.universals.size());
  for (const auto& atom : form.atoms) {
    auto rel = form.signature.find(atom.relation);
    // Variables the atom mentions; those under a function range over rank < m.
    std::vector<int> bound(static_cast<std::size_t>(universals), 0);  // 0 absent, 1 bare, 2 inner
    for (const auto& a : atom.args) {
      if (a.is_function) {
        for (int x = 0; x < form.functions[static_cast<std::size_t>(a.index)].arity; ++x) {
          bound[static_cast<std::size_t>(x)] = 2;
        }
      } else if (bound[static_cast<std::size_t>(a.index)] == 0) {
        bound[static_cast<std::size_t>(a.index)] = 1;
      }
    }
    std::vector<int> vars;
    std::vector<int> range;
    for (int x = 0; x < universals; ++x) {
      if (bound[static_cast<std::size_t>(x)] == 0) continue;
      vars.push_back(x);
      range.push_back(bound[static_cast<std::size_t>(x)] == 2 ? inner_terms : all_terms);
    }
    if (std::any_of(range.begin(), range.end(), [](int r) { return r == 0; })) continue;
    bool nullary = std::any_of(atom.args.begin(), atom.args.end(), [&](const SkolemArg& a) {
      return a.is_function && form.functions[static_cast<std::size_t>(a.index)].arity == 0;
    });
    if (nullary && m == 0) continue;
    std::vector<int> value(static_cast<std::size_t>(universals), 0);
    std::vector<int> odo(vars.size(), 0);
    while (true) {
      for (std::size_t i = 0; i < vars.size(); ++i) {
        value[static_cast<std::size_t>(vars[i])] = odo[i];
      }
      Fact fact{*rel, {}};
      for (const auto& a : atom.args) {
        if (!a.is_function) {
          fact.args.push_back(value[static_cast<std::size_t>(a.index)]);
        } else {
          int arity = form.functions[static_cast<std::size_t>(a.index)].arity;
          std::vector<int> key(value.begin(), value.begin() + arity);
          fact.args.push_back(app_index.at({a.index, key}));
        }
      }
      t.facts.push_back(std::move(fact));
      if (static_cast<std::int64_t>(t.facts.size()) > limits.max_facts) {
        throw ResourceError("truncation exceeds " + std::to_string(limits.max_facts) +
                            " facts");
      }
      int pos = static_cast<int>(vars.size()) - 1;
      while (pos >= 0 && ++odo[static_cast<std::size_t>(pos)] == range[static_cast<std::size_t>(pos)]) {
        odo[static_cast<std::size_t>(pos)] = 0;
        --pos;
      }
      if (pos < 0) break;
    }
  }
  std::sort(t.facts.begin(), t.facts.end());
  t.facts.erase(std::unique(t.facts.begin(), t.facts.end()), t.facts.end());
  return t;
}

// --- rel-cc game -------------------------------------------------------------

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<std::int64_t>& v) const noexcept {
    std::size_t h = v.size();
    for (auto x : v) h = h * 1000003u ^ static_cast<std::size_t>(x + 1);
    return h;
  }
};

class CcGame {
 public:
  CcGame(const Truncation& t, const PhSentence& psi, const RelCcOptions& options)
      : t_(t), options_(options) {
    validate(psi);
    PhSentence s = normalize_strict_alternation(psi);
    auto flat = s.flat_prefix();
    n_ = static_cast<int>(flat.size());
    std::map<std::string, int> pos;
    for (int i = 0; i < n_; ++i) pos[flat[static_cast<std::size_t>(i)].name] = i;
    universals_ = n_ / 2;
    if (universals_ > t.l) {
      throw PreconditionError("psi has " + std::to_string(universals_) +
                              " universals but the truncation only " +
                              std::to_string(t.l) + " constants");
    }
    in_atom_.assign(static_cast<std::size_t>(n_), false);
    for (const auto& a : s.matrix) {
      Compiled c;
      c.equality = a.is_equality();
      if (!c.equality) {
        auto r = t.form.signature.find(a.relation);
        if (r) {
          if (t.form.signature.relation(*r).arity != static_cast<int>(a.args.size())) {
            throw SignatureError("relation '" + a.relation + "' has different arities");
          }
          c.relation = *r;
        } else {
          impossible_ = true;  // no fact can ever match
        }
      }
      for (const auto& v : a.args) {
        c.args.push_back(pos.at(v));
        c.last = std::max(c.last, c.args.back());
        in_atom_[static_cast<std::size_t>(c.args.back())] = true;
      }
      atoms_.push_back(std::move(c));
    }
    at_.resize(static_cast<std::size_t>(n_));
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      at_[static_cast<std::size_t>(atoms_[i].last)].push_back(i);
    }
    live_.resize(static_cast<std::size_t>(n_) + 1);
    for (int p = 0; p <= n_; ++p) {
      std::set<int> used;
      for (const auto& c : atoms_) {
        if (c.last < p) continue;
        for (int v : c.args) {
          if (v < p) used.insert(v);
        }
      }
      live_[static_cast<std::size_t>(p)].assign(used.begin(), used.end());
    }
    build_fact_index();
    seen_.assign(t.terms.size(), 0);
    vals_.assign(static_cast<std::size_t>(n_), -1);
    memo_.resize(static_cast<std::size_t>(n_) + 1);
  }

  RelCcResult run() {
    RelCcResult r;
    if (impossible_) {
      r.win = false;
      return r;
    }
    symmetric_ = true;
    use_memo_ = true;
    r.win = solve(0, 0);
    r.states = states_;
    if (r.win && options_.want_strategy) {
      symmetric_ = false;
      use_memo_ = false;
      strategy_.emplace();
      if (!solve(0, 0)) throw Error("rel-cc game: strategy pass disagrees");
      r.strategy = std::move(strategy_);
      r.states = states_;
    }
    return r;
  }

 private:
  struct Compiled {
    bool equality = false;
    std::size_t relation = 0;
    std::vector<int> args;
    int last = -1;
  };

  void build_fact_index() {
    const auto& sig = t_.form.signature;
    const std::size_t T = t_.terms.size();
    by_rel_.resize(sig.relation_count());
    offsets_.resize(sig.relation_count());
    entries_.resize(sig.relation_count());
    for (std::size_t i = 0; i < t_.facts.size(); ++i) {
      by_rel_[t_.facts[i].relation].push_back(static_cast<std::uint32_t>(i));
    }
    for (std::size_t r = 0; r < sig.relation_count(); ++r) {
      const int arity = sig.relation(r).arity;
      auto& off = offsets_[r];
      off.assign(static_cast<std::size_t>(arity) * T + 1, 0);
      for (auto fi : by_rel_[r]) {
        const auto& f = t_.facts[fi];
        for (int p = 0; p < arity; ++p) {
          ++off[static_cast<std::size_t>(p) * T + static_cast<std::size_t>(f.args[static_cast<std::size_t>(p)]) + 1];
        }
      }
      for (std::size_t i = 1; i < off.size(); ++i) off[i] += off[i - 1];
      auto& ent = entries_[r];
      ent.resize(off.back());
      std::vector<std::uint32_t> fill(off.begin(), off.end() - 1);
      for (auto fi : by_rel_[r]) {
        const auto& f = t_.facts[fi];
        for (int p = 0; p < arity; ++p) {
          ent[fill[static_cast<std::size_t>(p) * T + static_cast<std::size_t>(f.args[static_cast<std::size_t>(p)])]++] = fi;
        }
      }
    }
  }

  std::span<const std::uint32_t> facts_with(std::size_t r, int p, int term) const {
    const std::size_t T = t_.terms.size();
    const auto& off = offsets_[r];
    const std::size_t slot = static_cast<std::size_t>(p) * T + static_cast<std::size_t>(term);
    return {entries_[r].data() + off[slot], entries_[r].data() + off[slot + 1]};
  }

  bool holds(const Compiled& c) {
    if (c.equality) {
      return vals_[static_cast<std::size_t>(c.args[0])] == vals_[static_cast<std::size_t>(c.args[1])];
    }
    buf_.clear();
    for (int v : c.args) buf_.push_back(vals_[static_cast<std::size_t>(v)]);
    return t_.has_fact(c.relation, buf_);
  }

  bool atoms_hold(int p) {
    for (std::size_t i : at_[static_cast<std::size_t>(p)]) {
      if (!holds(atoms_[i])) return false;
    }
    return true;
  }

  // Candidate terms for the existential at p with support inside `played`.
  std::vector<int> candidates(int p, std::uint64_t played) {
    std::vector<int> out;
    ++stamp_;
    auto offer = [&](int term) {
      if (seen_[static_cast<std::size_t>(term)] == stamp_) return;
      seen_[static_cast<std::size_t>(term)] = stamp_;
      if ((t_.terms[static_cast<std::size_t>(term)].support() & ~played) != 0) return;
      out.push_back(term);
    };
    const Compiled* anchor_atom = nullptr;
    for (std::size_t i : at_[static_cast<std::size_t>(p)]) {
      if (!atoms_[i].equality) {
        anchor_atom = &atoms_[i];
        break;
      }
    }
    if (!anchor_atom) {
      // Only equalities (or nothing) constrain p here.
      for (std::size_t i : at_[static_cast<std::size_t>(p)]) {
        const auto& c = atoms_[i];
        int other = c.args[0] == p ? c.args[1] : c.args[0];
        if (other != p) {
          offer(vals_[static_cast<std::size_t>(other)]);
          return out;
        }
      }
      for (int term = 0; term < static_cast<int>(t_.terms.size()); ++term) offer(term);
      std::sort(out.begin(), out.end());
      return out;
    }
    const Compiled& c = *anchor_atom;
    int fixed_pos = -1;
    for (int i = 0; i < static_cast<int>(c.args.size()); ++i) {
      if (c.args[static_cast<std::size_t>(i)] != p) {
        fixed_pos = i;
        break;
      }
    }
    int y_pos = 0;
    while (c.args[static_cast<std::size_t>(y_pos)] != p) ++y_pos;
    auto consider = [&](std::uint32_t fi) {
      const auto& f = t_.facts[fi];
      for (std::size_t i = 0; i < c.args.size(); ++i) {
        int v = c.args[i];
        if (v != p && vals_[static_cast<std::size_t>(v)] != f.args[i]) return;
        if (v == p && f.args[i] != f.args[static_cast<std::size_t>(y_pos)]) return;
      }
      offer(f.args[static_cast<std::size_t>(y_pos)]);
    };
    if (fixed_pos >= 0) {
      for (auto fi : facts_with(c.relation, fixed_pos,
                                vals_[static_cast<std::size_t>(c.args[static_cast<std::size_t>(fixed_pos)])])) {
        consider(fi);
      }
    } else {
      for (auto fi : by_rel_[c.relation]) consider(fi);
    }
    std::sort(out.begin(), out.end());
    return out;
  }

  bool solve(int p, std::uint64_t played) {
    if (p == n_) return true;
    if (++states_ > options_.max_states) {
      throw ResourceError("rel-cc game exceeds " + std::to_string(options_.max_states) +
                          " states");
    }
    std::vector<std::int64_t> key;
    if (use_memo_) {
      key.push_back(static_cast<std::int64_t>(played));
      for (int v : live_[static_cast<std::size_t>(p)]) key.push_back(vals_[static_cast<std::size_t>(v)]);
      auto& table = memo_[static_cast<std::size_t>(p)];
      auto it = table.find(key);
      if (it != table.end()) return it->second;
    }
    bool result = (p % 2 == 0) ? universal(p, played) : existential(p, played);
    if (use_memo_) memo_[static_cast<std::size_t>(p)].emplace(std::move(key), result);
    return result;
  }

  bool universal(int p, std::uint64_t played) {
    std::vector<int> moves;
    const int count = std::popcount(played);
    if (symmetric_) {
      // Played constants are c1..c_count; unplayed ones are interchangeable.
      if (!in_atom_[static_cast<std::size_t>(p)] && count > 0) {
        moves.push_back(0);
      } else {
        for (int c = 0; c < count; ++c) moves.push_back(c);
        if (count < t_.l) moves.push_back(count);
      }
    } else {
      for (int c = 0; c < t_.l; ++c) moves.push_back(c);
    }
    for (int c : moves) {
      vals_[static_cast<std::size_t>(p)] = c;  // constant c+1 has term index c
      if (!atoms_hold(p)) return false;
      if (!solve(p + 1, played | (std::uint64_t{1} << c))) return false;
    }
    return true;
  }

  bool existential(int p, std::uint64_t played) {
    if (!in_atom_[static_cast<std::size_t>(p)]) {
      vals_[static_cast<std::size_t>(p)] = vals_[static_cast<std::size_t>(p - 1)];
      bool ok = solve(p + 1, played);
      if (ok) record(p);
      return ok;
    }
    for (int term : candidates(p, played)) {
      vals_[static_cast<std::size_t>(p)] = term;
      if (!atoms_hold(p)) continue;
      if (solve(p + 1, played)) {
        record(p);
        return true;
      }
    }
    return false;
  }

  void record(int p) {
    if (!strategy_) return;
    std::vector<int> history(vals_.begin(), vals_.begin() + p);
    (*strategy_)[std::move(history)] = vals_[static_cast<std::size_t>(p)];
  }

  const Truncation& t_;
  RelCcOptions options_;
  int n_ = 0;
  int universals_ = 0;
  bool impossible_ = false;
  bool symmetric_ = true;
  bool use_memo_ = true;
  std::vector<Compiled> atoms_;
  std::vector<bool> in_atom_;
  std::vector<std::vector<std::size_t>> at_;
  std::vector<std::vector<int>> live_;
  std::vector<std::vector<std::uint32_t>> by_rel_;
  std::vector<std::vector<std::uint32_t>> offsets_;
  std::vector<std::vector<std::uint32_t>> entries_;
  std::vector<int> vals_;
  std::vector<int> buf_;
  std::vector<std::uint32_t> seen_;
  std::uint32_t stamp_ = 0;
  std::int64_t states_ = 0;
  std::vector<std::unordered_map<std::vector<std::int64_t>, bool, VecHash>> memo_;
  std::optional<CcStrategy> strategy_;
};

}  // namespace

RelCcResult solve_rel_cc_game(const Truncation& t, const PhSentence& psi,
                              const RelCcOptions& options) {
  return CcGame(t, psi, options).run();
}

bool verify_cc_strategy(const Truncation& t, const PhSentence& psi,
                        const CcStrategy& strategy) {
  PhSentence s = normalize_strict_alternation(psi);
  auto flat = s.flat_prefix();
  std::map<std::string, int> pos;
  for (std::size_t i = 0; i < flat.size(); ++i) pos[flat[i].name] = static_cast<int>(i);
  std::vector<int> vals;
  auto matrix_holds = [&] {
    for (const auto& a : s.matrix) {
      std::vector<int> args;
      for (const auto& v : a.args) args.push_back(vals[static_cast<std::size_t>(pos.at(v))]);
      if (a.is_equality()) {
        if (args[0] != args[1]) return false;
        continue;
      }
      auto r = t.form.signature.find(a.relation);
      if (!r || !t.has_fact(*r, args)) return false;
    }
    return true;
  };
  auto replay = [&](auto&& self, std::uint64_t played) -> bool {
    const std::size_t p = vals.size();
    if (p == flat.size()) return matrix_holds();
    if (flat[p].quantifier == Quantifier::kForall) {
      for (int c = 0; c < t.l; ++c) {
        vals.push_back(c);
        bool ok = self(self, played | (std::uint64_t{1} << c));
        vals.pop_back();
        if (!ok) return false;
      }
      return true;
    }
    auto it = strategy.find(vals);
    if (it == strategy.end()) return false;
    if (it->second < 0 || it->second >= static_cast<int>(t.terms.size())) return false;
    if ((t.terms[static_cast<std::size_t>(it->second)].support() & ~played) != 0) return false;
    vals.push_back(it->second);
    bool ok = self(self, played);
    vals.pop_back();
    return ok;
  };
  return replay(replay, 0);
}

// --- decision ----------------------------------------------------------------

std::vector<Structure> enumerate_one_element_models(const Signature& sig) {
  const std::size_t k = sig.relation_count();
  if (k > 20) throw ResourceError("too many relation symbols for model enumeration");
  std::vector<Structure> out;
  for (std::uint32_t mask = 0; mask < (1u << k); ++mask) {
    StructureBuilder b(sig.with_constants(0), 1);
    for (std::size_t r = 0; r < k; ++r) {
      if (mask & (1u << r)) {
        std::vector<int> t(static_cast<std::size_t>(sig.relation(r).arity), 0);
        b.add(r, t);
      }
    }
    out.push_back(b.build());
  }
  return out;
}

const char* to_string(EntailmentVerdict v) {
  switch (v) {
    case EntailmentVerdict::kYes: return "yes";
    case EntailmentVerdict::kNo: return "no";
    case EntailmentVerdict::kResourceExceeded: return "resource-exceeded";
  }
  return "?";
}

namespace {

Signature union_signature(const Signature& a, const Signature& b) {
  std::vector<RelationSymbol> rels = a.relations();
  for (const auto& r : b.relations()) {
    auto idx = a.find(r.name);
    if (!idx) {
      rels.push_back(r);
    } else if (a.relation(*idx).arity != r.arity) {
      throw SignatureError("relation '" + r.name + "' has different arities");
    }
  }
  return Signature(std::move(rels));
}

int saturating_rank_bound(int u, int e) {
  auto power = checked_pow(u, u, INT_MAX);
  if (!power) return INT_MAX;
  std::int64_t bound = u + static_cast<std::int64_t>(e) * *power;
  return bound > INT_MAX ? INT_MAX : static_cast<int>(bound);
}

}  // namespace

EntailmentResult decide_entailment(const PhSentence& phi, const PhSentence& psi,
                                   const EntailmentOptions& options) {
  validate(phi);
  validate(psi);
  EntailmentResult result;
  Signature sig = union_signature(infer_signature(phi), infer_signature(psi));

  if (classify(phi).is_degenerate) {
    result.degenerate = true;
    result.verdict = EntailmentVerdict::kYes;
    for (const auto& model : enumerate_one_element_models(sig)) {
      if (evaluate(model, phi).value && !evaluate(model, psi).value) {
        result.verdict = EntailmentVerdict::kNo;
        result.diagnostics.push_back("a one-element model of phi falsifies psi");
        break;
      }
    }
    return result;
  }

  SkolemForm form = skolemize(propagate_equalities(phi));
  form.signature = union_signature(form.signature, infer_signature(psi));
  result.normalized_psi = normalize_strict_alternation(psi);
  auto shape = classify(result.normalized_psi);
  const int u = shape.universal_count;
  const int e = shape.existential_count;
  result.l = std::max(1, u);
  result.rank_bound = saturating_rank_bound(result.l, e);

  RelCcOptions game;
  game.max_states = options.max_states;
  std::optional<std::int64_t> previous;
  for (int m = 0; m <= result.rank_bound; ++m) {
    auto size = truncation_size(form, result.l, m, options.truncation.max_terms);
    if (!size) {
      result.verdict = EntailmentVerdict::kResourceExceeded;
      result.diagnostics.push_back("rank " + std::to_string(m) + " exceeds " +
                                   std::to_string(options.truncation.max_terms) +
                                   " terms; no win up to rank " + std::to_string(m - 1));
      return result;
    }
    const bool stationary = previous && *previous == *size;
    previous = size;
    if (stationary) {
      // T^m = T^(m-1): the canonical model is finite and was already lost.
      result.verdict = EntailmentVerdict::kNo;
      result.diagnostics.push_back("canonical model is finite at rank " +
                                   std::to_string(m - 1));
      return result;
    }
    try {
      Truncation t = build_truncation(form, result.l, m, options.truncation);
      game.want_strategy = false;
      RelCcResult r = solve_rel_cc_game(t, result.normalized_psi, game);
      result.rank_reached = m;
      if (r.win) {
        if (options.want_strategy) {
          game.want_strategy = true;
          result.strategy = solve_rel_cc_game(t, result.normalized_psi, game).strategy;
        }
        result.verdict = EntailmentVerdict::kYes;
        result.truncation = std::move(t);
        return result;
      }
      if (m == result.rank_bound) {
        result.verdict = EntailmentVerdict::kNo;
        result.truncation = std::move(t);
        return result;
      }
    } catch (const ResourceError& err) {
      result.verdict = EntailmentVerdict::kResourceExceeded;
      result.diagnostics.push_back(err.what());
      return result;
    }
  }
  result.verdict = EntailmentVerdict::kNo;
  return result;
}

}  // namespace qcsp
