#include "qcsp/game.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <unordered_map>

#include "detail/csp.hpp"
#include "qcsp/errors.hpp"
#include "qcsp/hom.hpp"

namespace qcsp {

namespace {

struct VecHash {
  std::size_t operator()(const std::vector<int>& v) const noexcept {
    std::size_t h = v.size();
    for (int x : v) h = h * 1000003u ^ static_cast<std::size_t>(x + 1);
    return h;
  }
};

struct CompiledAtom {
  bool equality = false;
  std::size_t relation = 0;
  std::vector<int> args;  // prefix positions
  int last = -1;
};

class Evaluator {
 public:
  Evaluator(const Structure& a, const PhSentence& s, const EvaluateOptions& options)
      : a_(a), options_(options), index_(a) {
    check_signature(s, a.signature());
    validate(s);
    std::map<std::string, int> pos;
    for (const auto& b : s.flat_prefix()) {
      pos[b.name] = static_cast<int>(universal_.size());
      universal_.push_back(b.quantifier == Quantifier::kForall);
    }
    n_ = static_cast<int>(universal_.size());
    if (n_ > 0 && a.size() == 0) {
      throw PreconditionError("quantifying over an empty domain");
    }
    for (const auto& atom : s.matrix) {
      CompiledAtom c;
      c.equality = atom.is_equality();
      if (!c.equality) c.relation = *a.signature().find(atom.relation);
      for (const auto& v : atom.args) {
        c.args.push_back(pos.at(v));
        c.last = std::max(c.last, c.args.back());
      }
      atoms_.push_back(std::move(c));
    }
    at_.resize(static_cast<std::size_t>(n_));
    for (std::size_t i = 0; i < atoms_.size(); ++i) {
      at_[static_cast<std::size_t>(atoms_[i].last)].push_back(i);
    }
    tail_ = n_;
    while (tail_ > 0 && !universal_[static_cast<std::size_t>(tail_ - 1)]) --tail_;
    live_.resize(static_cast<std::size_t>(n_) + 1);
    for (int p = 0; p <= n_; ++p) {
      std::vector<bool> used(static_cast<std::size_t>(n_), false);
      for (const auto& c : atoms_) {
        if (c.last < p) continue;
        for (int v : c.args) {
          if (v < p) used[static_cast<std::size_t>(v)] = true;
        }
      }
      for (int v = 0; v < p; ++v) {
        if (used[static_cast<std::size_t>(v)]) live_[static_cast<std::size_t>(p)].push_back(v);
      }
    }
    memo_.resize(static_cast<std::size_t>(n_) + 1);
    vals_.assign(static_cast<std::size_t>(n_), -1);
    if (options_.want_strategy) strategy_.emplace();
  }

  GameResult run() {
    GameResult r;
    if (n_ == 0) {
      r.value = atoms_.empty();  // validated atoms always mention a variable
    } else {
      r.value = solve(0);
    }
    std::size_t entries = 0;
    for (const auto& m : memo_) entries += m.size();
    r.memo_entries = entries;
    if (r.value && strategy_) r.strategy = std::move(*strategy_);
    return r;
  }

 private:
  bool atom_holds(const CompiledAtom& c) {
    if (c.equality) {
      return vals_[static_cast<std::size_t>(c.args[0])] ==
             vals_[static_cast<std::size_t>(c.args[1])];
    }
    tuple_.clear();
    for (int v : c.args) tuple_.push_back(vals_[static_cast<std::size_t>(v)]);
    return index_.contains(c.relation, tuple_);
  }

  std::vector<int> key(int p) const {
    std::vector<int> k;
    for (int v : live_[static_cast<std::size_t>(p)]) {
      k.push_back(vals_[static_cast<std::size_t>(v)]);
    }
    return k;
  }

  void record(int p, int value) {
    if (!strategy_) return;
    std::vector<int> history(vals_.begin(), vals_.begin() + p);
    (*strategy_)[{p, std::move(history)}] = value;
  }

  bool solve(int p) {
    if (p == n_) return true;
    const bool use_memo = !strategy_;
    std::vector<int> k;
    if (use_memo) {
      k = key(p);
      auto& table = memo_[static_cast<std::size_t>(p)];
      auto it = table.find(k);
      if (it != table.end()) return it->second;
    }
    bool result = p == tail_ ? solve_tail() : solve_node(p);
    if (use_memo && total_memo_ < options_.max_memo) {
      memo_[static_cast<std::size_t>(p)].emplace(std::move(k), result);
      ++total_memo_;
    }
    return result;
  }

  bool solve_node(int p) {
    const bool forall = universal_[static_cast<std::size_t>(p)];
    for (int d = 0; d < a_.size(); ++d) {
      vals_[static_cast<std::size_t>(p)] = d;
      bool ok = true;
      for (std::size_t i : at_[static_cast<std::size_t>(p)]) {
        if (!atom_holds(atoms_[i])) {
          ok = false;
          break;
        }
      }
      if (ok) ok = solve(p + 1);
      if (forall && !ok) return false;
      if (!forall && ok) {
        record(p, d);
        return true;
      }
    }
    return forall;
  }

  // Everything from tail_ on is existential: one CSP instance.
  bool solve_tail() {
    std::vector<int> parent(static_cast<std::size_t>(n_));
    std::iota(parent.begin(), parent.end(), 0);
    auto find = [&](int x) {
      while (parent[static_cast<std::size_t>(x)] != x) x = parent[static_cast<std::size_t>(x)];
      return x;
    };
    std::vector<const CompiledAtom*> pending;
    for (const auto& c : atoms_) {
      if (c.last < tail_) continue;
      if (c.equality) {
        int x = find(c.args[0]);
        int y = find(c.args[1]);
        if (x != y) parent[static_cast<std::size_t>(std::max(x, y))] = std::min(x, y);
      } else {
        pending.push_back(&c);
      }
    }
    // A class rooted before the tail has a fixed value; two bound positions in
    // one class must agree.
    for (int v = 0; v < tail_; ++v) {
      int r = find(v);
      if (vals_[static_cast<std::size_t>(v)] != vals_[static_cast<std::size_t>(r)]) return false;
    }
    std::map<int, int> var_of;
    auto csp_var = [&](int position) {
      int r = find(position);
      auto it = var_of.find(r);
      if (it != var_of.end()) return it->second;
      int id = static_cast<int>(var_of.size());
      var_of.emplace(r, id);
      return id;
    };
    detail::CspProblem problem;
    problem.index = &index_;
    for (const CompiledAtom* c : pending) {
      detail::Constraint con{c->relation, {}};
      for (int v : c->args) con.scope.push_back(csp_var(v));
      problem.constraints.push_back(std::move(con));
    }
    for (int v = tail_; v < n_; ++v) csp_var(v);
    problem.num_vars = static_cast<int>(var_of.size());
    problem.domains.resize(var_of.size());
    for (const auto& [root, id] : var_of) {
      if (root < tail_) {
        problem.domains[static_cast<std::size_t>(id)] =
            std::vector<int>{vals_[static_cast<std::size_t>(root)]};
      }
    }
    auto solution = detail::solve(problem);
    if (!solution) return false;
    if (strategy_) {
      for (int v = tail_; v < n_; ++v) {
        int value = (*solution)[static_cast<std::size_t>(var_of.at(find(v)))];
        vals_[static_cast<std::size_t>(v)] = value;
        record(v, value);
      }
    }
    return true;
  }

  const Structure& a_;
  EvaluateOptions options_;
  detail::TargetIndex index_;
  std::vector<bool> universal_;
  int n_ = 0;
  int tail_ = 0;
  std::vector<CompiledAtom> atoms_;
  std::vector<std::vector<std::size_t>> at_;
  std::vector<std::vector<int>> live_;
  std::vector<std::unordered_map<std::vector<int>, bool, VecHash>> memo_;
  std::size_t total_memo_ = 0;
  std::vector<int> vals_;
  std::vector<int> tuple_;
  std::optional<Strategy> strategy_;
};

}  // namespace

GameResult evaluate(const Structure& a, const PhSentence& s,
                    const EvaluateOptions& options) {
  return Evaluator(a, s, options).run();
}

bool verify_strategy(const Structure& a, const PhSentence& s,
                     const Strategy& strategy) {
  check_signature(s, a.signature());
  auto flat = s.flat_prefix();
  std::map<std::string, int> pos;
  for (std::size_t i = 0; i < flat.size(); ++i) pos[flat[i].name] = static_cast<int>(i);
  std::vector<int> vals;
  auto matrix_holds = [&] {
    for (const auto& atom : s.matrix) {
      std::vector<int> t;
      for (const auto& v : atom.args) t.push_back(vals[static_cast<std::size_t>(pos.at(v))]);
      if (atom.is_equality()) {
        if (t[0] != t[1]) return false;
      } else if (!a.relation(atom.relation).contains(t)) {
        return false;
      }
    }
    return true;
  };
  auto replay = [&](auto&& self, std::size_t p) -> bool {
    if (p == flat.size()) return matrix_holds();
    if (flat[p].quantifier == Quantifier::kForall) {
      for (int d = 0; d < a.size(); ++d) {
        vals.push_back(d);
        bool ok = self(self, p + 1);
        vals.pop_back();
        if (!ok) return false;
      }
      return true;
    }
    auto it = strategy.find({static_cast<int>(p), vals});
    if (it == strategy.end()) return false;
    vals.push_back(it->second);
    bool ok = self(self, p + 1);
    vals.pop_back();
    return ok;
  };
  return replay(replay, 0);
}

bool evaluate_pi2_via_superprodukt(const Structure& a, const PhSentence& s,
                                   const ResourceLimits& limits) {
  auto shape = classify(s);
  if (!shape.is_pi2 || shape.has_equality) {
    throw PreconditionError("the superprodukt shortcut needs an equality-free Pi_2 sentence");
  }
  if (s.variable_count() > 0 && a.size() == 0) {
    throw PreconditionError("quantifying over an empty domain");
  }
  Structure d = sentence_to_structure(s, a.signature().with_constants(0));
  if (shape.universal_count == 0) return find_hom(d, a).has_value();
  Structure target = superprodukt(a, shape.universal_count, limits);
  HomOptions options;
  options.respect_constants = true;
  return find_hom(d, target, options).has_value();
}

}  // namespace qcsp
