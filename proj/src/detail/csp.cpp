#include "detail/csp.hpp"

#include <algorithm>
#include <bit>
#include <numeric>
#include <string>

#include "qcsp/errors.hpp"

namespace qcsp::detail {

namespace {

constexpr std::uint64_t kDenseLimit = std::uint64_t{1} << 26;
// Skip a revision whose pivot is not fixed when it would scan more tuples.
constexpr std::size_t kRevisionBudget = 1 << 14;
// Root-level revision of every constraint when the total scan is below this.
constexpr std::size_t kRootBudget = 50'000'000;

}  // namespace

TargetIndex::TargetIndex(const Structure& target) : target_(&target) {
  const int n = target.size();
  for (const auto& rel : target.relations()) {
    PerRelation pr;
    const int arity = rel.arity();
    const std::size_t slots = static_cast<std::size_t>(arity) * n + 1;
    pr.offsets.assign(slots, 0);
    for (std::size_t t = 0; t < rel.size(); ++t) {
      auto tup = rel.tuple(t);
      for (int p = 0; p < arity; ++p) {
        ++pr.offsets[static_cast<std::size_t>(p) * n + tup[p] + 1];
      }
    }
    for (std::size_t i = 1; i < slots; ++i) pr.offsets[i] += pr.offsets[i - 1];
    pr.entries.resize(pr.offsets.back());
    std::vector<std::uint32_t> fill(pr.offsets.begin(), pr.offsets.end() - 1);
    for (std::size_t t = 0; t < rel.size(); ++t) {
      auto tup = rel.tuple(t);
      for (int p = 0; p < arity; ++p) {
        pr.entries[fill[static_cast<std::size_t>(p) * n + tup[p]]++] =
            static_cast<std::uint32_t>(t);
      }
    }
    auto cells = checked_pow(n, arity, static_cast<std::int64_t>(kDenseLimit));
    if (cells && n > 0) {
      pr.dense.assign((static_cast<std::size_t>(*cells) + 63) / 64, 0);
      for (std::size_t t = 0; t < rel.size(); ++t) {
        std::uint64_t code = 0;
        for (int v : rel.tuple(t)) code = code * n + v;
        pr.dense[code / 64] |= std::uint64_t{1} << (code % 64);
      }
    }
    rels_.push_back(std::move(pr));
  }
}

std::span<const std::uint32_t> TargetIndex::with(std::size_t r, int p, int v) const {
  const auto& pr = rels_[r];
  const std::size_t slot = static_cast<std::size_t>(p) * target_->size() + v;
  return {pr.entries.data() + pr.offsets[slot],
          pr.entries.data() + pr.offsets[slot + 1]};
}

bool TargetIndex::contains(std::size_t r, std::span<const int> t) const {
  const auto& pr = rels_[r];
  if (!pr.dense.empty()) {
    std::uint64_t code = 0;
    for (int v : t) code = code * target_->size() + v;
    return (pr.dense[code / 64] >> (code % 64)) & 1;
  }
  return target_->relation(r).contains(t);
}

std::vector<int> variable_order(const CspProblem& problem) {
  const int n = problem.num_vars;
  std::vector<int> degree(static_cast<std::size_t>(n), 0);
  for (const auto& c : problem.constraints) {
    for (int v : c.scope) ++degree[static_cast<std::size_t>(v)];
  }
  auto singleton = [&](int v) {
    if (problem.domains.empty()) return false;
    const auto& d = problem.domains[static_cast<std::size_t>(v)];
    return d && d->size() == 1;
  };
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    bool sa = singleton(a), sb = singleton(b);
    if (sa != sb) return sa;
    return degree[static_cast<std::size_t>(a)] > degree[static_cast<std::size_t>(b)];
  });
  return order;
}

namespace {

class Solver {
 public:
  explicit Solver(const CspProblem& p)
      : p_(p),
        n_(p.num_vars),
        nb_(p.index->target().size()),
        words_((nb_ + 63) / 64) {}

  std::optional<std::vector<int>> run() {
    if (p_.surjective && nb_ > n_) return std::nullopt;
    if (n_ == 0) {
      if (p_.surjective && nb_ > 0) return std::nullopt;
      return std::vector<int>{};
    }
    if (nb_ == 0) return std::nullopt;
    if (!init()) return std::nullopt;
    if (!root_propagate()) return std::nullopt;
    return search();
  }

 private:
  using Word = std::uint64_t;

  Word* dom(int v) { return dom_.data() + static_cast<std::size_t>(v) * words_; }
  const Word* dom(int v) const {
    return dom_.data() + static_cast<std::size_t>(v) * words_;
  }
  bool has(int v, int b) const {
    return (dom(v)[b / 64] >> (b % 64)) & 1;
  }
  int single_value(int v) const {
    const Word* d = dom(v);
    for (int w = 0; w < words_; ++w) {
      if (d[w]) return w * 64 + std::countr_zero(d[w]);
    }
    return -1;
  }
  // First value >= from, or -1.
  int next_value(int v, int from) const {
    const Word* d = dom(v);
    for (int w = from / 64; w < words_; ++w) {
      Word bits = d[w];
      if (w == from / 64) bits &= ~Word{0} << (from % 64);
      if (bits) return w * 64 + std::countr_zero(bits);
    }
    return -1;
  }

  bool counts_ok() const {
    if (!p_.surjective) return true;
    return zero_support_ == 0 && uncovered_ <= unfixed_;
  }

  // Moves variable v from domain `from` to `to`, keeping the counters right.
  void account(int v, const Word* from, const Word* to, int from_size, int to_size) {
    if (!p_.surjective) return;
    for (int w = 0; w < words_; ++w) {
      Word removed = from[w] & ~to[w];
      Word added = to[w] & ~from[w];
      while (removed) {
        int b = w * 64 + std::countr_zero(removed);
        removed &= removed - 1;
        if (--support_[static_cast<std::size_t>(b)] == 0) ++zero_support_;
      }
      while (added) {
        int b = w * 64 + std::countr_zero(added);
        added &= added - 1;
        if (support_[static_cast<std::size_t>(b)]++ == 0) --zero_support_;
      }
    }
    auto value_of = [&](const Word* d) {
      for (int w = 0; w < words_; ++w) {
        if (d[w]) return w * 64 + std::countr_zero(d[w]);
      }
      return -1;
    };
    if (from_size == 1) {
      int b = value_of(from);
      if (--covered_[static_cast<std::size_t>(b)] == 0) ++uncovered_;
      ++unfixed_;
    }
    if (to_size == 1) {
      int b = value_of(to);
      if (covered_[static_cast<std::size_t>(b)]++ == 0) --uncovered_;
      --unfixed_;
    }
    (void)v;
  }

  // Replaces the domain of v by `next` (a subset), recording the old one.
  void narrow(int v, const Word* next) {
    const std::size_t base = saved_.size();
    saved_.insert(saved_.end(), dom(v), dom(v) + words_);
    trail_.push_back({v, base, size_[static_cast<std::size_t>(v)]});
    int next_size = 0;
    for (int w = 0; w < words_; ++w) next_size += std::popcount(next[w]);
    account(v, saved_.data() + base, next, size_[static_cast<std::size_t>(v)], next_size);
    std::copy(next, next + words_, dom(v));
    size_[static_cast<std::size_t>(v)] = next_size;
  }

  void undo_to(std::size_t mark) {
    while (trail_.size() > mark) {
      auto e = trail_.back();
      trail_.pop_back();
      const Word* old = saved_.data() + e.offset;
      account(e.var, dom(e.var), old, size_[static_cast<std::size_t>(e.var)], e.size);
      std::copy(old, old + words_, dom(e.var));
      size_[static_cast<std::size_t>(e.var)] = e.size;
      saved_.resize(e.offset);
    }
  }

  bool init() {
    dom_.assign(static_cast<std::size_t>(n_) * words_, 0);
    size_.assign(static_cast<std::size_t>(n_), 0);
    for (int v = 0; v < n_; ++v) {
      const std::optional<std::vector<int>>* allowed = nullptr;
      if (!p_.domains.empty()) allowed = &p_.domains[static_cast<std::size_t>(v)];
      Word* d = dom(v);
      if (allowed && allowed->has_value()) {
        for (int b : **allowed) {
          if (b < 0 || b >= nb_) throw PreconditionError("domain value out of range");
          d[b / 64] |= Word{1} << (b % 64);
        }
      } else {
        for (int b = 0; b < nb_; ++b) d[b / 64] |= Word{1} << (b % 64);
      }
      int s = 0;
      for (int w = 0; w < words_; ++w) s += std::popcount(d[w]);
      if (s == 0) return false;
      size_[static_cast<std::size_t>(v)] = s;
    }

    // Constraints per variable (each constraint listed once per variable).
    cons_start_.assign(static_cast<std::size_t>(n_) + 1, 0);
    for (const auto& c : p_.constraints) {
      auto scope = distinct(c.scope);
      for (int v : scope) ++cons_start_[static_cast<std::size_t>(v) + 1];
    }
    for (int v = 0; v < n_; ++v) {
      cons_start_[static_cast<std::size_t>(v) + 1] += cons_start_[static_cast<std::size_t>(v)];
    }
    cons_list_.resize(cons_start_.back());
    std::vector<std::size_t> fill(cons_start_.begin(), cons_start_.end() - 1);
    for (std::size_t ci = 0; ci < p_.constraints.size(); ++ci) {
      for (int v : distinct(p_.constraints[ci].scope)) {
        cons_list_[fill[static_cast<std::size_t>(v)]++] = static_cast<std::uint32_t>(ci);
      }
    }
    in_queue_.assign(p_.constraints.size(), 0);

    if (p_.surjective) {
      support_.assign(static_cast<std::size_t>(nb_), 0);
      covered_.assign(static_cast<std::size_t>(nb_), 0);
      for (int v = 0; v < n_; ++v) {
        const Word* d = dom(v);
        for (int b = 0; b < nb_; ++b) {
          if ((d[b / 64] >> (b % 64)) & 1) ++support_[static_cast<std::size_t>(b)];
        }
        if (size_[static_cast<std::size_t>(v)] == 1) {
          ++covered_[static_cast<std::size_t>(single_value(v))];
        } else {
          ++unfixed_;
        }
      }
      for (int b = 0; b < nb_; ++b) {
        if (support_[static_cast<std::size_t>(b)] == 0) ++zero_support_;
        if (covered_[static_cast<std::size_t>(b)] == 0) ++uncovered_;
      }
    }
    supp_.assign(static_cast<std::size_t>(words_) * 8, 0);
    scratch_.assign(static_cast<std::size_t>(words_), 0);
    return counts_ok();
  }

  static std::vector<int> distinct(const std::vector<int>& scope) {
    std::vector<int> out;
    for (int v : scope) {
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
    return out;
  }

  // Generalized arc consistency on one constraint. Returns false on wipe-out.
  bool revise(std::size_t ci, bool force) {
    const Constraint& c = p_.constraints[ci];
    const int arity = static_cast<int>(c.scope.size());
    const auto& index = *p_.index;

    bool all_fixed = true;
    int pivot = 0;
    for (int i = 0; i < arity; ++i) {
      int v = c.scope[static_cast<std::size_t>(i)];
      if (size_[static_cast<std::size_t>(v)] != 1) all_fixed = false;
      if (size_[static_cast<std::size_t>(v)] <
          size_[static_cast<std::size_t>(c.scope[static_cast<std::size_t>(pivot)])]) {
        pivot = i;
      }
    }
    if (all_fixed) {
      tuple_.resize(static_cast<std::size_t>(arity));
      for (int i = 0; i < arity; ++i) {
        tuple_[static_cast<std::size_t>(i)] = single_value(c.scope[static_cast<std::size_t>(i)]);
      }
      return index.contains(c.relation, tuple_);
    }

    const int pv = c.scope[static_cast<std::size_t>(pivot)];
    if (!force && size_[static_cast<std::size_t>(pv)] > 1) {
      std::size_t cost = 0;
      for (int b = next_value(pv, 0); b >= 0; b = next_value(pv, b + 1)) {
        cost += index.with(c.relation, pivot, b).size();
        if (cost > kRevisionBudget) return true;
      }
    }

    if (supp_.size() < static_cast<std::size_t>(arity) * words_) {
      supp_.resize(static_cast<std::size_t>(arity) * words_);
    }
    std::fill(supp_.begin(), supp_.begin() + static_cast<std::ptrdiff_t>(arity) * words_, 0);
    const Relation& rel = index.target().relation(c.relation);
    for (int b = next_value(pv, 0); b >= 0; b = next_value(pv, b + 1)) {
      for (std::uint32_t ti : index.with(c.relation, pivot, b)) {
        auto t = rel.tuple(ti);
        bool ok = true;
        for (int i = 0; i < arity && ok; ++i) {
          int v = c.scope[static_cast<std::size_t>(i)];
          ok = has(v, t[i]);
          // Repeated variables need equal values.
          for (int j = 0; j < i && ok; ++j) {
            if (c.scope[static_cast<std::size_t>(j)] == v) ok = t[j] == t[i];
          }
        }
        if (!ok) continue;
        for (int i = 0; i < arity; ++i) {
          supp_[static_cast<std::size_t>(i) * words_ + t[i] / 64] |= Word{1} << (t[i] % 64);
        }
      }
    }
    for (int i = 0; i < arity; ++i) {
      int v = c.scope[static_cast<std::size_t>(i)];
      bool first = true;
      for (int j = 0; j < i; ++j) {
        if (c.scope[static_cast<std::size_t>(j)] == v) first = false;
      }
      if (!first) continue;
      const Word* d = dom(v);
      bool changed = false;
      bool empty = true;
      for (int w = 0; w < words_; ++w) {
        Word x = d[w];
        for (int j = i; j < arity; ++j) {
          if (c.scope[static_cast<std::size_t>(j)] == v) {
            x &= supp_[static_cast<std::size_t>(j) * words_ + w];
          }
        }
        scratch_[static_cast<std::size_t>(w)] = x;
        if (x != d[w]) changed = true;
        if (x) empty = false;
      }
      if (empty) return false;
      if (changed) {
        narrow(v, scratch_.data());
        enqueue_constraints_of(v, ci);
      }
    }
    return true;
  }

  void enqueue_constraints_of(int v, std::size_t except) {
    for (std::size_t k = cons_start_[static_cast<std::size_t>(v)];
         k < cons_start_[static_cast<std::size_t>(v) + 1]; ++k) {
      std::uint32_t ci = cons_list_[k];
      if (ci == except || in_queue_[ci]) continue;
      in_queue_[ci] = 1;
      queue_.push_back(ci);
    }
  }

  bool drain() {
    bool ok = counts_ok();
    while (!queue_.empty()) {
      std::uint32_t ci = queue_.back();
      queue_.pop_back();
      in_queue_[ci] = 0;
      if (!ok) continue;
      ok = revise(ci, false) && counts_ok();
    }
    return ok;
  }

  bool root_propagate() {
    std::size_t total = 0;
    for (const auto& c : p_.constraints) {
      total += p_.index->target().relation(c.relation).size();
    }
    const bool all = total <= kRootBudget;
    for (std::size_t ci = 0; ci < p_.constraints.size(); ++ci) {
      const auto& c = p_.constraints[ci];
      bool unary = distinct(c.scope).size() == 1;
      if (!(all || unary)) continue;
      if (!revise(ci, true)) return false;
      if (!drain()) return false;
    }
    return counts_ok();
  }

  std::optional<std::vector<int>> search() {
    struct Frame {
      int order_pos;
      int var;
      int next;
      std::size_t mark;
    };
    const auto order = variable_order(p_);
    std::vector<Frame> stack;
    auto descend = [&](int pos) {
      while (pos < n_ && size_[static_cast<std::size_t>(order[static_cast<std::size_t>(pos)])] == 1) {
        ++pos;
      }
      if (pos == n_) return true;
      stack.push_back({pos, order[static_cast<std::size_t>(pos)], 0, trail_.size()});
      return false;
    };
    if (descend(0)) return extract();
    std::vector<Word> one(static_cast<std::size_t>(words_));
    while (!stack.empty()) {
      Frame& f = stack.back();
      undo_to(f.mark);
      int b = next_value(f.var, f.next);
      if (b < 0) {
        stack.pop_back();
        continue;
      }
      f.next = b + 1;
      if (p_.max_nodes > 0 && ++nodes_ > p_.max_nodes) {
        throw ResourceError("search exceeded " + std::to_string(p_.max_nodes) + " nodes");
      }
      std::fill(one.begin(), one.end(), 0);
      one[static_cast<std::size_t>(b / 64)] = Word{1} << (b % 64);
      narrow(f.var, one.data());
      enqueue_constraints_of(f.var, SIZE_MAX);
      if (!drain()) continue;
      if (descend(f.order_pos + 1)) return extract();
    }
    return std::nullopt;
  }

  std::vector<int> extract() const {
    std::vector<int> out(static_cast<std::size_t>(n_));
    for (int v = 0; v < n_; ++v) out[static_cast<std::size_t>(v)] = single_value(v);
    return out;
  }

  struct TrailEntry {
    int var;
    std::size_t offset;
    int size;
  };

  const CspProblem& p_;
  const int n_;
  const int nb_;
  const int words_;
  std::vector<Word> dom_;
  std::vector<int> size_;
  std::vector<Word> saved_;
  std::vector<TrailEntry> trail_;
  std::vector<std::size_t> cons_start_;
  std::vector<std::uint32_t> cons_list_;
  std::vector<std::uint32_t> queue_;
  std::vector<char> in_queue_;
  std::vector<Word> supp_;
  std::vector<Word> scratch_;
  std::vector<int> tuple_;
  std::vector<int> support_;
  std::vector<int> covered_;
  int zero_support_ = 0;
  int uncovered_ = 0;
  int unfixed_ = 0;
  std::int64_t nodes_ = 0;
};

}  // namespace

std::optional<std::vector<int>> solve(const CspProblem& problem) {
  if (!problem.index) throw PreconditionError("CSP without a target index");
  if (!problem.domains.empty() &&
      static_cast<int>(problem.domains.size()) != problem.num_vars) {
    throw PreconditionError("CSP domain list has the wrong length");
  }
  return Solver(problem).run();
}

}  // namespace qcsp::detail
