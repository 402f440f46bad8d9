#include "qcsp/qcore.hpp"

#include <algorithm>
#include <map>

#include "qcsp/errors.hpp"
#include "qcsp/hom.hpp"

namespace qcsp {

namespace {

struct TupleRef {
  std::size_t relation;
  std::vector<int> values;
};

// Largest superprodukt(a, 1) used for the one-constant sentence filter.
constexpr std::int64_t kSentenceFilterLimit = 4096;

class Enumerator {
 public:
  Enumerator(const Structure& a, const QcoreOptions& options)
      : a_(a), options_(options) {
    for (std::size_t r = 0; r < a.relations().size(); ++r) {
      const Relation& rel = a.relation(r);
      for (std::size_t t = 0; t < rel.size(); ++t) {
        auto tup = rel.tuple(t);
        tuples_.push_back({r, std::vector<int>(tup.begin(), tup.end())});
      }
    }
    auto sp = superprodukt_size(a.size(), 1);
    sentence_filter_ = sp && *sp <= kSentenceFilterLimit;
  }

  QcoreReport run() {
    QcoreReport report;
    const int n = a_.size();
    for (int s = 1; s <= n; ++s) {
      auto subsets = element_subsets(n, s);
      std::vector<std::vector<int>> induced;
      std::size_t max_tuples = 0;
      for (const auto& elems : subsets) {
        induced.push_back(induced_tuples(elems));
        max_tuples = std::max(max_tuples, induced.back().size());
      }
      for (std::size_t t = 0; t <= max_tuples; ++t) {
        for (std::size_t k = 0; k < subsets.size(); ++k) {
          if (induced[k].size() < t) continue;
          std::vector<std::size_t> pick(t);
          for (std::size_t i = 0; i < t; ++i) pick[i] = i;
          while (true) {
            std::vector<int> chosen;
            for (std::size_t i : pick) chosen.push_back(induced[k][i]);
            if (++report.candidates_examined > options_.max_candidates) {
              report.inconclusive = true;
              report.diagnostics.push_back("candidate cap reached");
              return report;
            }
            if (try_candidate(subsets[k], chosen, report)) {
              report.is_induced = chosen.size() == induced[k].size();
              certify(report);
              return report;
            }
            if (!next_combination(pick, induced[k].size())) break;
          }
        }
      }
    }
    report.diagnostics.push_back("no candidate was equivalent");
    report.inconclusive = true;
    return report;
  }

 private:
  using Key = std::pair<std::vector<int>, std::vector<int>>;

  static std::vector<std::vector<int>> element_subsets(int n, int s) {
    std::vector<std::vector<int>> out;
    std::vector<std::size_t> pick(static_cast<std::size_t>(s));
    for (int i = 0; i < s; ++i) pick[static_cast<std::size_t>(i)] = static_cast<std::size_t>(i);
    while (true) {
      out.emplace_back(pick.begin(), pick.end());
      if (!next_combination(pick, static_cast<std::size_t>(n))) break;
    }
    return out;
  }

  static bool next_combination(std::vector<std::size_t>& pick, std::size_t n) {
    const std::size_t k = pick.size();
    for (std::size_t i = k; i-- > 0;) {
      if (pick[i] < n - k + i) {
        ++pick[i];
        for (std::size_t j = i + 1; j < k; ++j) pick[j] = pick[j - 1] + 1;
        return true;
      }
    }
    return false;
  }

  std::vector<int> induced_tuples(const std::vector<int>& elems) const {
    std::vector<int> out;
    for (std::size_t i = 0; i < tuples_.size(); ++i) {
      const auto& v = tuples_[i].values;
      if (std::all_of(v.begin(), v.end(), [&](int x) {
            return std::binary_search(elems.begin(), elems.end(), x);
          })) {
        out.push_back(static_cast<int>(i));
      }
    }
    return out;
  }

  SubstructureSpec spec_of(const std::vector<int>& elems,
                           const std::vector<int>& chosen) const {
    SubstructureSpec spec;
    spec.elements = elems;
    spec.tuples.resize(a_.relations().size());
    for (int i : chosen) {
      const auto& t = tuples_[static_cast<std::size_t>(i)];
      auto& flat = spec.tuples[t.relation];
      flat.insert(flat.end(), t.values.begin(), t.values.end());
    }
    return spec;
  }

  bool try_candidate(const std::vector<int>& elems, const std::vector<int>& chosen,
                     QcoreReport& report) {
    SubstructureSpec spec = spec_of(elems, chosen);
    Structure c = substructure(a_, spec.elements, spec.tuples);
    RejectedCandidate rej;
    rej.spec = spec;
    Key key{elems, chosen};

    if (!find_hom(a_, c)) {
      rej.reason = "hom";
      rej.failed_forward = true;
      rejected_.emplace(std::move(key), std::move(rej));
      return false;
    }
    if (sentence_filter_) {
      if (auto phi = distinguishing_sentence(a_, c, 1, options_.containment.limits)) {
        rej.reason = "sentence";
        rej.sentence = std::move(phi);
        rej.failed_forward = true;
        rejected_.emplace(std::move(key), std::move(rej));
        return false;
      }
      if (auto phi = distinguishing_sentence(c, a_, 1, options_.containment.limits)) {
        rej.reason = "sentence";
        rej.sentence = std::move(phi);
        rejected_.emplace(std::move(key), std::move(rej));
        return false;
      }
    }
    EquivalenceResult eq = equivalent(a_, c, options_.containment);
    if (eq.value == Tribool::kTrue) {
      report.found = true;
      report.core = c.with_name(a_.name().empty() ? "" : a_.name() + "-qcore");
      report.spec = std::move(spec);
      report.forward = std::move(eq.forward);
      report.backward = std::move(eq.backward);
      return true;
    }
    if (eq.value == Tribool::kFalse) {
      rej.reason = "containment";
      rej.failed_forward = eq.forward.outcome == Outcome::kNo;
    } else {
      rej.reason = "inconclusive";
      report.diagnostics.push_back("candidate " + std::to_string(report.candidates_examined) +
                                   " left undecided");
    }
    rejected_.emplace(std::move(key), std::move(rej));
    return false;
  }

  // Every immediate weakening was enumerated earlier; collect its verdict.
  void certify(QcoreReport& report) {
    const auto& elems = report.spec.elements;
    std::vector<int> chosen;
    for (std::size_t r = 0; r < report.spec.tuples.size(); ++r) {
      const auto& flat = report.spec.tuples[r];
      const int arity = a_.relation(r).arity();
      for (std::size_t i = 0; i < flat.size(); i += static_cast<std::size_t>(arity)) {
        std::vector<int> v(flat.begin() + static_cast<std::ptrdiff_t>(i),
                           flat.begin() + static_cast<std::ptrdiff_t>(i) + arity);
        for (std::size_t k = 0; k < tuples_.size(); ++k) {
          if (tuples_[k].relation == r && tuples_[k].values == v) {
            chosen.push_back(static_cast<int>(k));
          }
        }
      }
    }
    std::sort(chosen.begin(), chosen.end());
    std::vector<Key> weakenings;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      std::vector<int> fewer = chosen;
      fewer.erase(fewer.begin() + static_cast<std::ptrdiff_t>(i));
      weakenings.push_back({elems, fewer});
    }
    if (elems.size() > 1) {
      for (std::size_t i = 0; i < elems.size(); ++i) {
        std::vector<int> e = elems;
        e.erase(e.begin() + static_cast<std::ptrdiff_t>(i));
        std::vector<int> keep;
        for (int k : chosen) {
          const auto& v = tuples_[static_cast<std::size_t>(k)].values;
          if (std::find(v.begin(), v.end(), elems[i]) == v.end()) keep.push_back(k);
        }
        weakenings.push_back({e, keep});
      }
    }
    for (const auto& key : weakenings) {
      auto it = rejected_.find(key);
      if (it == rejected_.end()) {
        report.inconclusive = true;
        report.diagnostics.push_back("a weakening was not examined");
        continue;
      }
      if (it->second.reason == "inconclusive") report.inconclusive = true;
      report.minimality.push_back(it->second);
    }
  }

  const Structure& a_;
  const QcoreOptions& options_;
  std::vector<TupleRef> tuples_;
  bool sentence_filter_ = false;
  std::map<Key, RejectedCandidate> rejected_;
};

}  // namespace

QcoreReport find_qcore(const Structure& a, const QcoreOptions& options) {
  if (a.signature().constant_count() != 0) {
    throw PreconditionError("find_qcore needs a constant-free structure");
  }
  if (a.size() < 1) throw PreconditionError("find_qcore needs a nonempty structure");
  if (a.size() > options.max_input_size) {
    throw ResourceError("find_qcore: " + std::to_string(a.size()) +
                        " elements exceed the cap of " +
                        std::to_string(options.max_input_size));
  }
  return Enumerator(a, options).run();
}

IdempotencyResult check_idempotency_obstruction(const Structure& h, int nonloop,
                                                int dominating,
                                                const ResourceLimits& limits) {
  if (h.signature().relation_count() != 1 || h.signature().relation(0).arity != 2 ||
      h.signature().constant_count() != 0) {
    throw PreconditionError("idempotency check needs a constant-free digraph");
  }
  if (nonloop < 0 || nonloop >= h.size() || dominating < 0 || dominating >= h.size()) {
    throw PreconditionError("vertex out of range");
  }
  if (nonloop == dominating) {
    throw PreconditionError("the non-loop and the dominating vertex must differ");
  }
  const Relation& e = h.relation(0);
  if (e.contains(std::vector<int>{nonloop, nonloop})) {
    throw PreconditionError("vertex " + h.label(nonloop) + " has a self-loop");
  }
  for (int y = 0; y < h.size(); ++y) {
    if (!e.contains(std::vector<int>{dominating, y}) ||
        !e.contains(std::vector<int>{y, dominating})) {
      throw PreconditionError("vertex " + h.label(dominating) + " is not dominating");
    }
  }
  IdempotencyResult r;
  r.square = power(expansion(h, {nonloop, dominating}), 2, limits);
  r.target = expansion(h, {dominating, dominating});
  r.witness = find_surjective_hom(r.square, r.target, true);
  r.holds = r.witness.has_value();
  return r;
}

}  // namespace qcsp
