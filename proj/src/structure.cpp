#include "qcsp/structure.hpp"

#include <algorithm>
#include <numeric>
#include <set>

#include "qcsp/errors.hpp"

namespace qcsp {

namespace {

bool tuple_less(std::span<const int> a, std::span<const int> b) {
  return std::lexicographical_compare(a.begin(), a.end(), b.begin(), b.end());
}

std::string join_coords(const std::vector<std::string>& parts) {
  std::string out = "(";
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += ",";
    out += parts[i];
  }
  return out + ")";
}

constexpr int kMaxLabelled = 4096;

void require_same_signature(const Structure& a, const Structure& b,
                            const char* op) {
  if (!(a.signature() == b.signature())) {
    throw SignatureError(std::string(op) + ": signatures differ");
  }
}

}  // namespace

std::optional<std::int64_t> checked_pow(std::int64_t base, std::int64_t exp,
                                        std::int64_t limit) {
  std::int64_t result = 1;
  for (std::int64_t i = 0; i < exp; ++i) {
    if (base != 0 && result > limit / base) return std::nullopt;
    result *= base;
  }
  if (result > limit) return std::nullopt;
  return result;
}

// --- Signature ---------------------------------------------------------------

Signature::Signature(std::vector<RelationSymbol> relations, int constant_count)
    : relations_(std::move(relations)), constant_count_(constant_count) {
  if (constant_count_ < 0) {
    throw SignatureError("negative constant count");
  }
  std::set<std::string> seen;
  for (const auto& r : relations_) {
    if (r.arity < 1) {
      throw SignatureError("relation '" + r.name + "' has arity < 1");
    }
    if (r.name.empty()) throw SignatureError("empty relation name");
    if (!seen.insert(r.name).second) {
      throw SignatureError("duplicate relation symbol '" + r.name + "'");
    }
  }
}

std::optional<std::size_t> Signature::find(const std::string& name) const {
  for (std::size_t i = 0; i < relations_.size(); ++i) {
    if (relations_[i].name == name) return i;
  }
  return std::nullopt;
}

Signature Signature::with_constants(int count) const {
  return Signature(relations_, count);
}

// --- Relation ----------------------------------------------------------------

Relation::Relation(int arity, std::vector<int> flat) : arity_(arity) {
  if (arity < 1) throw SignatureError("relation arity must be positive");
  if (flat.size() % static_cast<std::size_t>(arity) != 0) {
    throw PreconditionError("tuple data length is not a multiple of arity");
  }
  const std::size_t n = flat.size() / static_cast<std::size_t>(arity);
  auto at = [&](std::size_t i) {
    return std::span<const int>(flat.data() + i * arity,
                                static_cast<std::size_t>(arity));
  };
  bool sorted_unique = true;
  for (std::size_t i = 1; i < n && sorted_unique; ++i) {
    sorted_unique = tuple_less(at(i - 1), at(i));
  }
  if (sorted_unique) {
    data_ = std::move(flat);
    return;
  }
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t x, std::size_t y) { return tuple_less(at(x), at(y)); });
  data_.reserve(flat.size());
  for (std::size_t k = 0; k < n; ++k) {
    auto t = at(order[k]);
    if (k > 0 && std::equal(t.begin(), t.end(), at(order[k - 1]).begin())) {
      continue;
    }
    data_.insert(data_.end(), t.begin(), t.end());
  }
}

std::ptrdiff_t Relation::index_of(std::span<const int> t) const {
  if (static_cast<int>(t.size()) != arity_) return -1;
  std::size_t lo = 0;
  std::size_t hi = size();
  while (lo < hi) {
    std::size_t mid = (lo + hi) / 2;
    if (tuple_less(tuple(mid), t)) {
      lo = mid + 1;
    } else {
      hi = mid;
    }
  }
  if (lo < size()) {
    auto u = tuple(lo);
    if (std::equal(u.begin(), u.end(), t.begin())) {
      return static_cast<std::ptrdiff_t>(lo);
    }
  }
  return -1;
}

bool Relation::contains(std::span<const int> t) const {
  return index_of(t) >= 0;
}

// --- Structure ---------------------------------------------------------------

Structure::Structure(Signature signature, int size,
                     std::vector<Relation> relations, std::vector<int> constants,
                     std::vector<std::string> labels, std::string name)
    : signature_(std::move(signature)),
      size_(size),
      relations_(std::move(relations)),
      constants_(std::move(constants)),
      labels_(std::move(labels)),
      name_(std::move(name)) {
  if (size_ < 0) throw PreconditionError("negative domain size");
  if (relations_.size() != signature_.relation_count()) {
    throw SignatureError("relation count does not match signature");
  }
  for (std::size_t r = 0; r < relations_.size(); ++r) {
    const auto& sym = signature_.relation(r);
    if (relations_[r].arity() != sym.arity) {
      throw SignatureError("relation '" + sym.name + "' has wrong arity");
    }
    for (int v : relations_[r].flat()) {
      if (v < 0 || v >= size_) {
        throw PreconditionError("tuple of '" + sym.name +
                                "' has an out-of-range element");
      }
    }
  }
  if (static_cast<int>(constants_.size()) != signature_.constant_count()) {
    throw PreconditionError("every constant must be interpreted");
  }
  for (int c : constants_) {
    if (c < 0 || c >= size_) {
      throw PreconditionError("constant interpreted outside the domain");
    }
  }
  if (!labels_.empty() && static_cast<int>(labels_.size()) != size_) {
    throw PreconditionError("label list length differs from domain size");
  }
}

const Relation& Structure::relation(const std::string& name) const {
  auto idx = signature_.find(name);
  if (!idx) throw SignatureError("unknown relation symbol '" + name + "'");
  return relations_[*idx];
}

std::string Structure::label(int i) const {
  if (!labels_.empty()) return labels_[static_cast<std::size_t>(i)];
  return std::to_string(i);
}

std::size_t Structure::tuple_count() const {
  std::size_t total = 0;
  for (const auto& r : relations_) total += r.size();
  return total;
}

Structure Structure::with_name(std::string name) const {
  Structure copy = *this;
  copy.name_ = std::move(name);
  return copy;
}

Structure Structure::with_labels(std::vector<std::string> labels) const {
  return Structure(signature_, size_, relations_, constants_, std::move(labels),
                   name_);
}

Structure Structure::without_constants() const {
  return Structure(signature_.with_constants(0), size_, relations_, {}, labels_,
                   name_);
}

bool Structure::same_as(const Structure& other) const {
  return signature_ == other.signature_ && size_ == other.size_ &&
         relations_ == other.relations_ && constants_ == other.constants_;
}

// --- StructureBuilder --------------------------------------------------------

StructureBuilder::StructureBuilder(Signature signature, int size)
    : signature_(std::move(signature)),
      size_(size),
      flat_(signature_.relation_count()) {}

StructureBuilder& StructureBuilder::add(std::size_t relation,
                                        std::span<const int> tuple) {
  if (relation >= flat_.size()) throw SignatureError("relation index out of range");
  if (static_cast<int>(tuple.size()) != signature_.relation(relation).arity) {
    throw SignatureError("tuple arity mismatch for '" +
                         signature_.relation(relation).name + "'");
  }
  flat_[relation].insert(flat_[relation].end(), tuple.begin(), tuple.end());
  return *this;
}

StructureBuilder& StructureBuilder::add(const std::string& relation,
                                        std::initializer_list<int> tuple) {
  auto idx = signature_.find(relation);
  if (!idx) throw SignatureError("unknown relation symbol '" + relation + "'");
  return add(*idx, std::span<const int>(tuple.begin(), tuple.size()));
}

StructureBuilder& StructureBuilder::add_symmetric_edge(const std::string& relation,
                                                       int x, int y) {
  add(relation, {x, y});
  return add(relation, {y, x});
}

StructureBuilder& StructureBuilder::constants(std::vector<int> values) {
  constants_ = std::move(values);
  return *this;
}

StructureBuilder& StructureBuilder::labels(std::vector<std::string> values) {
  labels_ = std::move(values);
  return *this;
}

StructureBuilder& StructureBuilder::name(std::string value) {
  name_ = std::move(value);
  return *this;
}

Structure StructureBuilder::build() const {
  std::vector<Relation> rels;
  rels.reserve(flat_.size());
  for (std::size_t r = 0; r < flat_.size(); ++r) {
    rels.emplace_back(signature_.relation(r).arity, flat_[r]);
  }
  Signature sig = signature_;
  if (static_cast<int>(constants_.size()) != sig.constant_count()) {
    sig = sig.with_constants(static_cast<int>(constants_.size()));
  }
  return Structure(sig, size_, std::move(rels), constants_, labels_, name_);
}

// --- operations --------------------------------------------------------------

namespace {

std::vector<Relation> product_relations(const Structure& a, const Structure& b,
                                        const ResourceLimits& limits) {
  const std::int64_t nb = b.size();
  std::int64_t total = 0;
  for (std::size_t r = 0; r < a.relations().size(); ++r) {
    total += static_cast<std::int64_t>(a.relation(r).size()) *
             static_cast<std::int64_t>(b.relation(r).size());
  }
  if (total > limits.max_tuples) {
    throw ResourceError("product would have " + std::to_string(total) +
                        " tuples (cap " + std::to_string(limits.max_tuples) + ")");
  }
  std::vector<Relation> rels;
  for (std::size_t r = 0; r < a.relations().size(); ++r) {
    const Relation& ra = a.relation(r);
    const Relation& rb = b.relation(r);
    const int arity = ra.arity();
    std::vector<int> flat;
    flat.reserve(ra.size() * rb.size() * static_cast<std::size_t>(arity));
    for (std::size_t i = 0; i < ra.size(); ++i) {
      auto t = ra.tuple(i);
      for (std::size_t j = 0; j < rb.size(); ++j) {
        auto u = rb.tuple(j);
        for (int p = 0; p < arity; ++p) {
          flat.push_back(static_cast<int>(t[p] * nb + u[p]));
        }
      }
    }
    // Tuples of a and b are sorted, so the first coordinate of the output is
    // already ordered; Relation sorts the rest.
    rels.emplace_back(arity, std::move(flat));
  }
  return rels;
}

void check_size(std::int64_t size, const ResourceLimits& limits, const char* op) {
  if (size > limits.max_elements) {
    throw ResourceError(std::string(op) + " would have " + std::to_string(size) +
                        " elements (cap " + std::to_string(limits.max_elements) +
                        ")");
  }
}

}  // namespace

Structure product(const Structure& a, const Structure& b,
                  const ResourceLimits& limits) {
  require_same_signature(a, b, "product");
  const std::int64_t size = static_cast<std::int64_t>(a.size()) * b.size();
  check_size(size, limits, "product");
  auto rels = product_relations(a, b, limits);
  std::vector<int> constants;
  for (std::size_t i = 0; i < a.constants().size(); ++i) {
    constants.push_back(a.constants()[i] * b.size() + b.constants()[i]);
  }
  std::vector<std::string> labels;
  if (size <= kMaxLabelled && (a.has_labels() || b.has_labels())) {
    for (int x = 0; x < a.size(); ++x) {
      for (int y = 0; y < b.size(); ++y) {
        labels.push_back(join_coords({a.label(x), b.label(y)}));
      }
    }
  }
  return Structure(a.signature(), static_cast<int>(size), std::move(rels),
                   std::move(constants), std::move(labels));
}

std::vector<int> power_coordinates(std::int64_t index, int n, int r) {
  std::vector<int> coords(static_cast<std::size_t>(r));
  for (int i = r - 1; i >= 0; --i) {
    coords[static_cast<std::size_t>(i)] = static_cast<int>(index % n);
    index /= n;
  }
  return coords;
}

Structure power(const Structure& a, int r, const ResourceLimits& limits) {
  if (r < 1) throw PreconditionError("power exponent must be at least 1");
  auto size = checked_pow(a.size(), r, limits.max_elements);
  if (!size) {
    throw ResourceError("power " + std::to_string(r) + " of a " +
                        std::to_string(a.size()) +
                        "-element structure exceeds the element cap");
  }
  ResourceLimits inner = limits;
  Structure plain = a.with_labels({});
  Structure result = plain;
  for (int i = 1; i < r; ++i) result = product(result, plain, inner);
  if (r > 1 && *size <= kMaxLabelled && a.has_labels()) {
    std::vector<std::string> labels;
    labels.reserve(static_cast<std::size_t>(*size));
    for (std::int64_t e = 0; e < *size; ++e) {
      std::vector<std::string> parts;
      for (int c : power_coordinates(e, a.size(), r)) parts.push_back(a.label(c));
      labels.push_back(join_coords(parts));
    }
    result = result.with_labels(std::move(labels));
  } else if (r == 1) {
    result = a;
  }
  return result.with_name({});
}

Structure disjoint_union(const Structure& a, const Structure& b) {
  require_same_signature(a, b, "disjoint_union");
  if (a.signature().constant_count() != 0) {
    throw PreconditionError("disjoint_union: structures with constants");
  }
  std::vector<Relation> rels;
  for (std::size_t r = 0; r < a.relations().size(); ++r) {
    std::vector<int> flat = a.relation(r).flat();
    for (int v : b.relation(r).flat()) flat.push_back(v + a.size());
    rels.emplace_back(a.relation(r).arity(), std::move(flat));
  }
  std::vector<std::string> labels;
  if (a.has_labels() || b.has_labels()) {
    for (int x = 0; x < a.size(); ++x) labels.push_back(a.label(x) + ".0");
    for (int y = 0; y < b.size(); ++y) labels.push_back(b.label(y) + ".1");
  }
  return Structure(a.signature(), a.size() + b.size(), std::move(rels), {},
                   std::move(labels));
}

Structure expansion(const Structure& a, const std::vector<int>& lambda) {
  if (a.signature().constant_count() != 0) {
    throw PreconditionError("expansion: structure already has constants");
  }
  for (int v : lambda) {
    if (v < 0 || v >= a.size()) {
      throw PreconditionError("expansion: element " + std::to_string(v) +
                              " out of range");
    }
  }
  return Structure(a.signature().with_constants(static_cast<int>(lambda.size())),
                   a.size(), a.relations(), lambda, a.labels(), a.name());
}

std::optional<std::int64_t> superprodukt_size(int n, int m) {
  auto factors = checked_pow(n, m, 62);
  if (!factors) return std::nullopt;
  return checked_pow(n, *factors, std::int64_t{1} << 62);
}

Structure superprodukt(const Structure& a, int m, const ResourceLimits& limits) {
  if (m < 1) throw PreconditionError("superprodukt needs m >= 1");
  if (a.signature().constant_count() != 0) {
    throw PreconditionError("superprodukt: structure already has constants");
  }
  if (a.size() == 0) throw PreconditionError("superprodukt of an empty structure");
  auto size = superprodukt_size(a.size(), m);
  if (!size || *size > limits.max_elements) {
    throw ResourceError("superprodukt of a " + std::to_string(a.size()) +
                        "-element structure with " + std::to_string(m) +
                        " constants exceeds the element cap");
  }
  const int n = a.size();
  const int factors = static_cast<int>(*checked_pow(n, m));
  Structure plain = a.with_labels({});
  std::optional<Structure> result;
  for (int f = 0; f < factors; ++f) {
    Structure factor = expansion(plain, power_coordinates(f, n, m));
    result = result ? product(*result, factor, limits) : factor;
  }
  return result->with_name({});
}

Structure substructure(const Structure& a, const std::vector<int>& keep_elements,
                       const std::vector<std::vector<int>>& keep_tuples) {
  std::vector<int> kept = keep_elements;
  std::sort(kept.begin(), kept.end());
  kept.erase(std::unique(kept.begin(), kept.end()), kept.end());
  std::vector<int> new_index(static_cast<std::size_t>(a.size()), -1);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    if (kept[i] < 0 || kept[i] >= a.size()) {
      throw PreconditionError("substructure: element out of range");
    }
    new_index[static_cast<std::size_t>(kept[i])] = static_cast<int>(i);
  }
  if (keep_tuples.size() != a.relations().size()) {
    throw SignatureError("substructure: one tuple list per relation required");
  }
  std::vector<Relation> rels;
  for (std::size_t r = 0; r < keep_tuples.size(); ++r) {
    const int arity = a.relation(r).arity();
    const auto& src = keep_tuples[r];
    if (src.size() % static_cast<std::size_t>(arity) != 0) {
      throw PreconditionError("substructure: tuple data length mismatch");
    }
    std::vector<int> flat;
    flat.reserve(src.size());
    for (std::size_t i = 0; i < src.size(); i += static_cast<std::size_t>(arity)) {
      std::span<const int> t(src.data() + i, static_cast<std::size_t>(arity));
      if (!a.relation(r).contains(t)) {
        throw PreconditionError("substructure: tuple not present in '" +
                                a.signature().relation(r).name + "'");
      }
      for (int v : t) {
        if (new_index[static_cast<std::size_t>(v)] < 0) {
          throw PreconditionError("substructure: dangling tuple in '" +
                                  a.signature().relation(r).name + "'");
        }
        flat.push_back(new_index[static_cast<std::size_t>(v)]);
      }
    }
    rels.emplace_back(arity, std::move(flat));
  }
  std::vector<int> constants;
  for (int c : a.constants()) {
    if (new_index[static_cast<std::size_t>(c)] < 0) {
      throw PreconditionError("substructure: constant on a dropped element");
    }
    constants.push_back(new_index[static_cast<std::size_t>(c)]);
  }
  std::vector<std::string> labels;
  for (int v : kept) labels.push_back(a.label(v));
  return Structure(a.signature(), static_cast<int>(kept.size()), std::move(rels),
                   std::move(constants), std::move(labels));
}

Structure induced_substructure(const Structure& a,
                               const std::vector<int>& keep_elements) {
  std::vector<bool> keep(static_cast<std::size_t>(a.size()), false);
  for (int v : keep_elements) {
    if (v < 0 || v >= a.size()) {
      throw PreconditionError("substructure: element out of range");
    }
    keep[static_cast<std::size_t>(v)] = true;
  }
  std::vector<std::vector<int>> tuples;
  for (const auto& rel : a.relations()) {
    std::vector<int> flat;
    for (std::size_t i = 0; i < rel.size(); ++i) {
      auto t = rel.tuple(i);
      if (std::all_of(t.begin(), t.end(),
                      [&](int v) { return keep[static_cast<std::size_t>(v)]; })) {
        flat.insert(flat.end(), t.begin(), t.end());
      }
    }
    tuples.push_back(std::move(flat));
  }
  return substructure(a, keep_elements, tuples);
}

}  // namespace qcsp
