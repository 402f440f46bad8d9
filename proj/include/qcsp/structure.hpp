#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace qcsp {

struct RelationSymbol {
  std::string name;
  int arity = 0;

  bool operator==(const RelationSymbol&) const = default;
};

// Relation symbols with arities plus the number of constant symbols c1..cm.
class Signature {
 public:
  Signature() = default;
  explicit Signature(std::vector<RelationSymbol> relations,
                     int constant_count = 0);

  const std::vector<RelationSymbol>& relations() const { return relations_; }
  std::size_t relation_count() const { return relations_.size(); }
  const RelationSymbol& relation(std::size_t i) const { return relations_[i]; }
  int constant_count() const { return constant_count_; }

  std::optional<std::size_t> find(const std::string& name) const;

  // Same relations, different number of constants.
  Signature with_constants(int count) const;

  bool operator==(const Signature&) const = default;

 private:
  std::vector<RelationSymbol> relations_;
  int constant_count_ = 0;
};

// A set of tuples of fixed arity, stored flat and sorted lexicographically.
class Relation {
 public:
  Relation() = default;
  // `flat` holds consecutive tuples; it is sorted and deduplicated here.
  Relation(int arity, std::vector<int> flat);

  int arity() const { return arity_; }
  std::size_t size() const {
    return arity_ == 0 ? 0 : data_.size() / static_cast<std::size_t>(arity_);
  }
  bool empty() const { return data_.empty(); }

  std::span<const int> tuple(std::size_t i) const {
    return {data_.data() + i * static_cast<std::size_t>(arity_),
            static_cast<std::size_t>(arity_)};
  }
  const std::vector<int>& flat() const { return data_; }

  bool contains(std::span<const int> t) const;
  // Index of `t` in sorted order, or -1.
  std::ptrdiff_t index_of(std::span<const int> t) const;

  bool operator==(const Relation&) const = default;

 private:
  int arity_ = 0;
  std::vector<int> data_;
};

struct ResourceLimits {
  std::int64_t max_elements = 1'000'000;
  std::int64_t max_tuples = 20'000'000;
  // Backtracking nodes per homomorphism search inside decision procedures.
  std::int64_t max_search_nodes = 2'000'000;
};

// Finite structure with domain {0, ..., size-1}. Immutable once built.
class Structure {
 public:
  Structure() = default;
  // Validates arities, ranges and constants. Throws SignatureError or
  // PreconditionError.
  Structure(Signature signature, int size, std::vector<Relation> relations,
            std::vector<int> constants = {},
            std::vector<std::string> labels = {}, std::string name = {});

  const Signature& signature() const { return signature_; }
  int size() const { return size_; }
  const std::vector<Relation>& relations() const { return relations_; }
  const Relation& relation(std::size_t i) const { return relations_[i]; }
  const Relation& relation(const std::string& name) const;
  // constants()[i] interprets c_{i+1}.
  const std::vector<int>& constants() const { return constants_; }
  const std::vector<std::string>& labels() const { return labels_; }
  bool has_labels() const { return !labels_.empty(); }
  const std::string& name() const { return name_; }

  // Display name of element i; falls back to its index.
  std::string label(int i) const;
  std::size_t tuple_count() const;

  Structure with_name(std::string name) const;
  Structure with_labels(std::vector<std::string> labels) const;
  Structure without_constants() const;

  // Exact equality including index order; labels and name are ignored.
  bool same_as(const Structure& other) const;

 private:
  Signature signature_;
  int size_ = 0;
  std::vector<Relation> relations_;
  std::vector<int> constants_;
  std::vector<std::string> labels_;
  std::string name_;
};

// Accumulates tuples by relation name, then freezes into a Structure.
class StructureBuilder {
 public:
  StructureBuilder(Signature signature, int size);

  StructureBuilder& add(std::size_t relation, std::span<const int> tuple);
  StructureBuilder& add(const std::string& relation,
                        std::initializer_list<int> tuple);
  StructureBuilder& add_symmetric_edge(const std::string& relation, int x,
                                       int y);
  StructureBuilder& constants(std::vector<int> values);
  StructureBuilder& labels(std::vector<std::string> values);
  StructureBuilder& name(std::string value);

  Structure build() const;

 private:
  Signature signature_;
  int size_;
  std::vector<std::vector<int>> flat_;
  std::vector<int> constants_;
  std::vector<std::string> labels_;
  std::string name_;
};

// Pair (x, y) is element x*|b| + y. Constant i goes to the pair of the two
// constants i.
Structure product(const Structure& a, const Structure& b,
                  const ResourceLimits& limits = {});

// Iterated product: power(a, r) = product(power(a, r-1), a). Element
// (x1,...,xr) has index sum x_i * n^(r-i), so the first coordinate is the
// most significant digit and i -> i / n drops the last coordinate.
Structure power(const Structure& a, int r, const ResourceLimits& limits = {});

// Elements of b follow those of a. Both must be constant-free.
Structure disjoint_union(const Structure& a, const Structure& b);

// Adds constants: c_{i+1} names lambda[i].
Structure expansion(const Structure& a, const std::vector<int>& lambda);

// Product of expansion(a, lambda) over all lambda in [|a|]^m, lambda in
// lexicographic order with the first factor most significant. Constant i sits
// at the element whose coordinate j is lambda_j[i].
Structure superprodukt(const Structure& a, int m,
                       const ResourceLimits& limits = {});

// Number of elements of superprodukt(a, m), or nullopt past 2^62.
std::optional<std::int64_t> superprodukt_size(int n, int m);

// Weak substructure: keeps the listed elements (any order, re-indexed in
// ascending order) and the listed tuples, given in original indices.
Structure substructure(const Structure& a, const std::vector<int>& keep_elements,
                       const std::vector<std::vector<int>>& keep_tuples);

// Induced substructure on the given elements.
Structure induced_substructure(const Structure& a,
                               const std::vector<int>& keep_elements);

// Decodes element index of a power into coordinates.
std::vector<int> power_coordinates(std::int64_t index, int n, int r);

// Checked integer power; nullopt on overflow past `limit`.
std::optional<std::int64_t> checked_pow(std::int64_t base, std::int64_t exp,
                                        std::int64_t limit = INT64_MAX);

}  // namespace qcsp
