#include "qcsp/sentence.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <numeric>
#include <set>

#include "qcsp/errors.hpp"

namespace qcsp {

Atom Atom::rel(std::string name, std::vector<std::string> args) {
  Atom a;
  a.kind = Kind::kRelation;
  a.relation = std::move(name);
  a.args = std::move(args);
  return a;
}

Atom Atom::eq(std::string x, std::string y) {
  Atom a;
  a.kind = Kind::kEquality;
  a.args = {std::move(x), std::move(y)};
  return a;
}

std::vector<PhSentence::Bound> PhSentence::flat_prefix() const {
  std::vector<Bound> out;
  for (const auto& block : prefix) {
    for (const auto& v : block.variables) out.push_back({block.quantifier, v});
  }
  return out;
}

std::size_t PhSentence::variable_count() const {
  std::size_t n = 0;
  for (const auto& block : prefix) n += block.variables.size();
  return n;
}

bool PhSentence::has_equality() const {
  return std::any_of(matrix.begin(), matrix.end(),
                     [](const Atom& a) { return a.is_equality(); });
}

namespace {

std::map<std::string, int> positions(const PhSentence& s) {
  std::map<std::string, int> pos;
  int i = 0;
  for (const auto& b : s.flat_prefix()) pos[b.name] = i++;
  return pos;
}

[[noreturn]] void atom_error(const Atom& a, const std::string& message) {
  throw ParseError(message, a.span.line, a.span.column);
}

struct UnionFind {
  std::vector<int> parent;
  explicit UnionFind(int n) : parent(static_cast<std::size_t>(n)) {
    std::iota(parent.begin(), parent.end(), 0);
  }
  int find(int x) {
    while (parent[static_cast<std::size_t>(x)] != x) {
      parent[static_cast<std::size_t>(x)] =
          parent[static_cast<std::size_t>(parent[static_cast<std::size_t>(x)])];
      x = parent[static_cast<std::size_t>(x)];
    }
    return x;
  }
  // Keeps the smaller index as root.
  void unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent[static_cast<std::size_t>(b)] = a;
  }
};

PhSentence merge_blocks(const PhSentence& s) {
  PhSentence out;
  out.matrix = s.matrix;
  for (const auto& block : s.prefix) {
    if (block.variables.empty()) continue;
    if (!out.prefix.empty() && out.prefix.back().quantifier == block.quantifier) {
      auto& vars = out.prefix.back().variables;
      vars.insert(vars.end(), block.variables.begin(), block.variables.end());
    } else {
      out.prefix.push_back(block);
    }
  }
  return out;
}

bool is_identifier(const std::string& s) {
  if (s.empty()) return false;
  if (!(std::isalpha(static_cast<unsigned char>(s[0])) || s[0] == '_')) return false;
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'')) {
      return false;
    }
  }
  return s != "forall" && s != "exists" && s != "true";
}

// Names for elements of a structure when read back as variables.
std::vector<std::string> variable_names(const Structure& d) {
  std::vector<std::string> names;
  std::set<std::string> seen;
  bool usable = d.has_labels();
  for (int i = 0; usable && i < d.size(); ++i) {
    const auto& l = d.labels()[static_cast<std::size_t>(i)];
    usable = is_identifier(l) && l.rfind(kDummyPrefix, 0) != 0 &&
             seen.insert(l).second;
  }
  for (int i = 0; i < d.size(); ++i) {
    names.push_back(usable ? d.labels()[static_cast<std::size_t>(i)]
                           : "v" + std::to_string(i));
  }
  return names;
}

std::vector<Atom> facts_as_atoms(const Structure& d,
                                 const std::vector<std::string>& names) {
  std::vector<Atom> atoms;
  for (std::size_t r = 0; r < d.relations().size(); ++r) {
    const Relation& rel = d.relation(r);
    for (std::size_t t = 0; t < rel.size(); ++t) {
      std::vector<std::string> args;
      for (int v : rel.tuple(t)) args.push_back(names[static_cast<std::size_t>(v)]);
      atoms.push_back(Atom::rel(d.signature().relation(r).name, std::move(args)));
    }
  }
  return atoms;
}

}  // namespace

void validate(const PhSentence& s) {
  std::set<std::string> bound;
  for (const auto& block : s.prefix) {
    if (block.variables.empty()) throw ParseError("empty quantifier block");
    for (const auto& v : block.variables) {
      if (!bound.insert(v).second) {
        throw ParseError("variable '" + v + "' is bound twice");
      }
    }
  }
  for (const auto& a : s.matrix) {
    if (a.is_equality() && a.args.size() != 2) {
      atom_error(a, "equality needs two arguments");
    }
    if (!a.is_equality() && (a.relation.empty() || a.args.empty())) {
      atom_error(a, "relation atom needs a name and arguments");
    }
    for (const auto& v : a.args) {
      if (!bound.count(v)) atom_error(a, "variable '" + v + "' is not bound");
    }
  }
}

void check_signature(const PhSentence& s, const Signature& sig) {
  for (const auto& a : s.matrix) {
    if (a.is_equality()) continue;
    auto idx = sig.find(a.relation);
    if (!idx) {
      throw SignatureError("relation '" + a.relation + "' is not in the signature");
    }
    if (sig.relation(*idx).arity != static_cast<int>(a.args.size())) {
      throw SignatureError("relation '" + a.relation + "' used with arity " +
                           std::to_string(a.args.size()) + ", declared " +
                           std::to_string(sig.relation(*idx).arity));
    }
  }
}

Signature infer_signature(const PhSentence& s) {
  std::vector<RelationSymbol> rels;
  for (const auto& a : s.matrix) {
    if (a.is_equality()) continue;
    auto it = std::find_if(rels.begin(), rels.end(),
                           [&](const RelationSymbol& r) { return r.name == a.relation; });
    if (it == rels.end()) {
      rels.push_back({a.relation, static_cast<int>(a.args.size())});
    } else if (it->arity != static_cast<int>(a.args.size())) {
      throw SignatureError("relation '" + a.relation + "' used with two arities");
    }
  }
  return Signature(std::move(rels));
}

SentenceShape classify(const PhSentence& s) {
  SentenceShape shape;
  auto flat = s.flat_prefix();
  bool seen_exists = false;
  bool pi2 = true;
  Quantifier prev = Quantifier::kExists;
  bool first = true;
  for (const auto& b : flat) {
    if (b.quantifier == Quantifier::kForall) {
      ++shape.universal_count;
      if (seen_exists) pi2 = false;
      if (first || prev == Quantifier::kExists) ++shape.depth;
    } else {
      ++shape.existential_count;
      seen_exists = true;
      if (first) ++shape.depth;
    }
    prev = b.quantifier;
    first = false;
  }
  shape.is_pi2 = pi2;
  shape.is_sigma1 = shape.universal_count == 0;
  shape.has_equality = s.has_equality();

  if (shape.has_equality) {
    auto pos = positions(s);
    UnionFind uf(static_cast<int>(flat.size()));
    for (const auto& a : s.matrix) {
      if (a.is_equality()) uf.unite(pos.at(a.args[0]), pos.at(a.args[1]));
    }
    // Degenerate: a class holding two universals, or an existential bound
    // before a universal of its class.
    std::map<int, std::vector<int>> classes;
    for (int i = 0; i < static_cast<int>(flat.size()); ++i) {
      classes[uf.find(i)].push_back(i);
    }
    for (const auto& [root, members] : classes) {
      int universals = 0;
      bool existential_before = false;
      for (int i : members) {
        if (flat[static_cast<std::size_t>(i)].quantifier == Quantifier::kForall) {
          ++universals;
          if (existential_before) shape.is_degenerate = true;
        } else {
          existential_before = true;
        }
      }
      if (universals >= 2) shape.is_degenerate = true;
    }
  }
  return shape;
}

PhSentence normalize_strict_alternation(const PhSentence& s) {
  std::set<std::string> used;
  for (const auto& b : s.flat_prefix()) used.insert(b.name);
  int counter = 0;
  auto fresh = [&] {
    std::string name;
    do {
      name = std::string(kDummyPrefix) + std::to_string(++counter);
    } while (used.count(name));
    used.insert(name);
    return name;
  };

  PhSentence out;
  out.matrix = s.matrix;
  Quantifier expected = Quantifier::kForall;
  auto emit = [&](Quantifier q, std::string name) {
    out.prefix.push_back({q, {std::move(name)}});
    expected = q == Quantifier::kForall ? Quantifier::kExists : Quantifier::kForall;
  };
  for (const auto& b : s.flat_prefix()) {
    if (b.quantifier != expected) emit(expected, fresh());
    emit(b.quantifier, b.name);
  }
  if (expected == Quantifier::kExists) emit(Quantifier::kExists, fresh());
  return out;
}

PhSentence strip_dummy_variables(const PhSentence& s) {
  std::set<std::string> in_matrix;
  for (const auto& a : s.matrix) in_matrix.insert(a.args.begin(), a.args.end());
  PhSentence out;
  out.matrix = s.matrix;
  for (const auto& block : s.prefix) {
    QuantifierBlock kept{block.quantifier, {}};
    for (const auto& v : block.variables) {
      if (v.rfind(kDummyPrefix, 0) == 0 && !in_matrix.count(v)) continue;
      kept.variables.push_back(v);
    }
    out.prefix.push_back(std::move(kept));
  }
  return merge_blocks(out);
}

PhSentence propagate_equalities(const PhSentence& s) {
  if (!s.has_equality()) return s;
  if (classify(s).is_degenerate) {
    throw PreconditionError("cannot propagate equalities of a degenerate sentence");
  }
  auto flat = s.flat_prefix();
  auto pos = positions(s);
  UnionFind uf(static_cast<int>(flat.size()));
  for (const auto& a : s.matrix) {
    if (a.is_equality()) uf.unite(pos.at(a.args[0]), pos.at(a.args[1]));
  }
  auto rep = [&](const std::string& v) {
    return flat[static_cast<std::size_t>(uf.find(pos.at(v)))].name;
  };
  PhSentence out;
  for (const auto& block : s.prefix) {
    QuantifierBlock kept{block.quantifier, {}};
    for (const auto& v : block.variables) {
      if (rep(v) == v) kept.variables.push_back(v);
    }
    out.prefix.push_back(std::move(kept));
  }
  out = merge_blocks(out);
  for (const auto& a : s.matrix) {
    if (a.is_equality()) continue;
    Atom b = a;
    for (auto& v : b.args) v = rep(v);
    if (std::find(out.matrix.begin(), out.matrix.end(), b) == out.matrix.end()) {
      out.matrix.push_back(std::move(b));
    }
  }
  return out;
}

Structure sentence_to_structure(const PhSentence& s) {
  return sentence_to_structure(s, infer_signature(s));
}

Structure sentence_to_structure(const PhSentence& s, const Signature& sig) {
  auto shape = classify(s);
  if (!shape.is_pi2) throw PreconditionError("sentence is not Pi_2");
  if (shape.has_equality) {
    throw PreconditionError("sentence_to_structure needs an equality-free sentence");
  }
  check_signature(s, sig);
  auto flat = s.flat_prefix();
  auto pos = positions(s);
  StructureBuilder builder(sig.with_constants(0), static_cast<int>(flat.size()));
  std::vector<int> constants;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < flat.size(); ++i) {
    labels.push_back(flat[i].name);
    if (flat[i].quantifier == Quantifier::kForall) {
      constants.push_back(static_cast<int>(i));
    }
  }
  for (const auto& a : s.matrix) {
    std::vector<int> t;
    for (const auto& v : a.args) t.push_back(pos.at(v));
    builder.add(*sig.find(a.relation), t);
  }
  return builder.constants(std::move(constants)).labels(std::move(labels)).build();
}

PhSentence structure_to_sentence(const Structure& d) {
  if (d.constants().empty()) {
    throw PreconditionError("structure_to_sentence needs at least one constant");
  }
  std::vector<int> owner(static_cast<std::size_t>(d.size()), -1);
  for (std::size_t i = 0; i < d.constants().size(); ++i) {
    int e = d.constants()[i];
    if (owner[static_cast<std::size_t>(e)] >= 0) {
      throw PreconditionError("constants c" +
                              std::to_string(owner[static_cast<std::size_t>(e)] + 1) +
                              " and c" + std::to_string(i + 1) +
                              " name the same element");
    }
    owner[static_cast<std::size_t>(e)] = static_cast<int>(i);
  }
  auto names = variable_names(d);
  PhSentence s;
  QuantifierBlock all{Quantifier::kForall, {}};
  QuantifierBlock ex{Quantifier::kExists, {}};
  for (int c : d.constants()) all.variables.push_back(names[static_cast<std::size_t>(c)]);
  for (int e = 0; e < d.size(); ++e) {
    if (owner[static_cast<std::size_t>(e)] < 0) {
      ex.variables.push_back(names[static_cast<std::size_t>(e)]);
    }
  }
  s.prefix.push_back(std::move(all));
  if (!ex.variables.empty()) s.prefix.push_back(std::move(ex));
  s.matrix = facts_as_atoms(d, names);
  return s;
}

PhSentence canonical_query(const Structure& a) {
  if (!a.constants().empty()) {
    throw PreconditionError("canonical_query needs a constant-free structure");
  }
  auto names = variable_names(a);
  PhSentence s;
  if (a.size() > 0) s.prefix.push_back({Quantifier::kExists, names});
  s.matrix = facts_as_atoms(a, names);
  return s;
}

}  // namespace qcsp
