#include "qcsp/generators.hpp"

#include <algorithm>
#include <charconv>

#include "qcsp/errors.hpp"

namespace qcsp {

namespace {

std::vector<std::string> numbered(int n, int first) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back(std::to_string(first + i));
  return out;
}

void require(bool ok, const std::string& message) {
  if (!ok) throw PreconditionError(message);
}

Signature unary_signature(int k) {
  std::vector<RelationSymbol> rels;
  for (int i = 1; i <= k; ++i) rels.push_back({"U" + std::to_string(i), 1});
  return Signature(std::move(rels));
}

Signature edge_unary_signature() { return Signature({{"E", 2}, {"U", 1}}); }

int int_param(const std::map<std::string, std::string>& params,
              const std::string& key, std::optional<int> fallback = std::nullopt) {
  auto it = params.find(key);
  if (it == params.end()) {
    if (fallback) return *fallback;
    throw PreconditionError("missing generator parameter '" + key + "'");
  }
  int value = 0;
  const auto& s = it->second;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw PreconditionError("generator parameter '" + key +
                            "' is not an integer: " + s);
  }
  return value;
}

}  // namespace

Signature graph_signature() { return Signature({{"E", 2}}); }

Structure clique(int i, bool reflexive) {
  require(i >= 1, "clique needs at least one vertex");
  StructureBuilder b(graph_signature(), i);
  for (int x = 0; x < i; ++x) {
    for (int y = 0; y < i; ++y) {
      if (x != y || reflexive) b.add("E", {x, y});
    }
  }
  std::string name = (reflexive ? "K" + std::to_string(i) + "*"
                                : "K" + std::to_string(i));
  return b.name(name).build();
}

Structure path(const std::string& alpha) {
  require(!alpha.empty(), "path needs a non-empty loop pattern");
  const int n = static_cast<int>(alpha.size());
  StructureBuilder b(graph_signature(), n);
  for (int i = 0; i < n; ++i) {
    require(alpha[static_cast<std::size_t>(i)] == '0' ||
                alpha[static_cast<std::size_t>(i)] == '1',
            "path pattern must be a 0/1 string");
    if (alpha[static_cast<std::size_t>(i)] == '1') b.add("E", {i, i});
    if (i + 1 < n) b.add_symmetric_edge("E", i, i + 1);
  }
  return b.labels(numbered(n, 1)).name("P" + alpha).build();
}

Structure a_k_unary(int k) {
  require(k >= 2, "a_k_unary needs k >= 2");
  StructureBuilder b(unary_signature(k), k);
  for (int i = 0; i < k; ++i) {
    for (int x = 0; x < k; ++x) {
      if (x != i) b.add(static_cast<std::size_t>(i), std::span<const int>(&x, 1));
    }
  }
  return b.labels(numbered(k, 1)).name("A" + std::to_string(k)).build();
}

Structure b_k_unary(int k) {
  require(k >= 2, "b_k_unary needs k >= 2");
  StructureBuilder b(unary_signature(k), 2);
  const int one = 1;
  for (int i = 0; i < k; ++i) {
    b.add(static_cast<std::size_t>(i), std::span<const int>(&one, 1));
  }
  return b.name("B" + std::to_string(k)).build();
}

Structure a_k_cycle(int k) {
  require(k >= 2, "a_k_cycle needs k >= 2");
  StructureBuilder b(edge_unary_signature(), k);
  for (int i = 0; i < k; ++i) {
    b.add("E", {i, (i + 1) % k});
    if (i != 0) b.add("U", {i});
  }
  return b.labels(numbered(k, 1)).name("C" + std::to_string(k) + "U").build();
}

Structure b_cycle() {
  StructureBuilder b(edge_unary_signature(), 2);
  b.add("E", {0, 0}).add("E", {1, 1}).add("U", {1});
  return b.name("Bcycle").build();
}

Structure dp1_star() {
  StructureBuilder b(graph_signature(), 2);
  b.add("E", {0, 0}).add("E", {0, 1}).add("E", {1, 1});
  return b.labels({"1", "2"}).name("DP1*").build();
}

Structure linear_order(int m) {
  require(m >= 1, "linear_order needs m >= 1");
  StructureBuilder b(graph_signature(), m);
  for (int x = 0; x < m; ++x) {
    for (int y = x; y < m; ++y) b.add("E", {x, y});
  }
  return b.labels(numbered(m, 1)).name("L" + std::to_string(m)).build();
}

Structure p01() {
  StructureBuilder b(graph_signature(), 2);
  b.add("E", {0, 1}).add("E", {1, 0}).add("E", {1, 1});
  return b.name("P01").build();
}

Structure h2() {
  StructureBuilder b(graph_signature(), 4);
  for (int x = 0; x < 4; ++x) {
    for (int y = x + 1; y < 4; ++y) {
      if (!(x == 0 && y == 3)) b.add_symmetric_edge("E", x, y);
    }
  }
  return b.name("H2").build();
}

Structure k1s() { return clique(1, true); }

Structure edgeless(int n) {
  require(n >= 1, "edgeless needs n >= 1");
  return StructureBuilder(graph_signature(), n)
      .name(std::to_string(n) + "K1")
      .build();
}

Structure cycle(int n) {
  require(n >= 3, "cycle needs n >= 3");
  StructureBuilder b(graph_signature(), n);
  for (int i = 0; i < n; ++i) b.add_symmetric_edge("E", i, (i + 1) % n);
  return b.name("C" + std::to_string(n)).build();
}

Structure directed_cycle(int n) {
  require(n >= 1, "directed_cycle needs n >= 1");
  StructureBuilder b(graph_signature(), n);
  for (int i = 0; i < n; ++i) b.add("E", {i, (i + 1) % n});
  return b.name("DC" + std::to_string(n)).build();
}

Structure complete_bipartite(int p, int q) {
  require(p >= 1 && q >= 1, "complete_bipartite needs p, q >= 1");
  StructureBuilder b(graph_signature(), p + q);
  for (int x = 0; x < p; ++x) {
    for (int y = 0; y < q; ++y) b.add_symmetric_edge("E", x, p + y);
  }
  return b.name("K" + std::to_string(p) + "," + std::to_string(q)).build();
}

std::vector<std::string> generator_families() {
  return {"clique",    "path",    "a_k_unary",      "b_k_unary",
          "a_k_cycle", "b_cycle", "dp1_star",       "linear_order",
          "p01",       "h2",      "k1s",            "edgeless",
          "cycle",     "directed_cycle", "complete_bipartite"};
}

Structure generate(const std::string& family,
                   const std::map<std::string, std::string>& params) {
  static const std::map<std::string, std::vector<std::string>> kKeys{
      {"clique", {"i", "reflexive"}}, {"path", {"alpha"}},
      {"a_k_unary", {"k"}},           {"b_k_unary", {"k"}},
      {"a_k_cycle", {"k"}},           {"linear_order", {"m"}},
      {"edgeless", {"n"}},            {"cycle", {"n"}},
      {"directed_cycle", {"n"}},      {"complete_bipartite", {"p", "q"}}};
  auto keys = kKeys.find(family);
  for (const auto& [key, value] : params) {
    if (keys == kKeys.end() ||
        std::find(keys->second.begin(), keys->second.end(), key) == keys->second.end()) {
      throw PreconditionError("unknown parameter '" + key + "' for generator '" + family + "'");
    }
  }
  if (family == "clique") {
    return clique(int_param(params, "i"), int_param(params, "reflexive", 0) != 0);
  }
  if (family == "path") {
    auto it = params.find("alpha");
    if (it == params.end()) throw PreconditionError("path needs alpha");
    return path(it->second);
  }
  if (family == "a_k_unary") return a_k_unary(int_param(params, "k"));
  if (family == "b_k_unary") return b_k_unary(int_param(params, "k"));
  if (family == "a_k_cycle") return a_k_cycle(int_param(params, "k"));
  if (family == "b_cycle") return b_cycle();
  if (family == "dp1_star") return dp1_star();
  if (family == "linear_order") return linear_order(int_param(params, "m"));
  if (family == "p01") return p01();
  if (family == "h2") return h2();
  if (family == "k1s") return k1s();
  if (family == "edgeless") return edgeless(int_param(params, "n"));
  if (family == "cycle") return cycle(int_param(params, "n"));
  if (family == "directed_cycle") return directed_cycle(int_param(params, "n"));
  if (family == "complete_bipartite") {
    return complete_bipartite(int_param(params, "p"), int_param(params, "q"));
  }
  throw PreconditionError("unknown generator family '" + family + "'");
}

}  // namespace qcsp
