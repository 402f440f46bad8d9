#include "qcsp/structure_io.hpp"

#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

#include "qcsp/errors.hpp"

namespace qcsp {

namespace {

void reject_unknown_keys(const Json& j, const std::set<std::string>& allowed,
                         const std::string& where) {
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) {
      throw ParseError("unknown key '" + it.key() + "' in " + where);
    }
  }
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  auto it = j.find(key);
  if (it == j.end()) {
    throw ParseError("missing key '" + std::string(key) + "' in " + where);
  }
  return *it;
}

}  // namespace

Structure structure_from_json(const Json& j) {
  if (!j.is_object()) throw ParseError("structure must be a JSON object");
  reject_unknown_keys(j, {"name", "elements", "relations", "constants"},
                      "structure");

  std::string name;
  if (j.contains("name")) {
    if (!j["name"].is_string()) throw ParseError("'name' must be a string");
    name = j["name"].get<std::string>();
  }

  const Json& elements = field(j, "elements", "structure");
  if (!elements.is_array()) throw ParseError("'elements' must be an array");
  std::vector<std::string> labels;
  std::map<std::string, int> index;
  for (const auto& e : elements) {
    if (!e.is_string()) throw ParseError("element names must be strings");
    auto label = e.get<std::string>();
    if (!index.emplace(label, static_cast<int>(labels.size())).second) {
      throw ParseError("duplicate element '" + label + "'");
    }
    labels.push_back(label);
  }
  auto lookup = [&](const Json& e, const std::string& where) {
    if (!e.is_string()) throw ParseError(where + ": element names must be strings");
    auto it = index.find(e.get<std::string>());
    if (it == index.end()) {
      throw ParseError(where + ": unknown element '" + e.get<std::string>() + "'");
    }
    return it->second;
  };

  const Json& relations = field(j, "relations", "structure");
  if (!relations.is_object()) throw ParseError("'relations' must be an object");
  std::vector<RelationSymbol> symbols;
  std::vector<Relation> rels;
  for (auto it = relations.begin(); it != relations.end(); ++it) {
    const std::string where = "relation '" + it.key() + "'";
    const Json& body = it.value();
    if (!body.is_object()) throw ParseError(where + " must be an object");
    reject_unknown_keys(body, {"arity", "tuples"}, where);
    const Json& arity_j = field(body, "arity", where);
    if (!arity_j.is_number_integer() || arity_j.get<int>() < 1) {
      throw ParseError(where + ": arity must be a positive integer");
    }
    const int arity = arity_j.get<int>();
    std::vector<int> flat;
    if (body.contains("tuples")) {
      const Json& tuples = body["tuples"];
      if (!tuples.is_array()) throw ParseError(where + ": 'tuples' must be an array");
      for (const auto& t : tuples) {
        if (!t.is_array() || static_cast<int>(t.size()) != arity) {
          throw ParseError(where + ": tuple of wrong arity");
        }
        for (const auto& e : t) flat.push_back(lookup(e, where));
      }
    }
    symbols.push_back({it.key(), arity});
    rels.emplace_back(arity, std::move(flat));
  }

  std::vector<int> constants;
  if (j.contains("constants")) {
    const Json& cs = j["constants"];
    if (!cs.is_object()) throw ParseError("'constants' must be an object");
    std::map<int, int> by_index;
    for (auto it = cs.begin(); it != cs.end(); ++it) {
      const std::string& key = it.key();
      int idx = 0;
      bool ok = key.size() > 1 && key[0] == 'c' && key[1] != '0';
      for (std::size_t i = 1; ok && i < key.size(); ++i) {
        ok = std::isdigit(static_cast<unsigned char>(key[i])) != 0;
        if (ok) idx = idx * 10 + (key[i] - '0');
        if (idx > 1'000'000) ok = false;
      }
      if (!ok) throw ParseError("constant keys must be c1, c2, ...: '" + key + "'");
      by_index[idx] = lookup(it.value(), "constant '" + key + "'");
    }
    int expected = 1;
    for (const auto& [idx, elem] : by_index) {
      if (idx != expected++) {
        throw ParseError("constants must be numbered c1..cm without gaps");
      }
      constants.push_back(elem);
    }
  }

  const int size = static_cast<int>(labels.size());
  const int constant_count = static_cast<int>(constants.size());
  try {
    return Structure(Signature(std::move(symbols), constant_count), size, std::move(rels),
                     std::move(constants), std::move(labels), std::move(name));
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(e.what());
  }
}

Structure parse_structure(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return structure_from_json(j);
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

Structure read_structure_file(const std::string& path) {
  try {
    return parse_structure(read_text_file(path));
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what());
  }
}

Json structure_to_json(const Structure& s) {
  Json j = Json::object();
  if (!s.name().empty()) j["name"] = s.name();
  Json elements = Json::array();
  for (int i = 0; i < s.size(); ++i) elements.push_back(s.label(i));
  j["elements"] = elements;
  Json relations = Json::object();
  for (std::size_t r = 0; r < s.relations().size(); ++r) {
    const Relation& rel = s.relation(r);
    Json tuples = Json::array();
    for (std::size_t t = 0; t < rel.size(); ++t) {
      Json tuple = Json::array();
      for (int v : rel.tuple(t)) tuple.push_back(s.label(v));
      tuples.push_back(tuple);
    }
    relations[s.signature().relation(r).name] = {{"arity", rel.arity()},
                                                 {"tuples", tuples}};
  }
  j["relations"] = relations;
  if (!s.constants().empty()) {
    Json cs = Json::object();
    for (std::size_t i = 0; i < s.constants().size(); ++i) {
      cs["c" + std::to_string(i + 1)] = s.label(s.constants()[i]);
    }
    j["constants"] = cs;
  }
  return j;
}

std::string format_structure(const Structure& s) {
  return structure_to_json(s).dump(2);
}

Json mapping_to_json(const Structure& a, const Structure& b,
                     const std::vector<int>& mapping) {
  Json j = Json::object();
  for (std::size_t i = 0; i < mapping.size(); ++i) {
    j[a.label(static_cast<int>(i))] = b.label(mapping[i]);
  }
  return j;
}

}  // namespace qcsp
