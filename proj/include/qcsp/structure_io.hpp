#pragma once

#include <nlohmann/json.hpp>
#include <string>
#include <vector>

#include "qcsp/structure.hpp"

namespace qcsp {

using Json = nlohmann::ordered_json;

// Structure file format:
//   {"name": str, "elements": [str...],
//    "relations": {R: {"arity": int, "tuples": [[str...]...]}},
//    "constants": {"c1": str, ...}}
// "name" and "constants" are optional. Unknown keys are rejected.
Structure structure_from_json(const Json& j);
Structure parse_structure(const std::string& text);
Structure read_structure_file(const std::string& path);

// Elements are written with their labels (index when unlabelled).
Json structure_to_json(const Structure& s);
std::string format_structure(const Structure& s);

// {"element of a": "element of b", ...}
Json mapping_to_json(const Structure& a, const Structure& b,
                     const std::vector<int>& mapping);

std::string read_text_file(const std::string& path);

}  // namespace qcsp
