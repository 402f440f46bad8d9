#pragma once

#include <string>

#include "qcsp/sentence.hpp"

namespace qcsp {

// Grammar (whitespace-insensitive, '#' starts a line comment):
//   sentence := block* ":" matrix
//   block    := ("forall" | "exists") ident+
//   matrix   := "true" | atom ("&" atom)*
//   atom     := ident "(" ident ("," ident)* ")" | ident "=" ident
// Throws ParseError with line and column.
PhSentence parse_sentence(const std::string& text);

// Prints blocks as "forall x y exists z : ..."; parse_sentence(to_string(s))
// == s for every valid s.
std::string to_string(const PhSentence& s);

std::string to_string(const Atom& a);

}  // namespace qcsp
