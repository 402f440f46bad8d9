#include "qcsp/parser.hpp"

#include <cctype>

#include "qcsp/errors.hpp"

namespace qcsp {

namespace {

enum class Tok { kIdent, kLParen, kRParen, kComma, kColon, kAmp, kEq, kEnd };

struct Token {
  Tok kind;
  std::string text;
  int begin;
  int end;
  int line;
  int column;
};

class Lexer {
 public:
  explicit Lexer(const std::string& text) : text_(text) {}

  Token next() {
    skip_space_and_comments();
    Token t{Tok::kEnd, "", pos_, pos_, line_, col_};
    if (pos_ >= static_cast<int>(text_.size())) return t;
    char c = text_[static_cast<std::size_t>(pos_)];
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      int start = pos_;
      while (pos_ < static_cast<int>(text_.size())) {
        char d = text_[static_cast<std::size_t>(pos_)];
        if (!(std::isalnum(static_cast<unsigned char>(d)) || d == '_' || d == '\'')) break;
        advance();
      }
      t.kind = Tok::kIdent;
      t.text = text_.substr(static_cast<std::size_t>(start),
                            static_cast<std::size_t>(pos_ - start));
      t.end = pos_;
      return t;
    }
    switch (c) {
      case '(': t.kind = Tok::kLParen; break;
      case ')': t.kind = Tok::kRParen; break;
      case ',': t.kind = Tok::kComma; break;
      case ':': t.kind = Tok::kColon; break;
      case '&': t.kind = Tok::kAmp; break;
      case '=': t.kind = Tok::kEq; break;
      default:
        throw ParseError(std::string("unexpected character '") + c + "'", line_, col_);
    }
    t.text = std::string(1, c);
    advance();
    t.end = pos_;
    return t;
  }

 private:
  void advance() {
    if (text_[static_cast<std::size_t>(pos_)] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space_and_comments() {
    while (pos_ < static_cast<int>(text_.size())) {
      char c = text_[static_cast<std::size_t>(pos_)];
      if (c == '#') {
        while (pos_ < static_cast<int>(text_.size()) &&
               text_[static_cast<std::size_t>(pos_)] != '\n') {
          advance();
        }
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  const std::string& text_;
  int pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

bool is_keyword(const std::string& s) {
  return s == "forall" || s == "exists" || s == "true";
}

class Parser {
 public:
  explicit Parser(const std::string& text) : lexer_(text) { shift(); }

  PhSentence parse() {
    PhSentence s;
    while (cur_.kind == Tok::kIdent &&
           (cur_.text == "forall" || cur_.text == "exists")) {
      QuantifierBlock block;
      block.quantifier =
          cur_.text == "forall" ? Quantifier::kForall : Quantifier::kExists;
      shift();
      while (cur_.kind == Tok::kIdent && !is_keyword(cur_.text)) {
        block.variables.push_back(variable_name());
        shift();
      }
      if (block.variables.empty()) fail("expected a variable after quantifier");
      s.prefix.push_back(std::move(block));
    }
    expect(Tok::kColon, "expected ':' before the matrix");
    if (cur_.kind == Tok::kIdent && cur_.text == "true") {
      shift();
    } else {
      s.matrix.push_back(atom());
      while (cur_.kind == Tok::kAmp) {
        shift();
        s.matrix.push_back(atom());
      }
    }
    if (cur_.kind != Tok::kEnd) fail("unexpected '" + cur_.text + "' after matrix");
    validate(s);
    return s;
  }

 private:
  void shift() { cur_ = lexer_.next(); }

  [[noreturn]] void fail(const std::string& message) const {
    throw ParseError(message, cur_.line, cur_.column);
  }

  void expect(Tok kind, const std::string& message) {
    if (cur_.kind != kind) fail(message);
    shift();
  }

  std::string variable_name() const {
    if (cur_.text.rfind(kDummyPrefix, 0) == 0) {
      fail("variable names starting with '" + std::string(kDummyPrefix) +
           "' are reserved");
    }
    return cur_.text;
  }

  std::string ident(const char* what) {
    if (cur_.kind != Tok::kIdent || is_keyword(cur_.text)) {
      fail(std::string("expected ") + what);
    }
    std::string s = cur_.text;
    shift();
    return s;
  }

  Atom atom() {
    Token start = cur_;
    if (cur_.kind == Tok::kEnd) fail("empty matrix; write 'true' for no atoms");
    std::string head = ident("an atom");
    Atom a;
    if (cur_.kind == Tok::kLParen) {
      shift();
      a.kind = Atom::Kind::kRelation;
      a.relation = head;
      a.args.push_back(ident("a variable"));
      while (cur_.kind == Tok::kComma) {
        shift();
        a.args.push_back(ident("a variable"));
      }
      if (cur_.kind != Tok::kRParen) fail("expected ')' or ','");
      a.span.end = cur_.end;
      shift();
    } else if (cur_.kind == Tok::kEq) {
      shift();
      a.kind = Atom::Kind::kEquality;
      a.args = {head, cur_.text};
      a.span.end = cur_.end;
      ident("a variable");
    } else {
      fail("expected '(' or '=' after '" + head + "'");
    }
    a.span.begin = start.begin;
    a.span.line = start.line;
    a.span.column = start.column;
    return a;
  }

  Lexer lexer_;
  Token cur_{Tok::kEnd, "", 0, 0, 1, 1};
};

}  // namespace

PhSentence parse_sentence(const std::string& text) {
  return Parser(text).parse();
}

std::string to_string(const Atom& a) {
  if (a.is_equality()) return a.args[0] + " = " + a.args[1];
  std::string out = a.relation + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ",";
    out += a.args[i];
  }
  return out + ")";
}

std::string to_string(const PhSentence& s) {
  std::string out;
  for (const auto& block : s.prefix) {
    out += block.quantifier == Quantifier::kForall ? "forall" : "exists";
    for (const auto& v : block.variables) out += " " + v;
    out += " ";
  }
  out += ":";
  if (s.matrix.empty()) return out + " true";
  for (std::size_t i = 0; i < s.matrix.size(); ++i) {
    out += i ? " & " : " ";
    out += to_string(s.matrix[i]);
  }
  return out;
}

}  // namespace qcsp
