#pragma once

#include <cctype>
#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "termlint/program.hpp"
#include "termlint/term.hpp"

namespace termlint {

/// Reserved symbols produced by the list and arithmetic sugar.
inline constexpr const char* kConsSymbol = "cons";
inline constexpr const char* kNilSymbol = "nil";
inline constexpr const char* kPlusSymbol = "plus";

class ParseError : public Error {
 public:
  ParseError(const std::string& msg, std::size_t line, std::size_t column)
      : Error(std::to_string(line) + ":" + std::to_string(column) + ": " + msg),
        line_(line),
        column_(column) {}
  std::size_t line() const { return line_; }
  std::size_t column() const { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

struct ParseOptions {
  /// Throw ProgramError when validation reports any diagnostic.
  bool strict = false;
};

namespace detail {

class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Program parse_program() {
    Program prog;
    std::set<std::string> ids;
    skip_space();
    while (!at_end()) {
      if (peek() == '#') {
        parse_directive(prog);
      } else {
        Rule r = parse_rule(prog.rules.size() + 1);
        if (!ids.insert(r.id).second) fail("duplicate rule label '" + r.id + "'", r.line, 1);
        prog.rules.push_back(std::move(r));
      }
      skip_space();
    }
    return prog;
  }

  Atom parse_single_atom() {
    skip_space();
    anon_ = 0;
    Atom a = parse_atom();
    skip_space();
    if (peek() == '.') advance();
    skip_space();
    if (!at_end()) error("unexpected trailing input");
    return a;
  }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::size_t anon_ = 0;

  [[noreturn]] static void fail(const std::string& msg, std::size_t line, std::size_t col) {
    throw ParseError(msg, line, col);
  }
  [[noreturn]] void error(const std::string& msg) const { fail(msg, line_, col_); }

  bool at_end() const { return pos_ >= text_.size(); }
  char peek(std::size_t ahead = 0) const {
    return pos_ + ahead < text_.size() ? text_[pos_ + ahead] : '\0';
  }
  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  void skip_space() {
    while (!at_end()) {
      char c = peek();
      if (c == '%') {
        while (!at_end() && peek() != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        advance();
      } else {
        break;
      }
    }
  }

  void expect(char c) {
    skip_space();
    if (peek() != c) error(std::string("expected '") + c + "'" + found());
    advance();
  }

  std::string found() const {
    if (at_end()) return " but reached end of input";
    return std::string(" but found '") + peek() + "'";
  }

  static bool ident_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
  }
  static bool ident_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
  }

  std::string identifier() {
    skip_space();
    if (!ident_start(peek())) error("expected identifier" + found());
    std::size_t start = pos_;
    while (!at_end() && ident_char(peek())) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  std::string number() {
    std::size_t start = pos_;
    while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) advance();
    return std::string(text_.substr(start, pos_ - start));
  }

  bool keyword_ahead(std::string_view kw) const {
    if (text_.substr(pos_, kw.size()) != kw) return false;
    return !ident_char(peek(kw.size()));
  }

  void parse_directive(Program& prog) {
    std::size_t line = line_, col = col_;
    advance();  // '#'
    std::string kind = identifier();
    if (kind != "base" && kind != "derived") fail("unknown directive '#" + kind + "'", line, col);
    std::string name = identifier();
    expect('/');
    skip_space();
    if (!std::isdigit(static_cast<unsigned char>(peek()))) error("expected arity" + found());
    std::size_t arity = std::stoul(number());
    expect('.');
    (kind == "base" ? prog.declared_base : prog.declared_derived).insert({name, arity});
  }

  Rule parse_rule(std::size_t position) {
    Rule r;
    anon_ = 0;
    r.line = line_;
    r.id = "r" + std::to_string(position);

    // Optional label "name:" (but not ":-").
    std::size_t save_pos = pos_, save_line = line_, save_col = col_;
    if (ident_start(peek())) {
      std::string label = identifier();
      skip_space();
      if (peek() == ':' && peek(1) != '-') {
        advance();
        r.id = label;
      } else {
        pos_ = save_pos;
        line_ = save_line;
        col_ = save_col;
      }
    }

    r.head.push_back(parse_atom());
    skip_space();
    while (peek() == '|') {
      advance();
      r.head.push_back(parse_atom());
      skip_space();
    }
    if (peek() == ':' && peek(1) == '-') {
      advance();
      advance();
      do {
        skip_space();
        if (keyword_ahead("not")) {
          for (int i = 0; i < 3; ++i) advance();
          r.neg_body.push_back(parse_atom());
        } else {
          r.pos_body.push_back(parse_atom());
        }
        skip_space();
      } while (peek() == ',' && (advance(), true));
    }
    expect('.');
    return r;
  }

  Atom parse_atom() {
    skip_space();
    Atom a;
    a.predicate = identifier();
    skip_space();
    if (peek() == '(') {
      advance();
      a.args = parse_term_list(')');
    }
    return a;
  }

  std::vector<Term> parse_term_list(char close) {
    std::vector<Term> out;
    skip_space();
    if (peek() == close) error("empty argument list");
    out.push_back(parse_term());
    skip_space();
    while (peek() == ',') {
      advance();
      out.push_back(parse_term());
      skip_space();
    }
    expect(close);
    return out;
  }

  Term parse_term() {
    Term t = parse_primary();
    skip_space();
    while (peek() == '+') {
      advance();
      Term rhs = parse_primary();
      t = Term::compound(kPlusSymbol, {t, rhs});
      skip_space();
    }
    return t;
  }

  Term parse_primary() {
    skip_space();
    char c = peek();
    if (c == '(') {
      advance();
      Term t = parse_term();
      expect(')');
      return t;
    }
    if (c == '[') {
      advance();
      return parse_list();
    }
    if (std::isdigit(static_cast<unsigned char>(c))) return Term::constant(number());
    if (!ident_start(c)) error("expected term" + found());
    std::size_t line = line_, col = col_;
    std::string name = identifier();
    if (name == "_") return Term::variable("_" + std::to_string(++anon_));
    bool is_var = std::isupper(static_cast<unsigned char>(name[0])) || name[0] == '_';
    skip_space();
    if (peek() == '(') {
      if (is_var) fail("variable '" + name + "' cannot take arguments", line, col);
      advance();
      return Term::compound(name, parse_term_list(')'));
    }
    return is_var ? Term::variable(name) : Term::constant(name);
  }

  Term parse_list() {
    skip_space();
    if (peek() == ']') {
      advance();
      return Term::constant(kNilSymbol);
    }
    std::vector<Term> items{parse_term()};
    skip_space();
    while (peek() == ',') {
      advance();
      items.push_back(parse_term());
      skip_space();
    }
    Term tail = Term::constant(kNilSymbol);
    if (peek() == '|') {
      advance();
      tail = parse_term();
    }
    expect(']');
    for (auto it = items.rbegin(); it != items.rend(); ++it) tail = Term::compound(kConsSymbol, {*it, tail});
    return tail;
  }
};

}  // namespace detail

/// Parses a program in the concrete syntax.
inline Program parse_program(std::string_view text, const ParseOptions& opts = {}) {
  Program p = detail::Parser(text).parse_program();
  if (opts.strict) {
    if (auto diags = validate(p); !diags.empty()) throw ProgramError(std::move(diags));
  }
  return p;
}

/// Parses a single atom such as a query goal; a trailing '.' is optional.
inline Atom parse_atom(std::string_view text) { return detail::Parser(text).parse_single_atom(); }

/// Parses a database: ground facts only.
inline std::vector<Atom> parse_facts(std::string_view text) {
  Program p = parse_program(text);
  std::vector<Atom> out;
  for (const auto& r : p.rules) {
    if (!r.is_fact()) {
      throw ParseError("database entries must be ground facts (rule " + r.id + ")", r.line, 1);
    }
    out.push_back(r.head.front());
  }
  return out;
}

}  // namespace termlint
