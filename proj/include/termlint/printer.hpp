#pragma once

#include <sstream>
#include <string>

#include "termlint/parser.hpp"
#include "termlint/program.hpp"
#include "termlint/term.hpp"

namespace termlint {

namespace detail {

inline bool is_cons(const Term& t) { return t.is_compound() && t.name() == kConsSymbol && t.arity() == 2; }
inline bool is_plus(const Term& t) { return t.is_compound() && t.name() == kPlusSymbol && t.arity() == 2; }

inline void print_term(std::ostream& os, const Term& t);

inline void print_list(std::ostream& os, const Term& t) {
  os << '[';
  Term cur = t;
  bool first = true;
  while (is_cons(cur)) {
    if (!first) os << ',';
    print_term(os, cur.args()[0]);
    first = false;
    cur = cur.args()[1];
  }
  if (!(cur.is_constant() && cur.name() == kNilSymbol)) {
    os << '|';
    print_term(os, cur);
  }
  os << ']';
}

inline void print_term(std::ostream& os, const Term& t) {
  switch (t.kind()) {
    case Term::Kind::Variable:
      os << t.name();
      return;
    case Term::Kind::Constant:
      if (t.name() == kNilSymbol) os << "[]";
      else os << t.name();
      return;
    case Term::Kind::Compound:
      break;
  }
  if (is_cons(t)) return print_list(os, t);
  if (is_plus(t)) {
    print_term(os, t.args()[0]);
    os << '+';
    const Term& rhs = t.args()[1];
    if (is_plus(rhs)) {
      os << '(';
      print_term(os, rhs);
      os << ')';
    } else {
      print_term(os, rhs);
    }
    return;
  }
  os << t.name() << '(';
  for (std::size_t i = 0; i < t.arity(); ++i) {
    if (i) os << ',';
    print_term(os, t.args()[i]);
  }
  os << ')';
}

}  // namespace detail

inline std::string to_string(const Term& t) {
  std::ostringstream os;
  detail::print_term(os, t);
  return os.str();
}

inline std::string to_string(const Atom& a) {
  std::ostringstream os;
  os << a.predicate;
  if (!a.args.empty()) {
    os << '(';
    for (std::size_t i = 0; i < a.args.size(); ++i) {
      if (i) os << ',';
      detail::print_term(os, a.args[i]);
    }
    os << ')';
  }
  return os.str();
}

/// Prints a rule without label.
inline std::string to_string(const Rule& r) {
  std::string s;
  for (std::size_t i = 0; i < r.head.size(); ++i) {
    if (i) s += " | ";
    s += to_string(r.head[i]);
  }
  if (!r.has_empty_body()) {
    s += " :- ";
    bool first = true;
    for (const auto& a : r.pos_body) {
      if (!first) s += ", ";
      s += to_string(a);
      first = false;
    }
    for (const auto& a : r.neg_body) {
      if (!first) s += ", ";
      s += "not " + to_string(a);
      first = false;
    }
  }
  return s + ".";
}

/// Prints a program; a rule label is emitted only when it differs from the
/// positional default "r<n>" the parser would assign.
inline std::string to_string(const Program& p) {
  std::string s;
  for (const auto& b : p.declared_base) s += "#base " + to_string(b) + ".\n";
  for (const auto& d : p.declared_derived) s += "#derived " + to_string(d) + ".\n";
  for (std::size_t i = 0; i < p.rules.size(); ++i) {
    const Rule& r = p.rules[i];
    if (r.id != "r" + std::to_string(i + 1)) s += r.id + ": ";
    s += to_string(r) + "\n";
  }
  return s;
}

}  // namespace termlint
