#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "termlint/program.hpp"
#include "termlint/term.hpp"

namespace termlint {

/// Finite map from variable names to terms.
using Substitution = std::map<std::string, Term>;

/// Simultaneous application; untouched subterms are shared with the input.
inline Term substitute(const Substitution& s, const Term& t) {
  if (s.empty() || t.is_ground()) return t;
  if (t.is_variable()) {
    auto it = s.find(t.name());
    return it == s.end() ? t : it->second;
  }
  std::vector<Term> args;
  args.reserve(t.arity());
  bool changed = false;
  for (const Term& a : t.args()) {
    args.push_back(substitute(s, a));
    changed = changed || !args.back().same_node(a);
  }
  return changed ? Term::compound(t.name(), std::move(args)) : t;
}

inline Atom substitute(const Substitution& s, const Atom& a) {
  Atom out{a.predicate, {}};
  out.args.reserve(a.args.size());
  for (const Term& t : a.args) out.args.push_back(substitute(s, t));
  return out;
}

inline std::vector<Atom> substitute(const Substitution& s, const std::vector<Atom>& atoms) {
  std::vector<Atom> out;
  out.reserve(atoms.size());
  for (const auto& a : atoms) out.push_back(substitute(s, a));
  return out;
}

inline Rule substitute(const Substitution& s, const Rule& r) {
  Rule out = r;
  out.head = substitute(s, r.head);
  out.pos_body = substitute(s, r.pos_body);
  out.neg_body = substitute(s, r.neg_body);
  return out;
}

/// Composition θ∘ϑ: applying the result equals applying θ then ϑ.
inline Substitution compose(const Substitution& theta, const Substitution& vartheta) {
  Substitution out;
  for (const auto& [x, t] : theta) {
    Term image = substitute(vartheta, t);
    if (!(image.is_variable() && image.name() == x)) out.emplace(x, std::move(image));
  }
  for (const auto& [y, s] : vartheta)
    if (!theta.count(y)) out.emplace(y, s);
  return out;
}

/// True when no domain variable occurs in any binding.
inline bool is_idempotent(const Substitution& s) {
  for (const auto& [x, t] : s)
    for (const auto& [y, u] : s)
      if (occurs_in(x, u)) return false;
  return true;
}

enum class UnifyFailure { None, PredicateClash, SymbolClash, OccursCheck };

inline const char* to_string(UnifyFailure f) {
  switch (f) {
    case UnifyFailure::None: return "none";
    case UnifyFailure::PredicateClash: return "predicate clash";
    case UnifyFailure::SymbolClash: return "symbol clash";
    case UnifyFailure::OccursCheck: return "occurs check";
  }
  return "unknown";
}

struct UnifyResult {
  std::optional<Substitution> unifier;
  UnifyFailure failure = UnifyFailure::None;

  explicit operator bool() const { return unifier.has_value(); }
  const Substitution& operator*() const { return *unifier; }
  const Substitution* operator->() const { return &*unifier; }
};

namespace detail {

/// Solves the equation set, keeping `sigma` in solved (idempotent) form.
inline UnifyFailure solve(std::vector<std::pair<Term, Term>> work, Substitution& sigma) {
  while (!work.empty()) {
    auto [a, b] = std::move(work.back());
    work.pop_back();
    a = substitute(sigma, a);
    b = substitute(sigma, b);
    if (a == b) continue;
    if (!a.is_variable() && b.is_variable()) std::swap(a, b);
    if (a.is_variable()) {
      if (occurs_in(a.name(), b)) return UnifyFailure::OccursCheck;
      Substitution single{{a.name(), b}};
      for (auto& [x, t] : sigma) t = substitute(single, t);
      sigma.emplace(a.name(), b);
      continue;
    }
    if (a.kind() != b.kind() || a.name() != b.name() || a.arity() != b.arity())
      return UnifyFailure::SymbolClash;
    for (std::size_t i = 0; i < a.arity(); ++i) work.emplace_back(a.args()[i], b.args()[i]);
  }
  return UnifyFailure::None;
}

}  // namespace detail

inline UnifyResult unify(const Term& a, const Term& b) {
  Substitution sigma;
  if (auto f = detail::solve({{a, b}}, sigma); f != UnifyFailure::None) return {std::nullopt, f};
  return {std::move(sigma), UnifyFailure::None};
}

/// Most general unifier of two atoms (occurs check on; result idempotent).
inline UnifyResult mgu(const Atom& a, const Atom& b) {
  if (a.predicate != b.predicate || a.arity() != b.arity())
    return {std::nullopt, UnifyFailure::PredicateClash};
  std::vector<std::pair<Term, Term>> work;
  for (std::size_t i = a.arity(); i-- > 0;) work.emplace_back(a.args[i], b.args[i]);
  Substitution sigma;
  if (auto f = detail::solve(std::move(work), sigma); f != UnifyFailure::None) return {std::nullopt, f};
  return {std::move(sigma), UnifyFailure::None};
}

inline bool unifiable(const Atom& a, const Atom& b) { return static_cast<bool>(mgu(a, b)); }

/// Renames every variable X of the rule to "X#tag"; '#' cannot appear in
/// parsed identifiers, so renamed rules never capture source variables.
inline Rule rename_apart(const Rule& r, const std::string& tag) {
  Substitution s;
  for (const auto& v : r.variables()) s.emplace(v, Term::variable(v + "#" + tag));
  return substitute(s, r);
}

inline Atom rename_apart(const Atom& a, const std::string& tag) {
  std::set<std::string> vars;
  collect_variables(a, vars);
  Substitution s;
  for (const auto& v : vars) s.emplace(v, Term::variable(v + "#" + tag));
  return substitute(s, a);
}

/// Renames variables to V0, V1, ... in first-occurrence order, so that
/// atoms equal up to variable renaming map to the same value.
inline Atom canonical_variant(const Atom& a) {
  std::vector<std::string> vars;
  collect_variables(a, vars);
  Substitution s;
  for (std::size_t i = 0; i < vars.size(); ++i) s.emplace(vars[i], Term::variable("V" + std::to_string(i)));
  return substitute(s, a);
}

/// True iff a and b are equal up to a bijective renaming of variables.
inline bool is_variant(const Atom& a, const Atom& b) { return canonical_variant(a) == canonical_variant(b); }

}  // namespace termlint
