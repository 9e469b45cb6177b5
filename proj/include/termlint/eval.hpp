#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "termlint/program.hpp"
#include "termlint/safety.hpp"
#include "termlint/unify.hpp"

namespace termlint {

/// Set of ground atoms.
using Interpretation = std::set<Atom>;

struct Fuel {
  std::size_t max_iterations = 10000;
  std::size_t max_atoms = 1000000;
  std::size_t max_term_depth = 32;
};

enum class FuelBound { Iterations, Atoms, TermDepth };

inline const char* to_string(FuelBound b) {
  switch (b) {
    case FuelBound::Iterations: return "iterations";
    case FuelBound::Atoms: return "atoms";
    case FuelBound::TermDepth: return "term-depth";
  }
  return "?";
}

struct EvalOutcome {
  bool converged = false;
  /// The fixpoint when converged, otherwise the partial model.
  Interpretation model;
  std::size_t iterations = 0;
  std::optional<FuelBound> exhausted;
};

namespace detail {

/// One-way matching of a pattern against a ground term, extending `s`.
inline bool match(const Term& pattern, const Term& ground, Substitution& s) {
  if (pattern.is_variable()) {
    auto [it, inserted] = s.emplace(pattern.name(), ground);
    return inserted || it->second == ground;
  }
  if (pattern.kind() != ground.kind() || pattern.name() != ground.name() || pattern.arity() != ground.arity())
    return false;
  if (pattern.is_ground()) return pattern == ground;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match(pattern.args()[i], ground.args()[i], s)) return false;
  return true;
}

inline bool match(const Atom& pattern, const Atom& ground, Substitution& s) {
  if (pattern.predicate != ground.predicate || pattern.arity() != ground.arity()) return false;
  for (std::size_t i = 0; i < pattern.arity(); ++i)
    if (!match(pattern.args[i], ground.args[i], s)) return false;
  return true;
}

inline void require_standard(const Program& p) {
  for (const auto& r : p.rules)
    if (!r.is_standard()) throw Error("rule " + r.id + " is not standard; evaluation needs normal positive rules");
}

/// Per-predicate store with insertion order, used for semi-naive joins.
class FactStore {
 public:
  bool insert(const Atom& a) {
    if (!all_.insert(a).second) return false;
    by_pred_[a.symbol()].push_back(a);
    return true;
  }
  const std::vector<Atom>& of(const PredicateSymbol& p) const {
    static const std::vector<Atom> empty;
    auto it = by_pred_.find(p);
    return it == by_pred_.end() ? empty : it->second;
  }
  std::size_t count(const PredicateSymbol& p) const { return of(p).size(); }
  std::size_t size() const { return all_.size(); }
  const Interpretation& all() const { return all_; }
  std::map<PredicateSymbol, std::size_t> marks() const {
    std::map<PredicateSymbol, std::size_t> m;
    for (const auto& [p, v] : by_pred_) m[p] = v.size();
    return m;
  }

 private:
  Interpretation all_;
  std::map<PredicateSymbol, std::vector<Atom>> by_pred_;
};

inline std::size_t mark(const std::map<PredicateSymbol, std::size_t>& m, const PredicateSymbol& p) {
  auto it = m.find(p);
  return it == m.end() ? 0 : it->second;
}

}  // namespace detail

/// T_P(I) for a standard program.
inline Interpretation immediate_consequence(const Program& p, const Interpretation& i) {
  detail::require_standard(p);
  Interpretation out;
  for (const auto& r : p.rules) {
    std::function<void(std::size_t, Substitution&)> join = [&](std::size_t k, Substitution& s) {
      if (k == r.pos_body.size()) {
        out.insert(substitute(s, r.head.front()));
        return;
      }
      for (const auto& fact : i) {
        Substitution ext = s;
        if (detail::match(r.pos_body[k], fact, ext)) join(k + 1, ext);
      }
    };
    Substitution s;
    join(0, s);
  }
  return out;
}

/// Iterates T over p ∪ db from the empty interpretation (naive reference).
inline EvalOutcome naive_eval(const Program& p, const std::vector<Atom>& db, const Fuel& fuel = {}) {
  Program full = p;
  for (const auto& f : db) full.rules.push_back(Rule{"db", {f}, {}, {}, 0});
  EvalOutcome out;
  Interpretation cur;
  for (std::size_t it = 1; it <= fuel.max_iterations; ++it) {
    Interpretation next = immediate_consequence(full, cur);
    out.iterations = it;
    for (const auto& a : next)
      if (a.depth() > fuel.max_term_depth) {
        out.model = std::move(next);
        out.exhausted = FuelBound::TermDepth;
        return out;
      }
    if (next.size() > fuel.max_atoms) {
      out.model = std::move(next);
      out.exhausted = FuelBound::Atoms;
      return out;
    }
    if (next == cur) {
      out.converged = true;
      out.model = std::move(cur);
      return out;
    }
    cur = std::move(next);
  }
  out.model = std::move(cur);
  out.exhausted = FuelBound::Iterations;
  return out;
}

/// Semi-naive bottom-up evaluation of p over the database db within fuel.
inline EvalOutcome bottom_up_eval(const Program& p, const std::vector<Atom>& db, const Fuel& fuel = {}) {
  detail::require_standard(p);
  detail::FactStore store;
  EvalOutcome out;

  auto finish = [&](std::optional<FuelBound> bound) {
    out.model = store.all();
    out.exhausted = bound;
    out.converged = !bound;
    return out;
  };
  auto add = [&](const Atom& a) -> std::optional<FuelBound> {
    if (a.depth() > fuel.max_term_depth) return FuelBound::TermDepth;
    store.insert(a);
    if (store.size() > fuel.max_atoms) return FuelBound::Atoms;
    return std::nullopt;
  };

  for (const auto& f : db)
    if (auto b = add(f)) return finish(b);
  for (const auto& r : p.rules)
    if (r.pos_body.empty() && r.head.front().is_ground())
      if (auto b = add(r.head.front())) return finish(b);
  out.iterations = 1;

  auto old_marks = std::map<PredicateSymbol, std::size_t>{};
  auto new_marks = store.marks();
  while (true) {
    if (out.iterations >= fuel.max_iterations) return finish(FuelBound::Iterations);
    std::vector<Atom> derived;
    for (const auto& r : p.rules) {
      const auto& body = r.pos_body;
      for (std::size_t d = 0; d < body.size(); ++d) {
        const auto pd = body[d].symbol();
        if (detail::mark(old_marks, pd) == detail::mark(new_marks, pd)) continue;
        std::function<void(std::size_t, Substitution&)> join = [&](std::size_t k, Substitution& s) {
          if (k == body.size()) {
            derived.push_back(substitute(s, r.head.front()));
            return;
          }
          const auto pk = body[k].symbol();
          const auto& facts = store.of(pk);
          std::size_t lo = 0, hi = detail::mark(new_marks, pk);
          if (k < d) hi = detail::mark(old_marks, pk);
          if (k == d) lo = detail::mark(old_marks, pk);
          for (std::size_t n = lo; n < hi; ++n) {
            Substitution ext = s;
            if (detail::match(body[k], facts[n], ext)) join(k + 1, ext);
          }
        };
        Substitution s;
        join(0, s);
      }
    }
    old_marks = new_marks;
    std::size_t before = store.size();
    for (const auto& a : derived)
      if (auto b = add(a)) return finish(b);
    ++out.iterations;
    new_marks = store.marks();
    if (store.size() == before) return finish(std::nullopt);
  }
}

/// Observed active domain of every argument occurring in m.
inline std::map<ArgumentId, std::set<Term>> active_domains(const Interpretation& m) {
  std::map<ArgumentId, std::set<Term>> out;
  for (const auto& a : m)
    for (std::size_t i = 0; i < a.arity(); ++i) out[{a.predicate, a.arity(), i + 1}].insert(a.args[i]);
  return out;
}

// ---------------------------------------------------------------------------
// Bounded grounding and stable models

/// Herbrand universe of the given constants and function symbols, truncated
/// at term depth `depth_cap`, in deterministic order.
inline std::vector<Term> truncated_universe(const std::set<std::string>& constants,
                                            const std::set<FunctionSymbol>& functions, std::size_t depth_cap,
                                            std::size_t max_terms) {
  std::vector<Term> universe;
  for (const auto& c : constants) universe.push_back(Term::constant(c));
  std::size_t level_start = 0;
  for (std::size_t d = 1; d <= depth_cap; ++d) {
    std::size_t level_end = universe.size();
    std::vector<Term> fresh;
    for (const auto& f : functions) {
      std::vector<std::size_t> choice(f.arity, 0);
      for (;;) {
        bool uses_new = false;
        std::vector<Term> args;
        for (auto c : choice) {
          args.push_back(universe[c]);
          uses_new = uses_new || c >= level_start;
        }
        if (uses_new) {
          fresh.push_back(Term::compound(f.name, std::move(args)));
          if (universe.size() + fresh.size() > max_terms)
            throw ResourceError("truncated universe exceeds " + std::to_string(max_terms) + " terms");
        }
        std::size_t pos = 0;
        while (pos < choice.size() && ++choice[pos] == level_end) choice[pos++] = 0;
        if (pos == choice.size()) break;
      }
    }
    level_start = level_end;
    universe.insert(universe.end(), fresh.begin(), fresh.end());
    if (fresh.empty()) break;
  }
  return universe;
}

struct GroundingOptions {
  std::size_t depth_cap = 2;
  std::set<std::string> extra_constants;
  std::size_t max_instances = 100000;
};

/// All ground instances over the truncated universe whose atoms keep every
/// argument within depth_cap.
inline Program ground_bounded(const Program& p, const GroundingOptions& opts = {}) {
  std::set<std::string> constants = p.constants();
  constants.insert(opts.extra_constants.begin(), opts.extra_constants.end());
  auto universe = truncated_universe(constants, p.function_symbols(), opts.depth_cap, opts.max_instances);

  Program out;
  out.declared_base = p.declared_base;
  out.declared_derived = p.declared_derived;
  std::size_t counter = 0;
  for (const auto& r : p.rules) {
    std::vector<std::string> vars;
    for (const auto* atoms : {&r.head, &r.pos_body, &r.neg_body})
      for (const auto& a : *atoms) collect_variables(a, vars);
    std::vector<std::size_t> choice(vars.size(), 0);
    if (!vars.empty() && universe.empty()) continue;
    for (;;) {
      Substitution s;
      for (std::size_t i = 0; i < vars.size(); ++i) s.emplace(vars[i], universe[choice[i]]);
      Rule g = substitute(s, r);
      bool within = true;
      for (const auto* atoms : {&g.head, &g.pos_body, &g.neg_body})
        for (const auto& a : *atoms) within = within && a.depth() <= opts.depth_cap;
      if (within) {
        g.id = vars.empty() ? r.id : r.id + "_g" + std::to_string(++counter);
        out.rules.push_back(std::move(g));
        if (out.rules.size() > opts.max_instances)
          throw ResourceError("grounding exceeds " + std::to_string(opts.max_instances) + " rule instances");
      }
      std::size_t pos = 0;
      while (pos < choice.size() && ++choice[pos] == universe.size()) choice[pos++] = 0;
      if (pos == choice.size()) break;
    }
  }
  return out;
}

/// Ground atoms occurring anywhere in a ground program, sorted.
inline std::vector<Atom> ground_atoms(const Program& gp) {
  std::set<Atom> s;
  for (const auto& r : gp.rules)
    for (const auto* atoms : {&r.head, &r.pos_body, &r.neg_body})
      for (const auto& a : *atoms) s.insert(a);
  return {s.begin(), s.end()};
}

/// Brute-force stable models of a ground (possibly disjunctive) program:
/// every I that is a minimal model of its reduct P^I.
inline std::vector<Interpretation> enumerate_stable_models(const Program& gp, std::size_t atom_cap = 20) {
  auto atoms = ground_atoms(gp);
  if (atoms.size() > atom_cap || atoms.size() > 30)
    throw ResourceError("stable model enumeration over " + std::to_string(atoms.size()) + " atoms exceeds cap " +
                        std::to_string(atom_cap));
  std::map<Atom, std::size_t> pos;
  for (std::size_t i = 0; i < atoms.size(); ++i) pos[atoms[i]] = i;

  struct Masks {
    std::uint32_t head = 0, pos = 0, neg = 0;
  };
  std::vector<Masks> rules;
  for (const auto& r : gp.rules) {
    if (!r.variables().empty()) throw Error("rule " + r.id + " is not ground");
    Masks m;
    for (const auto& a : r.head) m.head |= 1u << pos[a];
    for (const auto& a : r.pos_body) m.pos |= 1u << pos[a];
    for (const auto& a : r.neg_body) m.neg |= 1u << pos[a];
    rules.push_back(m);
  }
  auto models_reduct = [&](std::uint32_t j, std::uint32_t i) {
    for (const auto& m : rules) {
      if (m.neg & i) continue;
      if ((m.pos & ~j) == 0 && (m.head & j) == 0) return false;
    }
    return true;
  };

  std::vector<Interpretation> out;
  const std::uint64_t total = std::uint64_t{1} << atoms.size();
  for (std::uint64_t c = 0; c < total; ++c) {
    auto i = static_cast<std::uint32_t>(c);
    if (!models_reduct(i, i)) continue;
    bool minimal = true;
    for (std::uint32_t j = (i - 1) & i; minimal && j != i; j = (j - 1) & i) {
      if (models_reduct(j, i)) minimal = false;
      if (j == 0) break;
    }
    if (!minimal) continue;
    Interpretation m;
    for (std::size_t k = 0; k < atoms.size(); ++k)
      if (i & (1u << k)) m.insert(atoms[k]);
    out.push_back(std::move(m));
  }
  return out;
}

/// Restriction of an interpretation to the given predicates.
inline Interpretation restrict_to(const Interpretation& m, const std::set<PredicateSymbol>& preds) {
  Interpretation out;
  for (const auto& a : m)
    if (preds.count(a.symbol())) out.insert(a);
  return out;
}

}  // namespace termlint
