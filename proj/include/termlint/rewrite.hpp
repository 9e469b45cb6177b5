#pragma once

#include <cctype>
#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "termlint/gamma.hpp"
#include "termlint/program.hpp"
#include "termlint/ranking.hpp"
#include "termlint/safety.hpp"
#include "termlint/unify.hpp"

namespace termlint {

// ---------------------------------------------------------------------------
// Flattening

namespace detail {

/// Mints variable names A, B, ..., Z, A1, ... not used by the rule.
class FreshVariables {
 public:
  explicit FreshVariables(std::set<std::string> used) : used_(std::move(used)) {}
  Term next() {
    for (;;) {
      std::string name(1, static_cast<char>('A' + counter_ % 26));
      if (counter_ >= 26) name += std::to_string(counter_ / 26);
      ++counter_;
      if (used_.insert(name).second) return Term::variable(name);
    }
  }

 private:
  std::set<std::string> used_;
  std::size_t counter_ = 0;
};

/// Replaces every complex subterm at nesting level two by a fresh variable;
/// identical subterms share the variable. Returns the inverse replacement.
inline Substitution abstract_second_level(std::vector<Atom>& atoms, FreshVariables& fresh) {
  Substitution back;
  std::map<Term, Term> chosen;
  for (auto& a : atoms)
    for (auto& t : a.args) {
      if (!t.is_compound()) continue;
      std::vector<Term> kids(t.args().begin(), t.args().end());
      bool changed = false;
      for (auto& k : kids) {
        if (!k.is_compound()) continue;
        auto it = chosen.find(k);
        if (it == chosen.end()) {
          Term v = fresh.next();
          back.emplace(v.name(), k);
          it = chosen.emplace(k, v).first;
        }
        k = it->second;
        changed = true;
      }
      if (changed) t = Term::compound(t.name(), std::move(kids));
    }
  return back;
}

inline std::vector<Term> variable_terms(const std::vector<Atom>& atoms) {
  std::vector<std::string> names;
  for (const auto& a : atoms) collect_variables(a, names);
  std::vector<Term> out;
  for (const auto& n : names) out.push_back(Term::variable(n));
  return out;
}

inline std::size_t conjunction_depth(const std::vector<Atom>& atoms) {
  std::size_t d = 0;
  for (const auto& a : atoms) d = std::max(d, a.depth());
  return d;
}

inline bool has_complex_term(const Atom& a) {
  return std::any_of(a.args.begin(), a.args.end(), [](const Term& t) { return t.is_compound(); });
}

class RuleFlattener {
 public:
  RuleFlattener(const Rule& r, std::function<std::string(std::size_t)> fresh_pred)
      : rule_(r), fresh_pred_(std::move(fresh_pred)), vars_(r.variables()) {}

  std::vector<Rule> run() {
    Atom cur = rule_.head.front();
    while (cur.depth() > 1) {
      std::vector<Atom> h{cur};
      Substitution back = abstract_second_level(h, vars_);
      Atom b{next_pred(), variable_terms(h)};
      emit(h.front(), {b});
      cur = substitute(back, b);
    }
    emit_body(cur, rule_.pos_body);
    return std::move(out_);
  }

 private:
  std::string next_pred() { return fresh_pred_(++pred_counter_); }

  void emit(Atom head, std::vector<Atom> body) {
    Rule r;
    r.id = rule_.id + "_" + std::to_string(out_.size() + 1);
    r.line = rule_.line;
    r.head = {std::move(head)};
    r.pos_body = std::move(body);
    out_.push_back(std::move(r));
  }

  void emit_body(Atom cur, const std::vector<Atom>& body) {
    std::size_t depth = conjunction_depth(body);
    bool shared = false;
    {
      auto hv = variables_in_complex_terms({cur});
      auto bv = variables_in_complex_terms(body);
      for (const auto& v : hv) shared = shared || bv.count(v) > 0;
    }
    if (depth <= 1 && !shared) return emit(std::move(cur), body);
    if (has_complex_term(cur)) {
      Atom b{next_pred(), variable_terms({cur})};
      emit(std::move(cur), {b});
      cur = std::move(b);
    }
    if (depth <= 1) return emit(std::move(cur), body);
    std::vector<Atom> flat = body;
    Substitution back = abstract_second_level(flat, vars_);
    Atom b{next_pred(), variable_terms(flat)};
    emit_body(std::move(cur), {substitute(back, b)});
    emit_body(b, flat);
  }

  const Rule& rule_;
  std::function<std::string(std::size_t)> fresh_pred_;
  FreshVariables vars_;
  std::size_t pred_counter_ = 0;
  std::vector<Rule> out_;
};

}  // namespace detail

/// Flattens one standard rule. Fresh predicates are named by `fresh_pred(k)`
/// for k = 1, 2, ...; the default is "b<k>_<rule id>".
inline std::vector<Rule> flatten_rule(const Rule& r,
                                      std::function<std::string(std::size_t)> fresh_pred = nullptr) {
  if (!r.is_standard()) throw Error("rule " + r.id + " is not standard; flattening needs normal positive rules");
  if (r.is_fact() || flatness_issues(r).empty()) return {r};
  if (!fresh_pred) fresh_pred = [id = r.id](std::size_t k) { return "b" + std::to_string(k) + "_" + id; };
  return detail::RuleFlattener(r, std::move(fresh_pred)).run();
}

struct FlattenResult {
  Program program;
  /// Output rule id -> source rule id.
  std::map<std::string, std::string> origin;
};

inline FlattenResult flatten_with_origin(const Program& p) {
  std::set<std::string> names;
  for (const auto& pred : p.predicates()) names.insert(pred.name);
  std::set<std::string> ids;
  for (const auto& r : p.rules) ids.insert(r.id);

  FlattenResult res;
  res.program.declared_base = p.declared_base;
  res.program.declared_derived = p.declared_derived;
  for (const auto& r : p.rules) {
    auto fresh = [&](std::size_t k) {
      std::string base = "b" + std::to_string(k) + "_" + r.id, name = base;
      for (std::size_t n = 1; names.count(name); ++n) name = base + "_" + std::to_string(n);
      names.insert(name);
      return name;
    };
    auto rules = flatten_rule(r, fresh);
    for (auto& out : rules) {
      if (out.id != r.id) {
        std::string base = out.id;
        for (std::size_t n = 1; ids.count(out.id); ++n) out.id = base + "_" + std::to_string(n);
        ids.insert(out.id);
      }
      res.origin[out.id] = r.id;
      res.program.rules.push_back(std::move(out));
    }
  }
  return res;
}

inline Program flatten_program(const Program& p) { return flatten_with_origin(p).program; }

// ---------------------------------------------------------------------------
// Standard version and extended program

/// st(P): one rule a_i :- body+ per head atom; negative literals dropped.
inline Program standard_version(const Program& p) {
  Program out;
  out.declared_base = p.declared_base;
  out.declared_derived = p.declared_derived;
  for (const auto& r : p.rules) {
    for (std::size_t i = 0; i < r.head.size(); ++i) {
      Rule s;
      s.id = r.head.size() == 1 ? r.id : r.id + "_" + std::to_string(i + 1);
      s.line = r.line;
      s.head = {r.head[i]};
      s.pos_body = r.pos_body;
      out.rules.push_back(std::move(s));
    }
  }
  return out;
}

/// Derived predicate renaming used by ST(P): first letter upper-cased, with
/// "_1", "_2", ... appended while the name is taken.
inline std::map<PredicateSymbol, std::string> derived_renaming(const Program& p) {
  Classification cls = classify_predicates(p);
  auto preds = p.predicates();
  std::set<PredicateSymbol> taken(preds.begin(), preds.end());
  std::map<PredicateSymbol, std::string> out;
  for (const auto& pred : preds) {
    if (!cls.is_derived(pred)) continue;
    std::string base = pred.name;
    base[0] = static_cast<char>(std::toupper(static_cast<unsigned char>(base[0])));
    std::string name = base;
    for (std::size_t n = 1; taken.count({name, pred.arity}); ++n) name = base + "_" + std::to_string(n);
    taken.insert({name, pred.arity});
    out[pred] = name;
  }
  return out;
}

namespace detail {

inline Atom rename_atom(const Atom& a, const std::map<PredicateSymbol, std::string>& ren) {
  auto it = ren.find(a.symbol());
  return it == ren.end() ? a : Atom{it->second, a.args};
}

inline Program renamed_standard_version(const Program& p, const std::map<PredicateSymbol, std::string>& ren) {
  Program out = standard_version(p);
  out.declared_base = p.declared_base;
  out.declared_derived.clear();
  for (const auto& d : p.declared_derived) out.declared_derived.insert({ren.count(d) ? ren.at(d) : d.name, d.arity});
  for (auto& r : out.rules) {
    r.id += "_st";
    for (auto& a : r.head) a = rename_atom(a, ren);
    for (auto& a : r.pos_body) a = rename_atom(a, ren);
  }
  return out;
}

}  // namespace detail

/// ST(P): st(P) over renamed derived predicates; base predicates untouched.
inline Program renamed_standard_version(const Program& p) {
  return detail::renamed_standard_version(p, derived_renaming(p));
}

/// ext(P) = { head(r) :- headconj(r), body(r) } ∪ ST(P). Facts over base
/// predicates are kept as they are.
inline Program extended_program(const Program& p) {
  auto ren = derived_renaming(p);
  Program out;
  out.declared_base = p.declared_base;
  out.declared_derived = p.declared_derived;
  for (const auto& r : p.rules) {
    bool base_fact = r.is_fact() && !ren.count(r.head.front().symbol());
    if (base_fact) {
      out.rules.push_back(r);
      continue;
    }
    Rule e = r;
    std::vector<Atom> body;
    for (const auto& h : r.head) body.push_back(detail::rename_atom(h, ren));
    body.insert(body.end(), r.pos_body.begin(), r.pos_body.end());
    e.pos_body = std::move(body);
    out.rules.push_back(std::move(e));
  }
  Program st = detail::renamed_standard_version(p, ren);
  for (auto& r : st.rules) out.rules.push_back(std::move(r));
  for (const auto& d : st.declared_derived) out.declared_derived.insert(d);
  return out;
}

// ---------------------------------------------------------------------------
// Magic sets

using Adornment = std::string;

inline std::string adorned_name(const std::string& pred, const Adornment& a) { return pred + "_" + a; }
inline std::string magic_name(const std::string& pred, const Adornment& a) { return "magic_" + pred + "_" + a; }

struct MagicResult {
  Atom goal;
  Adornment goal_adornment;
  Program program;
  /// Adorned predicates generated, in generation order.
  std::vector<std::pair<PredicateSymbol, Adornment>> adorned;
};

namespace detail {

inline bool term_bound(const Term& t, const std::set<std::string>& bound) {
  std::set<std::string> vs;
  collect_variables(t, vs);
  return std::all_of(vs.begin(), vs.end(), [&](const auto& v) { return bound.count(v) > 0; });
}

inline std::vector<Term> bound_args(const Atom& a, const Adornment& ad) {
  std::vector<Term> out;
  for (std::size_t i = 0; i < ad.size(); ++i)
    if (ad[i] == 'b') out.push_back(a.args[i]);
  return out;
}

}  // namespace detail

/// Generalized magic-set rewriting with left-to-right sideways information
/// passing. Base predicates keep their names; derived ones become p_α with
/// demand predicates magic_p_α. Output: seed fact, magic rules, modified rules.
inline MagicResult magic_rewrite(const Atom& goal, const Program& p) {
  if (!p.is_standard()) throw Error("magic-set rewriting needs a standard program");
  Classification cls = classify_predicates(p);
  MagicResult res;
  res.goal = goal;
  if (!cls.is_derived(goal.symbol())) {
    res.program = p;
    return res;
  }

  for (const auto& t : goal.args) res.goal_adornment += t.is_ground() ? 'b' : 'f';
  res.goal = Atom{adorned_name(goal.predicate, res.goal_adornment), goal.args};

  std::vector<Rule> magic_rules, modified;
  Rule seed;
  seed.head = {Atom{magic_name(goal.predicate, res.goal_adornment), detail::bound_args(goal, res.goal_adornment)}};

  std::deque<std::pair<PredicateSymbol, Adornment>> queue{{goal.symbol(), res.goal_adornment}};
  std::set<std::pair<PredicateSymbol, Adornment>> seen{queue.front()};
  while (!queue.empty()) {
    auto [pred, ad] = queue.front();
    queue.pop_front();
    res.adorned.emplace_back(pred, ad);
    for (const auto& r : p.rules) {
      const Atom& h = r.head.front();
      if (h.symbol() != pred) continue;
      std::set<std::string> bound;
      for (std::size_t i = 0; i < ad.size(); ++i)
        if (ad[i] == 'b') collect_variables(h.args[i], bound);
      Atom magic_head{magic_name(pred.name, ad), detail::bound_args(h, ad)};
      std::vector<Atom> body{magic_head};
      for (const auto& b : r.pos_body) {
        if (cls.is_derived(b.symbol())) {
          Adornment bad;
          for (const auto& t : b.args) bad += detail::term_bound(t, bound) ? 'b' : 'f';
          Rule m;
          m.head = {Atom{magic_name(b.predicate, bad), detail::bound_args(b, bad)}};
          m.pos_body = body;
          magic_rules.push_back(std::move(m));
          if (seen.insert({b.symbol(), bad}).second) queue.emplace_back(b.symbol(), bad);
          body.push_back(Atom{adorned_name(b.predicate, bad), b.args});
        } else {
          body.push_back(b);
        }
        collect_variables(b, bound);
      }
      Rule mod;
      mod.head = {Atom{adorned_name(pred.name, ad), h.args}};
      mod.pos_body = std::move(body);
      modified.push_back(std::move(mod));
    }
  }

  res.program.declared_base = p.declared_base;
  res.program.rules.push_back(std::move(seed));
  for (auto& r : magic_rules) res.program.rules.push_back(std::move(r));
  for (auto& r : modified) res.program.rules.push_back(std::move(r));
  for (std::size_t i = 0; i < res.program.rules.size(); ++i) res.program.rules[i].id = "r" + std::to_string(i + 1);
  return res;
}

// ---------------------------------------------------------------------------
// Criteria on whole programs and query safety

enum class Criterion { AR, Gamma, Safe, KSafe };

inline const char* to_string(Criterion c) {
  switch (c) {
    case Criterion::AR: return "ar";
    case Criterion::Gamma: return "gamma";
    case Criterion::Safe: return "safe";
    case Criterion::KSafe: return "ksafe";
  }
  return "?";
}

/// Program-level verdict of a criterion on a flat standard program.
inline bool satisfies(const Program& flat, Criterion c, std::size_t k = 2, const ActivationOptions& opts = {}) {
  switch (c) {
    case Criterion::AR: return compute_ar(flat).all_restricted;
    case Criterion::Gamma: return analyze_gamma(flat).acyclic;
    case Criterion::Safe: return safe_args(flat, 1, opts).all_safe;
    case Criterion::KSafe: return safe_args(flat, k, opts).all_safe;
  }
  return false;
}

struct QueryVerdict {
  bool safe = false;
  bool original = false;
  bool rewritten = false;
  /// "original", "rewritten" or "none".
  std::string branch;
  MagicResult magic;
  Program rewritten_flat;
};

/// A query is safe when the program or its flattened magic-set rewriting
/// satisfies the criterion. Both branches are evaluated and reported.
inline QueryVerdict query_safe(const Atom& goal, const Program& p, Criterion c, std::size_t k = 2,
                               const ActivationOptions& opts = {}) {
  Program standard = p.is_standard() ? p : standard_version(p);
  QueryVerdict v;
  v.original = satisfies(flatten_program(standard), c, k, opts);
  v.magic = magic_rewrite(goal, standard);
  v.rewritten_flat = flatten_program(v.magic.program);
  v.rewritten = satisfies(v.rewritten_flat, c, k, opts);
  v.safe = v.original || v.rewritten;
  v.branch = v.original ? "original" : v.rewritten ? "rewritten" : "none";
  return v;
}

}  // namespace termlint
