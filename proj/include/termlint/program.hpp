#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "termlint/graph.hpp"
#include "termlint/term.hpp"

namespace termlint {

struct PredicateSymbol {
  std::string name;
  std::size_t arity = 0;

  friend auto operator<=>(const PredicateSymbol&, const PredicateSymbol&) = default;
  friend bool operator==(const PredicateSymbol&, const PredicateSymbol&) = default;
};

inline std::string to_string(const PredicateSymbol& p) {
  return p.name + "/" + std::to_string(p.arity);
}

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  Atom() = default;
  Atom(std::string pred, std::vector<Term> a) : predicate(std::move(pred)), args(std::move(a)) {}

  std::size_t arity() const { return args.size(); }
  PredicateSymbol symbol() const { return {predicate, args.size()}; }
  bool is_ground() const {
    return std::all_of(args.begin(), args.end(), [](const Term& t) { return t.is_ground(); });
  }
  /// Depth of the atom: maximum depth of its argument terms.
  std::size_t depth() const {
    std::size_t d = 0;
    for (const auto& t : args) d = std::max(d, t.depth());
    return d;
  }

  friend bool operator==(const Atom&, const Atom&) = default;
  friend std::strong_ordering operator<=>(const Atom& a, const Atom& b) {
    if (auto c = a.predicate <=> b.predicate; c != 0) return c;
    if (auto c = a.args.size() <=> b.args.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.args.size(); ++i)
      if (auto c = a.args[i] <=> b.args[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }
};

inline void collect_variables(const Atom& a, std::vector<std::string>& out) {
  for (const auto& t : a.args) collect_variables(t, out);
}
inline void collect_variables(const Atom& a, std::set<std::string>& out) {
  for (const auto& t : a.args) collect_variables(t, out);
}

/// A (possibly disjunctive) rule `h1 | ... | hm :- b1, ..., bk, not c1, ..., not cn.`
struct Rule {
  std::string id;
  std::vector<Atom> head;
  std::vector<Atom> pos_body;
  std::vector<Atom> neg_body;
  /// Source line, 0 when synthesised. Not part of rule identity.
  std::size_t line = 0;

  bool is_normal() const { return head.size() == 1; }
  bool is_positive() const { return neg_body.empty(); }
  bool is_standard() const { return is_normal() && is_positive(); }
  bool has_empty_body() const { return pos_body.empty() && neg_body.empty(); }
  bool is_fact() const { return is_normal() && has_empty_body() && head.front().is_ground(); }

  std::set<std::string> variables() const {
    std::set<std::string> out;
    for (const auto& a : head) collect_variables(a, out);
    for (const auto& a : pos_body) collect_variables(a, out);
    for (const auto& a : neg_body) collect_variables(a, out);
    return out;
  }

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.id == b.id && a.head == b.head && a.pos_body == b.pos_body && a.neg_body == b.neg_body;
  }
};

/// Argument p[i] of a predicate; `index` is 1-based.
struct ArgumentId {
  std::string predicate;
  std::size_t arity = 0;
  std::size_t index = 1;

  friend auto operator<=>(const ArgumentId&, const ArgumentId&) = default;
  friend bool operator==(const ArgumentId&, const ArgumentId&) = default;
};

inline std::string to_string(const ArgumentId& a) {
  return a.predicate + "[" + std::to_string(a.index) + "]";
}

using ArgumentSet = std::set<ArgumentId>;

struct Program {
  std::vector<Rule> rules;
  /// Explicit `#base p/n.` and `#derived p/n.` directives.
  std::set<PredicateSymbol> declared_base;
  std::set<PredicateSymbol> declared_derived;

  bool is_standard() const {
    return std::all_of(rules.begin(), rules.end(), [](const Rule& r) { return r.is_standard(); });
  }
  bool is_positive() const {
    return std::all_of(rules.begin(), rules.end(), [](const Rule& r) { return r.is_positive(); });
  }

  /// Predicates in order of first appearance (rule by rule: head, positive body,
  /// negative body), followed by directive-only predicates.
  std::vector<PredicateSymbol> predicates() const {
    std::vector<PredicateSymbol> out;
    std::set<PredicateSymbol> seen;
    auto visit = [&](const Atom& a) {
      if (seen.insert(a.symbol()).second) out.push_back(a.symbol());
    };
    for (const auto& r : rules) {
      for (const auto& a : r.head) visit(a);
      for (const auto& a : r.pos_body) visit(a);
      for (const auto& a : r.neg_body) visit(a);
    }
    for (const auto* decls : {&declared_base, &declared_derived})
      for (const auto& p : *decls)
        if (seen.insert(p).second) out.push_back(p);
    return out;
  }

  /// args(P) in program order.
  std::vector<ArgumentId> arguments() const {
    std::vector<ArgumentId> out;
    for (const auto& p : predicates())
      for (std::size_t i = 1; i <= p.arity; ++i) out.push_back({p.name, p.arity, i});
    return out;
  }

  std::set<FunctionSymbol> function_symbols() const {
    std::set<FunctionSymbol> out;
    for (const auto& r : rules)
      for (const auto* atoms : {&r.head, &r.pos_body, &r.neg_body})
        for (const auto& a : *atoms)
          for (const auto& t : a.args) collect_function_symbols(t, out);
    return out;
  }

  std::set<std::string> constants() const {
    std::set<std::string> out;
    for (const auto& r : rules)
      for (const auto* atoms : {&r.head, &r.pos_body, &r.neg_body})
        for (const auto& a : *atoms)
          for (const auto& t : a.args) collect_constants(t, out);
    return out;
  }

  const Rule* find_rule(const std::string& id) const {
    for (const auto& r : rules)
      if (r.id == id) return &r;
    return nullptr;
  }

  friend bool operator==(const Program& a, const Program& b) {
    return a.rules == b.rules && a.declared_base == b.declared_base &&
           a.declared_derived == b.declared_derived;
  }
};

/// Dense numbering of args(P), used by the graph-based analyses.
class ArgumentIndex {
 public:
  explicit ArgumentIndex(const Program& p) : args_(p.arguments()) {
    for (std::size_t i = 0; i < args_.size(); ++i) pos_[args_[i]] = i;
  }

  std::size_t size() const { return args_.size(); }
  const ArgumentId& at(std::size_t i) const { return args_[i]; }
  const std::vector<ArgumentId>& all() const { return args_; }
  std::size_t of(const ArgumentId& a) const { return pos_.at(a); }
  std::size_t of(const Atom& atom, std::size_t zero_based) const {
    return pos_.at({atom.predicate, atom.arity(), zero_based + 1});
  }
  bool contains(const ArgumentId& a) const { return pos_.count(a) > 0; }

  ArgumentSet to_set(const std::vector<bool>& mask) const {
    ArgumentSet out;
    for (std::size_t i = 0; i < args_.size(); ++i)
      if (mask[i]) out.insert(args_[i]);
    return out;
  }
  std::vector<bool> to_mask(const ArgumentSet& s) const {
    std::vector<bool> out(args_.size(), false);
    for (const auto& a : s)
      if (auto it = pos_.find(a); it != pos_.end()) out[it->second] = true;
    return out;
  }

 private:
  std::vector<ArgumentId> args_;
  std::map<ArgumentId, std::size_t> pos_;
};

// ---------------------------------------------------------------------------
// Validation and classification

struct Diagnostic {
  enum class Kind { RangeRestriction, ArityConflict, DeclarationConflict };
  Kind kind;
  std::string rule_id;
  std::size_t line = 0;
  std::string message;
};

inline const char* to_string(Diagnostic::Kind k) {
  switch (k) {
    case Diagnostic::Kind::RangeRestriction: return "range-restriction";
    case Diagnostic::Kind::ArityConflict: return "arity-conflict";
    case Diagnostic::Kind::DeclarationConflict: return "declaration-conflict";
  }
  return "unknown";
}

class ProgramError : public Error {
 public:
  explicit ProgramError(std::vector<Diagnostic> diags)
      : Error(summary(diags)), diagnostics_(std::move(diags)) {}
  const std::vector<Diagnostic>& diagnostics() const { return diagnostics_; }

 private:
  static std::string summary(const std::vector<Diagnostic>& d) {
    std::string s = "invalid program";
    for (const auto& x : d) s += "\n  " + x.message;
    return s;
  }
  std::vector<Diagnostic> diagnostics_;
};

struct Classification {
  std::set<PredicateSymbol> base;
  std::set<PredicateSymbol> derived;

  bool is_base(const PredicateSymbol& p) const { return base.count(p) > 0; }
  bool is_derived(const PredicateSymbol& p) const { return derived.count(p) > 0; }
};

namespace detail {

inline std::set<PredicateSymbol> predicates_heading_non_facts(const Program& p) {
  std::set<PredicateSymbol> out;
  for (const auto& r : p.rules)
    if (!r.has_empty_body() || !r.is_normal())
      for (const auto& h : r.head) out.insert(h.symbol());
  return out;
}

inline std::vector<Diagnostic> declaration_conflicts(const Program& p) {
  std::vector<Diagnostic> out;
  auto heads = predicates_heading_non_facts(p);
  for (const auto& b : p.declared_base) {
    if (p.declared_derived.count(b))
      out.push_back({Diagnostic::Kind::DeclarationConflict, "", 0,
                     to_string(b) + " is declared both base and derived"});
    if (heads.count(b))
      out.push_back({Diagnostic::Kind::DeclarationConflict, "", 0,
                     to_string(b) + " is declared base but heads a rule with a body"});
  }
  return out;
}

}  // namespace detail

/// Base/derived partition. A predicate is base iff declared base, or it never
/// heads a non-fact rule and is not declared derived.
inline Classification classify_predicates(const Program& p) {
  if (auto conflicts = detail::declaration_conflicts(p); !conflicts.empty())
    throw ProgramError(std::move(conflicts));
  auto heads = detail::predicates_heading_non_facts(p);
  Classification c;
  for (const auto& pred : p.predicates()) {
    bool base = p.declared_base.count(pred) ||
                (!heads.count(pred) && !p.declared_derived.count(pred));
    (base ? c.base : c.derived).insert(pred);
  }
  return c;
}

/// One diagnostic per violated invariant; empty means valid.
inline std::vector<Diagnostic> validate(const Program& p) {
  std::vector<Diagnostic> out;
  for (const auto& r : p.rules) {
    std::set<std::string> pos;
    for (const auto& a : r.pos_body) collect_variables(a, pos);
    std::set<std::string> missing;
    for (const auto* atoms : {&r.head, &r.neg_body})
      for (const auto& a : *atoms) {
        std::set<std::string> vs;
        collect_variables(a, vs);
        for (const auto& v : vs)
          if (!pos.count(v)) missing.insert(v);
      }
    for (const auto& v : missing) {
      out.push_back({Diagnostic::Kind::RangeRestriction, r.id, r.line,
                     "rule " + r.id + ": variable " + v +
                         " does not occur in the positive body"});
    }
  }

  std::map<std::string, std::set<std::size_t>> pred_arities, fun_arities;
  for (const auto& r : p.rules)
    for (const auto* atoms : {&r.head, &r.pos_body, &r.neg_body})
      for (const auto& a : *atoms) {
        pred_arities[a.predicate].insert(a.arity());
        std::set<FunctionSymbol> fs;
        for (const auto& t : a.args) collect_function_symbols(t, fs);
        for (const auto& f : fs) fun_arities[f.name].insert(f.arity);
      }
  for (const auto& [name, ar] : pred_arities)
    if (ar.size() > 1)
      out.push_back({Diagnostic::Kind::ArityConflict, "", 0,
                     "predicate " + name + " is used with " + std::to_string(ar.size()) +
                         " different arities"});
  for (const auto& [name, ar] : fun_arities)
    if (ar.size() > 1)
      out.push_back({Diagnostic::Kind::ArityConflict, "", 0,
                     "function symbol " + name + " is used with " + std::to_string(ar.size()) +
                         " different arities"});

  for (auto& d : detail::declaration_conflicts(p)) out.push_back(std::move(d));
  return out;
}

// ---------------------------------------------------------------------------
// Flatness

struct FlatnessIssue {
  std::string rule_id;
  std::string description;
};

struct FlatnessReport {
  bool flat = true;
  std::vector<FlatnessIssue> issues;
  explicit operator bool() const { return flat; }
};

namespace detail {

inline std::set<std::string> variables_in_complex_terms(const std::vector<Atom>& atoms) {
  std::set<std::string> out;
  for (const auto& a : atoms)
    for (const auto& t : a.args)
      if (t.is_compound()) collect_variables(t, out);
  return out;
}

}  // namespace detail

/// Flatness of a single rule: nesting depth at most one, and no variable
/// inside complex terms on both sides. Ground facts are database content and
/// always count as flat.
inline std::vector<FlatnessIssue> flatness_issues(const Rule& r) {
  std::vector<FlatnessIssue> out;
  if (r.is_fact()) return out;
  for (const auto* atoms : {&r.head, &r.pos_body, &r.neg_body})
    for (const auto& a : *atoms)
      if (a.depth() > 1)
        out.push_back({r.id, "atom " + a.predicate + " has nesting depth " +
                                 std::to_string(a.depth())});
  auto head_vars = detail::variables_in_complex_terms(r.head);
  std::vector<Atom> body = r.pos_body;
  body.insert(body.end(), r.neg_body.begin(), r.neg_body.end());
  auto body_vars = detail::variables_in_complex_terms(body);
  for (const auto& v : head_vars)
    if (body_vars.count(v))
      out.push_back({r.id, "variable " + v + " occurs in complex terms of both head and body"});
  return out;
}

inline FlatnessReport is_flat(const Program& p) {
  FlatnessReport rep;
  for (const auto& r : p.rules) {
    auto issues = flatness_issues(r);
    rep.issues.insert(rep.issues.end(), issues.begin(), issues.end());
  }
  rep.flat = rep.issues.empty();
  return rep;
}

// ---------------------------------------------------------------------------
// Predicate dependencies and recursion structure

/// Recursion structure of a program derived from the predicate dependency
/// relation: which predicates are mutually recursive, rbody(r), and which
/// rules are (strongly) linear.
class RecursionInfo {
 public:
  explicit RecursionInfo(const Program& p) : preds_(p.predicates()) {
    for (std::size_t i = 0; i < preds_.size(); ++i) pos_[preds_[i]] = i;
    Digraph deps(preds_.size());
    for (const auto& r : p.rules)
      for (const auto& h : r.head)
        for (const auto* body : {&r.pos_body, &r.neg_body})
          for (const auto& b : *body) deps.add_edge(pos_.at(h.symbol()), pos_.at(b.symbol()));
    comp_ = strongly_connected_components(deps);
    auto cyc = nodes_on_cycles(deps);
    recursive_ = cyc;

    for (const auto& r : p.rules) {
      RuleInfo info;
      for (std::size_t i = 0; i < r.pos_body.size(); ++i) {
        bool rec = false;
        for (const auto& h : r.head) rec = rec || mutually_recursive(h.symbol(), r.pos_body[i].symbol());
        if (rec) info.rbody.push_back(i);
      }
      for (const auto& b : r.neg_body)
        for (const auto& h : r.head) info.recursive = info.recursive || mutually_recursive(h.symbol(), b.symbol());
      info.recursive = info.recursive || !info.rbody.empty();
      rules_[r.id] = info;
    }
    for (const auto& r : p.rules) {
      RuleInfo& info = rules_[r.id];
      if (!info.recursive || !r.is_normal() || info.rbody.size() > 1) continue;
      const auto head = r.head.front().symbol();
      if (info.rbody.size() != 1 || r.pos_body[info.rbody.front()].symbol() != head) continue;
      bool alone = true;
      for (const auto& other : p.rules) {
        if (other.id == r.id || !rules_[other.id].recursive) continue;
        for (const auto& h : other.head) alone = alone && h.symbol() != head;
      }
      info.strongly_linear = alone;
    }
  }

  bool is_recursive(const PredicateSymbol& p) const { return recursive_[pos_.at(p)]; }

  /// p and q depend on each other (p == q: p is recursive).
  bool mutually_recursive(const PredicateSymbol& p, const PredicateSymbol& q) const {
    std::size_t a = pos_.at(p), b = pos_.at(q);
    if (a == b) return recursive_[a];
    return comp_[a] == comp_[b];
  }

  bool is_recursive_rule(const Rule& r) const { return rules_.at(r.id).recursive; }
  /// Indices into r.pos_body of atoms mutually recursive with the head.
  const std::vector<std::size_t>& rbody(const Rule& r) const { return rules_.at(r.id).rbody; }
  bool is_linear(const Rule& r) const { return rules_.at(r.id).rbody.size() <= 1; }
  bool is_strongly_linear(const Rule& r) const { return rules_.at(r.id).strongly_linear; }

 private:
  struct RuleInfo {
    bool recursive = false;
    bool strongly_linear = false;
    std::vector<std::size_t> rbody;
  };
  std::vector<PredicateSymbol> preds_;
  std::map<PredicateSymbol, std::size_t> pos_;
  std::vector<std::size_t> comp_;
  std::vector<bool> recursive_;
  std::map<std::string, RuleInfo> rules_;
};

}  // namespace termlint
