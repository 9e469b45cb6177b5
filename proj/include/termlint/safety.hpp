#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdlib>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "termlint/gamma.hpp"
#include "termlint/graph.hpp"
#include "termlint/program.hpp"
#include "termlint/unify.hpp"

namespace termlint {

/// Raised when a bounded computation would exceed its configured budget.
class ResourceError : public Error {
 public:
  using Error::Error;
};

/// Rules as nodes; edge (r, s) when r (transitively, for k > 1) activates s.
struct ActivationGraph {
  std::vector<std::string> rules;
  Digraph graph;
  std::size_t k = 1;

  std::vector<std::pair<std::string, std::string>> edges() const {
    std::vector<std::pair<std::string, std::string>> out;
    for (auto [a, b] : graph.edges()) out.emplace_back(rules[a], rules[b]);
    return out;
  }
  bool has_edge(const std::string& from, const std::string& to) const {
    auto a = std::find(rules.begin(), rules.end(), from);
    auto b = std::find(rules.begin(), rules.end(), to);
    if (a == rules.end() || b == rules.end()) return false;
    return graph.has_edge(static_cast<std::size_t>(a - rules.begin()), static_cast<std::size_t>(b - rules.begin()));
  }
};

namespace detail {

inline std::vector<std::string> rule_ids(const Program& p) {
  std::vector<std::string> ids;
  for (const auto& r : p.rules) ids.push_back(r.id);
  return ids;
}

}  // namespace detail

/// Σ(P): head(r1) and a positive body atom of r2 unify after renaming apart.
inline ActivationGraph activation_graph(const Program& p) {
  ActivationGraph g{detail::rule_ids(p), Digraph(p.rules.size()), 1};
  for (std::size_t a = 0; a < p.rules.size(); ++a) {
    Rule r1 = rename_apart(p.rules[a], "1");
    for (std::size_t b = 0; b < p.rules.size(); ++b) {
      Rule r2 = rename_apart(p.rules[b], "2");
      bool hit = false;
      for (const auto& h : r1.head)
        for (const auto& body : r2.pos_body) hit = hit || unifiable(h, body);
      if (hit) g.graph.add_edge(a, b);
    }
  }
  return g;
}

inline constexpr std::size_t kDefaultMaxSubstBytes = 65536;

/// Budget from TERMLINT_MAX_SUBST_BYTES, or the built-in default.
inline std::size_t default_max_subst_bytes() {
  if (const char* env = std::getenv("TERMLINT_MAX_SUBST_BYTES")) {
    char* end = nullptr;
    unsigned long long v = std::strtoull(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
  }
  return kDefaultMaxSubstBytes;
}

struct ActivationOptions {
  /// Largest instantiated head, in characters of functional notation.
  std::size_t max_subst_bytes = default_max_subst_bytes();
  /// Largest number of distinct (rule, instantiated head) states per level.
  std::size_t max_states = 200000;
};

/// Σ_1(P), ..., Σ_k(P). Active paths are followed level by level; states are
/// (rule, instantiated head up to variable renaming) with the set of rules
/// the paths started from, so that equal continuations are explored once.
inline std::vector<ActivationGraph> activation_graphs(const Program& p, std::size_t k,
                                                      const ActivationOptions& opts = {}) {
  if (k == 0) throw Error("k must be at least 1");
  const std::size_t n = p.rules.size();
  std::vector<Rule> renamed;
  for (const auto& r : p.rules) renamed.push_back(rename_apart(r, "s"));

  using State = std::pair<std::size_t, Atom>;
  std::map<State, std::set<std::size_t>> level;
  for (std::size_t r = 0; r < n; ++r)
    for (const auto& h : p.rules[r].head) level[{r, canonical_variant(h)}].insert(r);

  std::vector<ActivationGraph> out;
  for (std::size_t j = 1; j <= k; ++j) {
    std::map<State, std::set<std::size_t>> next;
    ActivationGraph g{detail::rule_ids(p), Digraph(n), j};
    for (const auto& [state, origins] : level) {
      const Atom& head = state.second;
      for (std::size_t s = 0; s < n; ++s)
        for (const auto& body : renamed[s].pos_body) {
          auto theta = mgu(head, body);
          if (!theta) continue;
          for (std::size_t o : origins) g.graph.add_edge(o, s);
          if (j == k) continue;
          for (const auto& h : renamed[s].head) {
            Atom inst = substitute(*theta, h);
            std::size_t bytes = 0;
            for (const auto& t : inst.args) bytes += t.text_size();
            if (bytes > opts.max_subst_bytes)
              throw ResourceError("active path instantiation exceeds " + std::to_string(opts.max_subst_bytes) +
                                  " bytes at length " + std::to_string(j + 1));
            next[{s, canonical_variant(inst)}].insert(origins.begin(), origins.end());
            if (next.size() > opts.max_states)
              throw ResourceError("more than " + std::to_string(opts.max_states) +
                                  " active path states at length " + std::to_string(j + 1));
          }
        }
    }
    out.push_back(std::move(g));
    level = std::move(next);
  }
  return out;
}

inline ActivationGraph k_restricted_activation_graph(const Program& p, std::size_t k,
                                                     const ActivationOptions& opts = {}) {
  return std::move(activation_graphs(p, k, opts).back());
}

/// Rules reachable (in zero or more steps) from a node on a cycle.
inline std::set<std::string> rules_depending_on_cycles(const ActivationGraph& g) {
  std::set<std::string> out;
  auto dep = depends_on_cycle(g.graph);
  for (std::size_t v = 0; v < dep.size(); ++v)
    if (dep[v]) out.insert(g.rules[v]);
  return out;
}

// ---------------------------------------------------------------------------
// Limited terms and the safety function

enum class Justification { NoCycleDependence, CoveredVariables, StronglyLinear };

inline const char* to_string(Justification j) {
  switch (j) {
    case Justification::NoCycleDependence: return "no-cycle-dependence";
    case Justification::CoveredVariables: return "limited-term-cond-1";
    case Justification::StronglyLinear: return "limited-term-cond-2";
  }
  return "?";
}

struct LimitedTerm {
  bool limited = false;
  /// 1 or 2 when limited, 0 otherwise.
  int condition = 0;
  explicit operator bool() const { return limited; }
};

/// Whether head term t_i (0-based `i`) of `r` is limited with respect to `a`.
inline LimitedTerm term_limited(const Rule& r, std::size_t i, const ArgumentSet& a, const RecursionInfo& rec) {
  const Atom& head = r.head.front();
  std::set<std::string> vars;
  collect_variables(head.args.at(i), vars);
  std::set<std::string> covered;
  for (const auto& b : r.pos_body)
    for (std::size_t j = 0; j < b.arity(); ++j)
      if (a.count({b.predicate, b.arity(), j + 1})) collect_variables(b.args[j], covered);
  if (std::includes(covered.begin(), covered.end(), vars.begin(), vars.end())) return {true, 1};

  if (!r.is_normal() || !rec.is_strongly_linear(r)) return {};
  std::vector<const Atom*> atoms{&head};
  for (std::size_t idx : rec.rbody(r)) atoms.push_back(&r.pos_body[idx]);
  for (const Atom* at : atoms) {
    bool all_simple = std::all_of(at->args.begin(), at->args.end(), [](const Term& t) { return t.is_simple(); });
    bool all_complex = std::all_of(at->args.begin(), at->args.end(), [](const Term& t) { return t.is_compound(); });
    if (!all_simple && !all_complex) return {};
  }
  std::set<std::string> head_vars, rbody_vars;
  collect_variables(head, head_vars);
  for (std::size_t k = 1; k < atoms.size(); ++k) collect_variables(*atoms[k], rbody_vars);
  if (head_vars != rbody_vars) return {};
  for (std::size_t j = 1; j <= head.arity(); ++j)
    if (a.count({head.predicate, head.arity(), j})) return {true, 2};
  return {};
}

inline LimitedTerm term_limited(const Program& p, const Rule& r, std::size_t i, const ArgumentSet& a) {
  return term_limited(r, i, a, RecursionInfo(p));
}

/// Precomputed data shared by every application of Ψ_k.
class SafetyContext {
 public:
  SafetyContext(const Program& p, std::vector<ActivationGraph> graphs)
      : program_(&p), rec_(p), index_(p), graphs_(std::move(graphs)), exempt_(p.rules.size(), false) {
    for (const auto& g : graphs_) {
      auto dep = depends_on_cycle(g.graph);
      for (std::size_t r = 0; r < dep.size(); ++r)
        if (!dep[r]) exempt_[r] = true;
    }
  }

  SafetyContext(const Program& p, std::size_t k, const ActivationOptions& opts = {})
      : SafetyContext(p, activation_graphs(p, k, opts)) {}

  const std::vector<ActivationGraph>& graphs() const { return graphs_; }
  const RecursionInfo& recursion() const { return rec_; }
  const ArgumentIndex& index() const { return index_; }
  bool exempt(std::size_t rule) const { return exempt_[rule]; }

  /// Ψ_k(A) together with the reason each member was admitted.
  std::map<ArgumentId, Justification> evaluate(const ArgumentSet& a) const {
    std::map<ArgumentId, Justification> out;
    for (const auto& arg : index_.all()) {
      bool ok = true;
      Justification why = Justification::NoCycleDependence;
      for (std::size_t r = 0; r < program_->rules.size() && ok; ++r) {
        const Rule& rule = program_->rules[r];
        for (const auto& h : rule.head) {
          if (h.predicate != arg.predicate || h.arity() != arg.arity) continue;
          if (exempt_[r]) continue;
          Rule single = rule;
          single.head = {h};
          auto lt = term_limited(single, arg.index - 1, a, rec_);
          if (!lt) {
            ok = false;
            break;
          }
          if (lt.condition == 2) why = Justification::StronglyLinear;
          else if (why == Justification::NoCycleDependence) why = Justification::CoveredVariables;
        }
      }
      if (ok) out.emplace(arg, why);
    }
    return out;
  }

  ArgumentSet psi(const ArgumentSet& a) const {
    ArgumentSet out;
    for (const auto& [arg, why] : evaluate(a)) out.insert(arg);
    return out;
  }

  /// Inflationary variant A ∪ Ψ_k(A).
  ArgumentSet psi_hat(const ArgumentSet& a) const {
    ArgumentSet out = psi(a);
    out.insert(a.begin(), a.end());
    return out;
  }

 private:
  const Program* program_;
  RecursionInfo rec_;
  ArgumentIndex index_;
  std::vector<ActivationGraph> graphs_;
  std::vector<bool> exempt_;
};

/// Ψ with k = 1.
inline ArgumentSet psi(const Program& p, const ArgumentSet& a) { return SafetyContext(p, 1).psi(a); }

inline ArgumentSet psi_k(const Program& p, const ArgumentSet& a, std::size_t k, const ActivationOptions& opts = {}) {
  return SafetyContext(p, k, opts).psi(a);
}

struct SafetyReport {
  std::size_t k = 1;
  ArgumentSet start;
  /// start, Ψ_k(start), Ψ_k²(start), ... up to the fixpoint.
  std::vector<ArgumentSet> chain;
  ArgumentSet safe;
  std::map<ArgumentId, Justification> justification;
  bool chain_monotone = true;
  bool all_safe = false;
  std::vector<ActivationGraph> graphs;
};

/// safe_k(P) = Ψ_k^∞(start); `start` defaults to GA(P).
inline SafetyReport safe_args(const Program& p, std::size_t k, const ActivationOptions& opts = {},
                              std::optional<ArgumentSet> start = std::nullopt) {
  SafetyContext ctx(p, k, opts);
  SafetyReport rep;
  rep.k = k;
  rep.start = start ? *start : gamma_acyclic_args(p);
  rep.chain.push_back(rep.start);
  ArgumentSet cur = rep.start;
  const std::size_t limit = ctx.index().size() + 2;
  for (std::size_t step = 0; step <= limit; ++step) {
    auto eval = ctx.evaluate(cur);
    ArgumentSet next;
    for (const auto& [arg, why] : eval) next.insert(arg);
    rep.justification = std::move(eval);
    if (next == cur) break;
    if (!std::includes(next.begin(), next.end(), cur.begin(), cur.end())) rep.chain_monotone = false;
    rep.chain.push_back(next);
    cur = std::move(next);
  }
  rep.safe = cur;
  rep.all_safe = cur.size() == ctx.index().size();
  rep.graphs = ctx.graphs();
  return rep;
}

}  // namespace termlint
