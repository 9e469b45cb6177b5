#pragma once

#include <algorithm>
#include <compare>
#include <cstddef>
#include <deque>
#include <map>
#include <optional>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "termlint/graph.hpp"
#include "termlint/program.hpp"
#include "termlint/ranking.hpp"

namespace termlint {

/// Edge label of the labeled argument graph: ε, a function symbol f
/// (term construction) or its bar f̄ (term destruction).
struct Label {
  enum class Kind { Epsilon, Pos, Neg };
  Kind kind = Kind::Epsilon;
  FunctionSymbol symbol{"", 0};

  static Label epsilon() { return {}; }
  static Label pos(FunctionSymbol f) { return {Kind::Pos, std::move(f)}; }
  static Label neg(FunctionSymbol f) { return {Kind::Neg, std::move(f)}; }

  bool is_epsilon() const { return kind == Kind::Epsilon; }
  bool is_pos() const { return kind == Kind::Pos; }
  bool is_neg() const { return kind == Kind::Neg; }

  friend auto operator<=>(const Label&, const Label&) = default;
  friend bool operator==(const Label&, const Label&) = default;
};

/// "e" for ε, "f" for f, "~f" for f̄.
inline std::string to_string(const Label& l) {
  switch (l.kind) {
    case Label::Kind::Epsilon: return "e";
    case Label::Kind::Pos: return l.symbol.name;
    case Label::Kind::Neg: return "~" + l.symbol.name;
  }
  return "?";
}

/// Sequence of non-ε labels.
using LabelString = std::vector<Label>;

inline std::string to_string(const LabelString& w) {
  std::string s;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i) s += ' ';
    s += to_string(w[i]);
  }
  return s;
}

/// Concatenation helper that drops ε.
inline LabelString spell(const std::vector<Label>& labels) {
  LabelString out;
  for (const auto& l : labels)
    if (!l.is_epsilon()) out.push_back(l);
  return out;
}

/// λ̂: repeatedly cancels adjacent pairs f f̄.
inline LabelString reduce_label_string(const LabelString& w) {
  LabelString stack;
  for (const auto& l : w) {
    if (l.is_epsilon()) continue;
    if (l.is_neg() && !stack.empty() && stack.back().is_pos() && stack.back().symbol == l.symbol) {
      stack.pop_back();
    } else {
      stack.push_back(l);
    }
  }
  return stack;
}

enum class PathClass { Increasing, Flat, Failing };

inline const char* to_string(PathClass c) {
  switch (c) {
    case PathClass::Increasing: return "increasing";
    case PathClass::Flat: return "flat";
    case PathClass::Failing: return "failing";
  }
  return "?";
}

inline PathClass classify_string(const LabelString& w) {
  LabelString r = reduce_label_string(w);
  if (r.empty()) return PathClass::Flat;
  bool all_pos = std::all_of(r.begin(), r.end(), [](const Label& l) { return l.is_pos(); });
  return all_pos ? PathClass::Increasing : PathClass::Failing;
}

/// Pushdown recognizer for the increasing-path language. Besides the three
/// transitions (q0,f,Z0)->(qF,F Z0), (qF,f,G)->(qF,F G), (qF,f̄,F)->(qF,ε)
/// it also pushes from (qF, Z0) so that a balanced prefix may be followed by
/// a fresh growth symbol (e.g. g ḡ f).
inline bool pda_accepts(const LabelString& w) {
  enum class State { Start, Final };
  State state = State::Start;
  std::vector<FunctionSymbol> stack;  // F_i symbols above the implicit Z0
  for (const auto& l : w) {
    if (l.is_epsilon()) continue;
    if (state == State::Start) {
      if (!l.is_pos()) return false;
      state = State::Final;
      stack.push_back(l.symbol);
      continue;
    }
    if (l.is_pos()) {
      stack.push_back(l.symbol);
    } else if (!stack.empty() && stack.back() == l.symbol) {
      stack.pop_back();
    } else {
      return false;
    }
  }
  return state == State::Final && !stack.empty();
}

// ---------------------------------------------------------------------------
// Labeled argument graph and propagation graph

class NotFlatError : public Error {
 public:
  explicit NotFlatError(std::vector<FlatnessIssue> issues)
      : Error(summary(issues)), issues_(std::move(issues)) {}
  const std::vector<FlatnessIssue>& issues() const { return issues_; }

 private:
  static std::string summary(const std::vector<FlatnessIssue>& is) {
    std::string s = "program is not flat";
    for (const auto& i : is) s += "\n  rule " + i.rule_id + ": " + i.description;
    return s;
  }
  std::vector<FlatnessIssue> issues_;
};

struct LabeledEdge {
  std::size_t from = 0;
  std::size_t to = 0;
  Label label;
  /// First rule that induced the edge.
  std::string rule_id;
};

struct LabeledGraph {
  ArgumentIndex index;
  std::vector<LabeledEdge> edges;

  Digraph unlabeled() const {
    Digraph g(index.size());
    for (const auto& e : edges) g.add_edge(e.from, e.to);
    return g;
  }

  bool has_edge(const ArgumentId& from, const ArgumentId& to, const Label& l) const {
    if (!index.contains(from) || !index.contains(to)) return false;
    std::size_t a = index.of(from), b = index.of(to);
    return std::any_of(edges.begin(), edges.end(),
                       [&](const LabeledEdge& e) { return e.from == a && e.to == b && e.label == l; });
  }

  std::vector<std::tuple<ArgumentId, ArgumentId, Label>> edge_list() const {
    std::vector<std::tuple<ArgumentId, ArgumentId, Label>> out;
    for (const auto& e : edges) out.emplace_back(index.at(e.from), index.at(e.to), e.label);
    std::sort(out.begin(), out.end());
    return out;
  }
};

/// Labeled argument graph of a flat program; throws NotFlatError otherwise.
inline LabeledGraph labeled_argument_graph(const Program& p) {
  if (auto rep = is_flat(p); !rep) throw NotFlatError(rep.issues);
  LabeledGraph g{ArgumentIndex(p), {}};
  std::set<std::tuple<std::size_t, std::size_t, Label>> seen;
  auto add = [&](std::size_t from, std::size_t to, Label l, const std::string& rule) {
    if (seen.emplace(from, to, l).second) g.edges.push_back({from, to, std::move(l), rule});
  };
  for (const auto& r : p.rules)
    for (const auto& h : r.head)
      for (std::size_t i = 0; i < h.arity(); ++i) {
        const Term& v = h.args[i];
        std::set<std::string> hv;
        collect_variables(v, hv);
        if (hv.empty()) continue;
        for (const auto& b : r.pos_body)
          for (std::size_t j = 0; j < b.arity(); ++j) {
            const Term& u = b.args[j];
            std::set<std::string> bv;
            collect_variables(u, bv);
            bool shared = std::any_of(bv.begin(), bv.end(), [&](const auto& x) { return hv.count(x) > 0; });
            if (!shared) continue;
            std::size_t from = g.index.of(b, j), to = g.index.of(h, i);
            if (u.is_variable() && v.is_variable()) add(from, to, Label::epsilon(), r.id);
            else if (u.is_variable()) add(from, to, Label::pos(v.symbol()), r.id);
            else if (v.is_variable()) add(from, to, Label::neg(u.symbol()), r.id);
          }
      }
  return g;
}

/// Δ(P, S): drops every edge whose target lies in `limited`.
inline LabeledGraph propagation_graph(const LabeledGraph& g, const ArgumentSet& limited) {
  LabeledGraph out{g.index, {}};
  for (const auto& e : g.edges)
    if (!limited.count(g.index.at(e.to))) out.edges.push_back(e);
  return out;
}

inline LabeledGraph propagation_graph(const Program& p, const ArgumentSet& limited) {
  return propagation_graph(labeled_argument_graph(p), limited);
}

// ---------------------------------------------------------------------------
// Reduction Δ̂

/// Closure of path facts path(i, j, α) with |α| <= 1, computed as a
/// semi-naive least fixpoint. Each fact remembers how it was first derived.
class ReducedGraph {
 public:
  struct Fact {
    std::size_t from;
    std::size_t to;
    Label label;
    friend auto operator<=>(const Fact&, const Fact&) = default;
  };

  explicit ReducedGraph(const LabeledGraph& delta)
      : index_(delta.index), graph_(delta.index.size()), out_(delta.index.size()), in_(delta.index.size()) {
    std::deque<Fact> work;
    for (const auto& e : delta.edges) {
      Fact f{e.from, e.to, e.label};
      if (parent_.emplace(f, Origin{true, e.label, 0, {}, {}}).second) {
        record(f);
        work.push_back(f);
      }
    }
    while (!work.empty()) {
      Fact f = work.front();
      work.pop_front();
      // f as left part: f.from -> f.to -> x
      for (std::size_t n = 0; n < out_[f.to].size(); ++n) {
        auto [x, a2] = out_[f.to][n];
        derive(f.from, x, f.label, a2, f.to, work);
      }
      // f as right part: y -> f.from -> f.to
      for (std::size_t n = 0; n < in_[f.from].size(); ++n) {
        auto [y, a1] = in_[f.from][n];
        derive(y, f.to, a1, f.label, f.from, work);
      }
    }
    for (const auto& [fact, origin] : parent_)
      if (fact.label.is_pos()) graph_.add_edge(fact.from, fact.to);
  }

  const ArgumentIndex& index() const { return index_; }
  const Digraph& graph() const { return graph_; }

  bool has_fact(std::size_t from, std::size_t to, const Label& l) const {
    return parent_.count({from, to, l}) > 0;
  }
  std::vector<Fact> facts() const {
    std::vector<Fact> out;
    for (const auto& [f, o] : parent_) out.push_back(f);
    return out;
  }

  std::vector<std::pair<ArgumentId, ArgumentId>> edges() const {
    std::vector<std::pair<ArgumentId, ArgumentId>> out;
    for (auto [a, b] : graph_.edges()) out.emplace_back(index_.at(a), index_.at(b));
    std::sort(out.begin(), out.end());
    return out;
  }

  /// Δ-edges (from, to, label) of a path witnessing the fact.
  std::vector<LabeledEdge> expand(const Fact& f) const {
    std::vector<LabeledEdge> out;
    expand_into(f, out);
    return out;
  }

  /// Witness for a Δ̂ edge: the Δ path of its first positive fact.
  std::optional<std::vector<LabeledEdge>> expand_edge(std::size_t from, std::size_t to) const {
    auto it = parent_.lower_bound({from, to, Label{Label::Kind::Pos, {"", 0}}});
    for (; it != parent_.end() && it->first.from == from && it->first.to == to; ++it)
      if (it->first.label.is_pos()) return expand(it->first);
    return std::nullopt;
  }

 private:
  struct Origin {
    bool is_edge;
    Label edge_label;
    std::size_t mid;
    Label left;
    Label right;
  };

  static std::optional<Label> combine(const Label& a, const Label& b) {
    if (a.is_epsilon()) return b;
    if (b.is_epsilon()) return a;
    if (a.is_pos() && b.is_neg() && a.symbol == b.symbol) return Label::epsilon();
    return std::nullopt;
  }

  void record(const Fact& f) {
    out_[f.from].emplace_back(f.to, f.label);
    in_[f.to].emplace_back(f.from, f.label);
  }

  void derive(std::size_t from, std::size_t to, const Label& a1, const Label& a2, std::size_t mid,
              std::deque<Fact>& work) {
    auto l = combine(a1, a2);
    if (!l) return;
    Fact f{from, to, *l};
    if (parent_.emplace(f, Origin{false, {}, mid, a1, a2}).second) {
      record(f);
      work.push_back(f);
    }
  }

  void expand_into(const Fact& f, std::vector<LabeledEdge>& out) const {
    const Origin& o = parent_.at(f);
    if (o.is_edge) {
      out.push_back({f.from, f.to, o.edge_label, {}});
      return;
    }
    expand_into({f.from, o.mid, o.left}, out);
    expand_into({o.mid, f.to, o.right}, out);
  }

  ArgumentIndex index_;
  Digraph graph_;
  std::vector<std::vector<std::pair<std::size_t, Label>>> out_;
  std::vector<std::vector<std::pair<std::size_t, Label>>> in_;
  std::map<Fact, Origin> parent_;
};

inline ReducedGraph reduced_graph(const LabeledGraph& delta) { return ReducedGraph(delta); }

// ---------------------------------------------------------------------------
// Γ-acyclic arguments

struct IncreasingCycle {
  /// Closed walk start, ..., start in Δ.
  std::vector<ArgumentId> nodes;
  LabelString labels;
  LabelString reduced;
};

struct GammaResult {
  ArgumentSet limited_start;
  ArgumentSet ga;
  bool acyclic = false;
  std::optional<IncreasingCycle> witness;
  LabeledGraph labeled;
  LabeledGraph propagation;
  ReducedGraph reduced;
};

/// GA(P) with respect to the limited set S (AR(P) when omitted). Requires a
/// flat program.
inline GammaResult analyze_gamma(const Program& p, std::optional<ArgumentSet> limited = std::nullopt) {
  ArgumentSet s = limited ? *limited : compute_ar(p).restricted;
  LabeledGraph labeled = labeled_argument_graph(p);
  LabeledGraph delta = propagation_graph(labeled, s);
  ReducedGraph reduced(delta);
  auto on_cycle = nodes_on_cycles(reduced.graph());
  auto dependent = reachable_from(delta.unlabeled(), on_cycle);

  GammaResult res{s, {}, false, std::nullopt, std::move(labeled), std::move(delta), std::move(reduced)};
  const ArgumentIndex& idx = res.labeled.index;
  for (std::size_t v = 0; v < idx.size(); ++v)
    if (!dependent[v]) res.ga.insert(idx.at(v));
  res.acyclic = res.ga.size() == idx.size();

  for (std::size_t v = 0; v < idx.size() && !res.witness; ++v) {
    if (!on_cycle[v]) continue;
    auto cycle = shortest_cycle_through(res.reduced.graph(), v);
    if (!cycle) continue;
    IncreasingCycle w;
    w.nodes.push_back(idx.at(v));
    for (std::size_t k = 0; k + 1 < cycle->size(); ++k) {
      auto path = res.reduced.expand_edge((*cycle)[k], (*cycle)[k + 1]);
      for (const auto& e : *path) {
        w.nodes.push_back(idx.at(e.to));
        if (!e.label.is_epsilon()) w.labels.push_back(e.label);
      }
    }
    w.reduced = reduce_label_string(w.labels);
    res.witness = std::move(w);
  }
  return res;
}

inline ArgumentSet gamma_acyclic_args(const Program& p) { return analyze_gamma(p).ga; }

}  // namespace termlint
