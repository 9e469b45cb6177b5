#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "termlint/graph.hpp"
#include "termlint/program.hpp"

namespace termlint {

/// Argument graph G(P): edge q[j] -> p[i] when a positive body term u_j and
/// the head term t_i share a variable.
struct ArgumentGraph {
  ArgumentIndex index;
  Digraph graph;

  std::vector<std::pair<ArgumentId, ArgumentId>> edges() const {
    std::vector<std::pair<ArgumentId, ArgumentId>> out;
    for (auto [a, b] : graph.edges()) out.emplace_back(index.at(a), index.at(b));
    std::sort(out.begin(), out.end());
    return out;
  }
};

inline ArgumentGraph argument_graph(const Program& p) {
  ArgumentGraph g{ArgumentIndex(p), Digraph()};
  g.graph = Digraph(g.index.size());
  for (const auto& r : p.rules)
    for (const auto& h : r.head)
      for (std::size_t i = 0; i < h.arity(); ++i) {
        std::set<std::string> hv;
        collect_variables(h.args[i], hv);
        if (hv.empty()) continue;
        for (const auto& b : r.pos_body)
          for (std::size_t j = 0; j < b.arity(); ++j) {
            std::set<std::string> bv;
            collect_variables(b.args[j], bv);
            bool shared = std::any_of(bv.begin(), bv.end(), [&](const auto& v) { return hv.count(v) > 0; });
            if (shared) g.graph.add_edge(g.index.of(b, j), g.index.of(h, i));
          }
      }
  return g;
}

/// Total rank assignment over args(P).
using Ranking = std::map<ArgumentId, std::int64_t>;

namespace detail {

inline constexpr std::int64_t kUnbounded = std::numeric_limits<std::int64_t>::max() / 4;

inline std::int64_t saturating_add(std::int64_t a, std::int64_t b) {
  if (a >= kUnbounded || b >= kUnbounded) return kUnbounded;
  return a + b;
}

/// One application of Ω over a dense rank vector; kUnbounded acts as +inf.
inline std::vector<std::int64_t> omega(const Program& p, const ArgumentIndex& idx,
                                       const std::vector<std::int64_t>& phi) {
  std::vector<std::int64_t> out(idx.size(), 0);
  for (const auto& r : p.rules)
    for (const auto& h : r.head)
      for (std::size_t i = 0; i < h.arity(); ++i) {
        std::vector<std::string> vars;
        collect_variables(h.args[i], vars);
        std::size_t target = idx.of(h, i);
        for (const auto& x : vars) {
          auto dx_head = static_cast<std::int64_t>(*variable_depth(x, h.args[i]));
          std::optional<std::int64_t> best;
          for (const auto& b : r.pos_body)
            for (std::size_t j = 0; j < b.arity(); ++j) {
              auto dx_body = variable_depth(x, b.args[j]);
              if (!dx_body) continue;
              std::int64_t v = saturating_add(dx_head - static_cast<std::int64_t>(*dx_body),
                                              phi[idx.of(b, j)]);
              best = best ? std::min(*best, v) : v;
            }
          // A head variable missing from the positive body is unconstrained.
          std::int64_t d = best.value_or(kUnbounded);
          out[target] = std::max(out[target], d);
        }
      }
  return out;
}

}  // namespace detail

/// Ω(φ) for a total φ over args(P).
inline Ranking omega_step(const Program& p, const Ranking& phi) {
  ArgumentIndex idx(p);
  std::vector<std::int64_t> dense(idx.size(), 0);
  for (std::size_t i = 0; i < idx.size(); ++i) {
    auto it = phi.find(idx.at(i));
    dense[i] = it == phi.end() ? 0 : it->second;
  }
  auto next = detail::omega(p, idx, dense);
  Ranking out;
  for (std::size_t i = 0; i < idx.size(); ++i) out[idx.at(i)] = next[i];
  return out;
}

/// Largest depth of a term in a rule head.
inline std::size_t max_head_depth(const Program& p) {
  std::size_t d = 0;
  for (const auto& r : p.rules)
    for (const auto& h : r.head) d = std::max(d, h.depth());
  return d;
}

struct ArResult {
  ArgumentSet restricted;
  /// φ_min, defined exactly on the restricted arguments.
  Ranking phi_min;
  /// Index k of the first iterate with Ω(φ_k) = φ_k.
  std::size_t iterations = 0;
  /// φ_0, φ_1, ..., φ_{k+1}; unrestricted values appear as std::nullopt once
  /// they exceed the threshold.
  std::vector<std::map<ArgumentId, std::optional<std::int64_t>>> trace;
  std::int64_t threshold = 0;
  bool all_restricted = false;
};

/// Argument-restricted arguments AR(P). Iterates Ω from the zero ranking;
/// a value above M = |args(P)| * d_max can only keep growing and is treated
/// as unbounded from then on, which keeps the iteration finite.
inline ArResult compute_ar(const Program& p) {
  ArgumentIndex idx(p);
  const std::size_t n = idx.size();
  ArResult res;
  res.threshold = static_cast<std::int64_t>(n * max_head_depth(p));

  auto snapshot = [&](const std::vector<std::int64_t>& phi) {
    std::map<ArgumentId, std::optional<std::int64_t>> m;
    for (std::size_t i = 0; i < n; ++i)
      m[idx.at(i)] = phi[i] >= detail::kUnbounded ? std::nullopt : std::optional<std::int64_t>(phi[i]);
    return m;
  };

  std::vector<std::int64_t> phi(n, 0);
  res.trace.push_back(snapshot(phi));
  const std::size_t cap = std::max<std::size_t>(2 * n * n + n, n * (static_cast<std::size_t>(res.threshold) + 2)) + 1;
  for (std::size_t k = 0; k < cap; ++k) {
    auto next = detail::omega(p, idx, phi);
    for (auto& v : next)
      if (v > res.threshold) v = detail::kUnbounded;
    res.trace.push_back(snapshot(next));
    if (next == phi) {
      res.iterations = k;
      break;
    }
    phi = std::move(next);
    res.iterations = k + 1;
  }

  for (std::size_t i = 0; i < n; ++i)
    if (phi[i] < detail::kUnbounded) {
      res.restricted.insert(idx.at(i));
      res.phi_min[idx.at(i)] = phi[i];
    }
  res.all_restricted = res.restricted.size() == n;
  return res;
}

/// Checks the ranking inequality for every head variable occurrence at a
/// ranked argument: some positive body occurrence at a ranked argument must
/// satisfy phi(p[i]) - phi(q[j]) >= d(X,t_i) - d(X,u_j).
inline bool is_argument_ranking(const Program& p, const Ranking& phi) {
  for (const auto& r : p.rules)
    for (const auto& h : r.head)
      for (std::size_t i = 0; i < h.arity(); ++i) {
        auto hp = phi.find({h.predicate, h.arity(), i + 1});
        if (hp == phi.end()) continue;
        std::vector<std::string> vars;
        collect_variables(h.args[i], vars);
        for (const auto& x : vars) {
          auto dh = static_cast<std::int64_t>(*variable_depth(x, h.args[i]));
          bool ok = false;
          for (const auto& b : r.pos_body)
            for (std::size_t j = 0; j < b.arity() && !ok; ++j) {
              auto db = variable_depth(x, b.args[j]);
              auto bp = phi.find({b.predicate, b.arity(), j + 1});
              if (!db || bp == phi.end()) continue;
              ok = hp->second - bp->second >= dh - static_cast<std::int64_t>(*db);
            }
          if (!ok) return false;
        }
      }
  return true;
}

}  // namespace termlint
