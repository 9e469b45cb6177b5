#pragma once

#include <algorithm>
#include <cstddef>
#include <deque>
#include <optional>
#include <utility>
#include <vector>

namespace termlint {

/// Small dense directed graph over node indices [0, n).
class Digraph {
 public:
  Digraph() = default;
  explicit Digraph(std::size_t n) : succ_(n) {}

  std::size_t size() const { return succ_.size(); }

  /// Adds (from, to) unless already present.
  void add_edge(std::size_t from, std::size_t to) {
    auto& s = succ_[from];
    if (std::find(s.begin(), s.end(), to) == s.end()) s.push_back(to);
  }

  bool has_edge(std::size_t from, std::size_t to) const {
    const auto& s = succ_[from];
    return std::find(s.begin(), s.end(), to) != s.end();
  }

  const std::vector<std::size_t>& successors(std::size_t v) const { return succ_[v]; }

  std::size_t edge_count() const {
    std::size_t n = 0;
    for (const auto& s : succ_) n += s.size();
    return n;
  }

  std::vector<std::pair<std::size_t, std::size_t>> edges() const {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (std::size_t v = 0; v < succ_.size(); ++v)
      for (std::size_t w : succ_[v]) out.emplace_back(v, w);
    std::sort(out.begin(), out.end());
    return out;
  }

 private:
  std::vector<std::vector<std::size_t>> succ_;
};

/// Strongly connected components (iterative Tarjan). Returns the component
/// id of every node; ids are assigned in reverse topological order.
inline std::vector<std::size_t> strongly_connected_components(const Digraph& g) {
  const std::size_t n = g.size();
  constexpr std::size_t kUnvisited = static_cast<std::size_t>(-1);
  std::vector<std::size_t> index(n, kUnvisited), low(n, 0), comp(n, kUnvisited);
  std::vector<bool> on_stack(n, false);
  std::vector<std::size_t> stack;
  std::size_t next_index = 0, next_comp = 0;

  struct Frame {
    std::size_t v;
    std::size_t child;
  };
  for (std::size_t root = 0; root < n; ++root) {
    if (index[root] != kUnvisited) continue;
    std::vector<Frame> call{{root, 0}};
    index[root] = low[root] = next_index++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      const auto& succ = g.successors(f.v);
      if (f.child < succ.size()) {
        std::size_t w = succ[f.child++];
        if (index[w] == kUnvisited) {
          index[w] = low[w] = next_index++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      std::size_t v = f.v;
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
      if (low[v] == index[v]) {
        std::size_t w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = next_comp;
        } while (w != v);
        ++next_comp;
      }
    }
  }
  return comp;
}

/// Nodes lying on at least one directed cycle (self-loops included).
inline std::vector<bool> nodes_on_cycles(const Digraph& g) {
  auto comp = strongly_connected_components(g);
  std::vector<std::size_t> comp_size;
  for (std::size_t c : comp) {
    if (c >= comp_size.size()) comp_size.resize(c + 1, 0);
    ++comp_size[c];
  }
  std::vector<bool> out(g.size(), false);
  for (std::size_t v = 0; v < g.size(); ++v)
    out[v] = comp_size[comp[v]] > 1 || g.has_edge(v, v);
  return out;
}

/// Nodes reachable in zero or more steps from any marked source.
inline std::vector<bool> reachable_from(const Digraph& g, const std::vector<bool>& sources) {
  std::vector<bool> seen(g.size(), false);
  std::deque<std::size_t> queue;
  for (std::size_t v = 0; v < g.size(); ++v)
    if (sources[v]) {
      seen[v] = true;
      queue.push_back(v);
    }
  while (!queue.empty()) {
    std::size_t v = queue.front();
    queue.pop_front();
    for (std::size_t w : g.successors(v))
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
  }
  return seen;
}

/// Nodes that depend on a cycle: reachable from some node lying on a cycle.
inline std::vector<bool> depends_on_cycle(const Digraph& g) {
  return reachable_from(g, nodes_on_cycles(g));
}

/// Shortest cycle through `v` as a node sequence v, ..., v (first == last), if any.
inline std::optional<std::vector<std::size_t>> shortest_cycle_through(const Digraph& g, std::size_t v) {
  constexpr std::size_t kNone = static_cast<std::size_t>(-1);
  std::vector<std::size_t> parent(g.size(), kNone);
  std::vector<bool> seen(g.size(), false);
  std::deque<std::size_t> queue;
  for (std::size_t w : g.successors(v)) {
    if (w == v) return std::vector<std::size_t>{v, v};
    if (!seen[w]) {
      seen[w] = true;
      parent[w] = v;
      queue.push_back(w);
    }
  }
  while (!queue.empty()) {
    std::size_t u = queue.front();
    queue.pop_front();
    for (std::size_t w : g.successors(u)) {
      if (w == v) {
        std::vector<std::size_t> path{v};
        for (std::size_t x = u; x != v; x = parent[x]) path.push_back(x);
        path.push_back(v);
        std::reverse(path.begin() + 1, path.end() - 1);
        return path;
      }
      if (!seen[w]) {
        seen[w] = true;
        parent[w] = u;
        queue.push_back(w);
      }
    }
  }
  return std::nullopt;
}

}  // namespace termlint
