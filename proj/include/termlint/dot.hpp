#pragma once

#include <algorithm>
#include <sstream>
#include <string>
#include <tuple>
#include <vector>

#include "termlint/gamma.hpp"
#include "termlint/ranking.hpp"
#include "termlint/safety.hpp"

namespace termlint {

namespace detail {

inline std::string dot_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

inline void dot_nodes(std::ostringstream& os, const ArgumentIndex& idx) {
  for (const auto& a : idx.all()) os << "  " << dot_quote(to_string(a)) << ";\n";
}

}  // namespace detail

inline std::string to_dot(const ArgumentGraph& g, const std::string& name = "argument") {
  std::ostringstream os;
  os << "digraph " << detail::dot_quote(name) << " {\n";
  detail::dot_nodes(os, g.index);
  for (auto [a, b] : g.graph.edges())
    os << "  " << detail::dot_quote(to_string(g.index.at(a))) << " -> " << detail::dot_quote(to_string(g.index.at(b)))
       << ";\n";
  os << "}\n";
  return os.str();
}

inline std::string to_dot(const LabeledGraph& g, const std::string& name = "labeled") {
  std::vector<std::tuple<std::size_t, std::size_t, Label>> edges;
  for (const auto& e : g.edges) edges.emplace_back(e.from, e.to, e.label);
  std::sort(edges.begin(), edges.end());
  std::ostringstream os;
  os << "digraph " << detail::dot_quote(name) << " {\n";
  detail::dot_nodes(os, g.index);
  for (const auto& [a, b, l] : edges)
    os << "  " << detail::dot_quote(to_string(g.index.at(a))) << " -> " << detail::dot_quote(to_string(g.index.at(b)))
       << " [label=" << detail::dot_quote(to_string(l)) << "];\n";
  os << "}\n";
  return os.str();
}

inline std::string to_dot(const ReducedGraph& g, const std::string& name = "reduced") {
  std::ostringstream os;
  os << "digraph " << detail::dot_quote(name) << " {\n";
  detail::dot_nodes(os, g.index());
  for (auto [a, b] : g.graph().edges())
    os << "  " << detail::dot_quote(to_string(g.index().at(a))) << " -> "
       << detail::dot_quote(to_string(g.index().at(b))) << ";\n";
  os << "}\n";
  return os.str();
}

inline std::string to_dot(const ActivationGraph& g, const std::string& name = "") {
  std::ostringstream os;
  os << "digraph " << detail::dot_quote(name.empty() ? "activation_" + std::to_string(g.k) : name) << " {\n";
  for (const auto& r : g.rules) os << "  " << detail::dot_quote(r) << ";\n";
  for (auto [a, b] : g.graph.edges())
    os << "  " << detail::dot_quote(g.rules[a]) << " -> " << detail::dot_quote(g.rules[b]) << ";\n";
  os << "}\n";
  return os.str();
}

}  // namespace termlint
