#pragma once

#include <compare>
#include <cstddef>
#include <functional>
#include <memory>
#include <optional>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace termlint {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Function symbols are identified by (name, arity); arity is at least one.
struct FunctionSymbol {
  std::string name;
  std::size_t arity = 1;

  friend auto operator<=>(const FunctionSymbol&, const FunctionSymbol&) = default;
  friend bool operator==(const FunctionSymbol&, const FunctionSymbol&) = default;
};

inline std::string to_string(const FunctionSymbol& f) {
  return f.name + "/" + std::to_string(f.arity);
}

/// Immutable first-order term with shared substructure.
///
/// Copies are cheap (one shared pointer); equality and ordering are
/// structural. Repeated substitution along long unifier chains reuses
/// untouched subterms instead of copying them.
class Term {
 public:
  enum class Kind { Variable, Constant, Compound };

  static Term variable(std::string name) { return Term(Kind::Variable, std::move(name), {}); }
  static Term constant(std::string name) { return Term(Kind::Constant, std::move(name), {}); }
  static Term compound(std::string functor, std::vector<Term> args) {
    if (args.empty()) throw Error("compound term '" + functor + "' needs at least one argument");
    return Term(Kind::Compound, std::move(functor), std::move(args));
  }

  Kind kind() const { return node_->kind; }
  bool is_variable() const { return node_->kind == Kind::Variable; }
  bool is_constant() const { return node_->kind == Kind::Constant; }
  bool is_compound() const { return node_->kind == Kind::Compound; }
  bool is_simple() const { return node_->kind != Kind::Compound; }
  bool is_ground() const { return node_->ground; }

  /// Variable name, constant name, or functor.
  const std::string& name() const { return node_->name; }
  std::span<const Term> args() const { return node_->args; }
  std::size_t arity() const { return node_->args.size(); }
  FunctionSymbol symbol() const { return {node_->name, node_->args.size()}; }

  /// Depth d(t): 0 for simple terms, 1 + max child depth otherwise.
  std::size_t depth() const { return node_->depth; }
  /// Number of nodes in the term tree.
  std::size_t size() const { return node_->size; }
  /// Length of the term written in plain functional notation.
  std::size_t text_size() const { return node_->text_size; }
  std::size_t hash() const { return node_->hash; }

  bool same_node(const Term& other) const { return node_ == other.node_; }

  friend bool operator==(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return true;
    if (a.node_->hash != b.node_->hash || a.node_->kind != b.node_->kind ||
        a.node_->name != b.node_->name || a.node_->args.size() != b.node_->args.size())
      return false;
    for (std::size_t i = 0; i < a.node_->args.size(); ++i)
      if (!(a.node_->args[i] == b.node_->args[i])) return false;
    return true;
  }

  friend std::strong_ordering operator<=>(const Term& a, const Term& b) {
    if (a.node_ == b.node_) return std::strong_ordering::equal;
    if (auto c = a.node_->kind <=> b.node_->kind; c != 0) return c;
    if (auto c = a.node_->name <=> b.node_->name; c != 0) return c;
    if (auto c = a.node_->args.size() <=> b.node_->args.size(); c != 0) return c;
    for (std::size_t i = 0; i < a.node_->args.size(); ++i)
      if (auto c = a.node_->args[i] <=> b.node_->args[i]; c != 0) return c;
    return std::strong_ordering::equal;
  }

 private:
  struct Node {
    Kind kind;
    std::string name;
    std::vector<Term> args;
    std::size_t depth = 0;
    std::size_t size = 1;
    std::size_t text_size = 0;
    std::size_t hash = 0;
    bool ground = true;
  };

  Term(Kind kind, std::string name, std::vector<Term> args) {
    auto node = std::make_shared<Node>();
    node->kind = kind;
    node->name = std::move(name);
    node->args = std::move(args);
    std::size_t h = std::hash<std::string>{}(node->name) * 31 + static_cast<std::size_t>(kind);
    node->ground = kind != Kind::Variable;
    node->text_size = node->name.size() + (node->args.empty() ? 0 : node->args.size() + 1);
    for (const Term& a : node->args) {
      node->text_size += a.text_size();
      node->depth = std::max(node->depth, a.depth() + 1);
      node->size += a.size();
      node->ground = node->ground && a.is_ground();
      h = h * 1000003u ^ a.hash();
    }
    node->hash = h;
    node_ = std::move(node);
  }

  std::shared_ptr<const Node> node_;
};

struct TermHash {
  std::size_t operator()(const Term& t) const { return t.hash(); }
};

/// d(x, t): depth of variable `x` inside `t`, or nullopt when `x` does not occur.
inline std::optional<std::size_t> variable_depth(const std::string& x, const Term& t) {
  if (t.is_variable()) return t.name() == x ? std::optional<std::size_t>(0) : std::nullopt;
  if (t.is_constant() || t.is_ground()) return std::nullopt;
  std::optional<std::size_t> best;
  for (const Term& a : t.args()) {
    if (auto d = variable_depth(x, a)) best = std::max(best.value_or(0), *d + 1);
  }
  return best;
}

inline std::size_t term_depth(const Term& t) { return t.depth(); }

inline bool occurs_in(const std::string& x, const Term& t) {
  if (t.is_variable()) return t.name() == x;
  for (const Term& a : t.args())
    if (occurs_in(x, a)) return true;
  return false;
}

/// Appends variables of `t` in left-to-right first-occurrence order, skipping duplicates.
inline void collect_variables(const Term& t, std::vector<std::string>& out) {
  if (t.is_variable()) {
    for (const auto& v : out)
      if (v == t.name()) return;
    out.push_back(t.name());
    return;
  }
  for (const Term& a : t.args()) collect_variables(a, out);
}

inline void collect_variables(const Term& t, std::set<std::string>& out) {
  if (t.is_variable()) {
    out.insert(t.name());
    return;
  }
  for (const Term& a : t.args()) collect_variables(a, out);
}

inline void collect_function_symbols(const Term& t, std::set<FunctionSymbol>& out) {
  if (!t.is_compound()) return;
  out.insert(t.symbol());
  for (const Term& a : t.args()) collect_function_symbols(a, out);
}

inline void collect_constants(const Term& t, std::set<std::string>& out) {
  if (t.is_constant()) out.insert(t.name());
  for (const Term& a : t.args()) collect_constants(a, out);
}

}  // namespace termlint
