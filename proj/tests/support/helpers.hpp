#pragma once

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "termlint/termlint.hpp"

namespace testing_support {

using namespace termlint;

inline std::string sample_path(const std::string& name) { return std::string(TERMLINT_SAMPLES_DIR) + "/" + name; }

inline std::string read_text(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Program sample(const std::string& name) { return parse_program(read_text(sample_path(name))); }

/// Parses "p[1]" into an ArgumentId, looking the arity up in `p`.
inline ArgumentId arg(const Program& p, const std::string& text) {
  auto open = text.find('[');
  std::string name = text.substr(0, open);
  std::size_t index = std::stoul(text.substr(open + 1));
  for (const auto& s : p.predicates())
    if (s.name == name) return {name, s.arity, index};
  return {name, 0, index};
}

inline ArgumentSet args(const Program& p, std::initializer_list<const char*> items) {
  ArgumentSet out;
  for (const char* t : items) out.insert(arg(p, t));
  return out;
}

inline ArgumentSet all_args(const Program& p) {
  auto v = p.arguments();
  return {v.begin(), v.end()};
}

inline std::string show(const ArgumentSet& s) {
  std::string out = "{";
  for (const auto& a : s) out += (out.size() > 1 ? ", " : "") + to_string(a);
  return out + "}";
}

inline LabelString labels(std::initializer_list<const char*> items) {
  LabelString out;
  for (std::string t : items) {
    if (t == "e") out.push_back(Label::epsilon());
    else if (t[0] == '~') out.push_back(Label::neg({t.substr(1), 1}));
    else out.push_back(Label::pos({t, 1}));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Random generators

/// Random standard, range-restricted programs over unary/binary predicates,
/// unary function symbols f, g and a binary h, constants a, b.
struct ProgramGenerator {
  std::mt19937 rng;
  std::size_t max_rules = 5;
  std::size_t max_body = 2;
  double complex_rate = 0.35;

  explicit ProgramGenerator(unsigned seed) : rng(seed) {}

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }
  bool coin(double p) { return std::bernoulli_distribution(p)(rng); }

  struct Pred {
    std::string name;
    std::size_t arity;
  };
  std::vector<Pred> derived{{"p", 1}, {"q", 2}, {"r", 1}, {"s", 2}};
  std::vector<Pred> base{{"b", 1}, {"e", 2}};

  Term simple_term(const std::vector<std::string>& vars) {
    if (!vars.empty() && coin(0.85)) return Term::variable(vars[pick(vars.size())]);
    return Term::constant(coin(0.5) ? "a" : "b");
  }

  Term term(const std::vector<std::string>& vars) {
    if (!coin(complex_rate)) return simple_term(vars);
    switch (pick(3)) {
      case 0: return Term::compound("f", {simple_term(vars)});
      case 1: return Term::compound("g", {simple_term(vars)});
      default: return Term::compound("h", {simple_term(vars), simple_term(vars)});
    }
  }

  Atom atom(const Pred& p, const std::vector<std::string>& vars) {
    std::vector<Term> a;
    for (std::size_t i = 0; i < p.arity; ++i) a.push_back(term(vars));
    return {p.name, a};
  }

  Program program() {
    static const std::vector<std::string> pool{"X", "Y", "Z"};
    Program p;
    std::size_t n = 1 + pick(max_rules);
    for (std::size_t k = 0; k < n; ++k) {
      Rule r;
      r.id = "r" + std::to_string(k + 1);
      std::size_t nb = 1 + pick(max_body);
      for (std::size_t j = 0; j < nb; ++j) {
        const Pred& pr = coin(0.6) ? derived[pick(derived.size())] : base[pick(base.size())];
        r.pos_body.push_back(atom(pr, pool));
      }
      std::set<std::string> bv;
      for (const auto& b : r.pos_body) collect_variables(b, bv);
      std::vector<std::string> body_vars(bv.begin(), bv.end());
      r.head.push_back(atom(derived[pick(derived.size())], body_vars));
      p.rules.push_back(std::move(r));
    }
    return p;
  }

  /// A flat version of a random program.
  Program flat_program() { return flatten_program(program()); }
};

/// Random ground facts over the base predicates of `p`.
inline std::vector<Atom> random_database(const Program& p, std::mt19937& rng, std::size_t max_facts = 20) {
  Classification cls = classify_predicates(p);
  std::vector<PredicateSymbol> base(cls.base.begin(), cls.base.end());
  std::vector<Atom> db;
  if (base.empty()) return db;
  std::vector<Term> pool{Term::constant("a"), Term::constant("b"), Term::constant("c"),
                         Term::compound("f", {Term::constant("a")})};
  std::uniform_int_distribution<std::size_t> count(0, max_facts);
  std::size_t n = count(rng);
  std::set<Atom> seen;
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = base[rng() % base.size()];
    std::vector<Term> a;
    for (std::size_t i = 0; i < s.arity; ++i) a.push_back(pool[rng() % pool.size()]);
    Atom at{s.name, a};
    if (seen.insert(at).second) db.push_back(at);
  }
  return db;
}

/// Random ground disjunctive program over 0-ary atoms: `derived` atoms may
/// head rules, `base` atoms only appear as facts or in bodies.
inline Program random_ground_disjunctive(std::mt19937& rng, std::size_t derived, std::size_t base) {
  auto pick = [&](std::size_t n) { return static_cast<std::size_t>(rng() % n); };
  auto d = [&](std::size_t i) { return Atom{"p" + std::to_string(i), {}}; };
  auto b = [&](std::size_t i) { return Atom{"e" + std::to_string(i), {}}; };
  auto any = [&]() { return pick(derived + base) < derived ? d(pick(derived)) : b(pick(base)); };
  Program p;
  std::size_t id = 0;
  for (std::size_t i = 0; i < base; ++i)
    if (rng() % 2) p.rules.push_back(Rule{"f" + std::to_string(++id), {b(i)}, {}, {}, 0});
  std::size_t n = 2 + pick(5);
  for (std::size_t k = 0; k < n; ++k) {
    Rule r;
    r.id = "r" + std::to_string(k + 1);
    std::size_t nh = 1 + pick(2);
    for (std::size_t j = 0; j < nh; ++j) {
      Atom h = d(pick(derived));
      if (std::find(r.head.begin(), r.head.end(), h) == r.head.end()) r.head.push_back(h);
    }
    for (std::size_t j = pick(3); j > 0; --j) r.pos_body.push_back(any());
    for (std::size_t j = pick(2); j > 0; --j) r.neg_body.push_back(any());
    p.rules.push_back(std::move(r));
  }
  return p;
}

// ---------------------------------------------------------------------------
// Independent oracles

/// Direct recognizer for the increasing-path grammar
///   S -> S1 f S2,  S1 -> f S1 ~f S1 | e,  S2 -> S1 S2 | f S2 | e
/// by dynamic programming over substrings (ε labels are ignored).
inline bool grammar_accepts(const LabelString& input) {
  LabelString w;
  for (const auto& l : input)
    if (!l.is_epsilon()) w.push_back(l);
  const std::size_t n = w.size();
  // d1[i][j]: w[i..j) derives S1.  d2[i][j]: w[i..j) derives S2.
  std::vector<std::vector<char>> d1(n + 1, std::vector<char>(n + 1, 0)), d2 = d1;
  for (std::size_t i = 0; i <= n; ++i) d1[i][i] = d2[i][i] = 1;
  for (std::size_t len = 1; len <= n; ++len)
    for (std::size_t i = 0; i + len <= n; ++i) {
      std::size_t j = i + len;
      // S1 -> f S1 ~f S1
      if (w[i].is_pos())
        for (std::size_t m = i + 1; m < j && !d1[i][j]; ++m)
          if (w[m].is_neg() && w[m].symbol == w[i].symbol && d1[i + 1][m])
            if (d1[m + 1][j]) d1[i][j] = 1;
    }
  for (std::size_t len = 1; len <= n; ++len)
    for (std::size_t i = 0; i + len <= n; ++i) {
      std::size_t j = i + len;
      char ok = 0;
      if (w[i].is_pos() && d2[i + 1][j]) ok = 1;
      for (std::size_t m = i + 1; m <= j && !ok; ++m)
        if (d1[i][m] && d2[m][j]) ok = 1;
      d2[i][j] = ok;
    }
  for (std::size_t m = 0; m < n; ++m)
    if (w[m].is_pos() && d1[0][m] && d2[m + 1][n]) return true;
  return false;
}

/// Δ̂ edges from the balanced-path grammar B -> ε | B B | f B ~f, with an
/// edge (i, j) whenever some i..j walk reads B f B. Computed as a boolean
/// matrix fixpoint.
inline std::set<std::pair<std::size_t, std::size_t>> grammar_reduction(const LabeledGraph& delta) {
  const std::size_t n = delta.index.size();
  using Matrix = std::vector<std::vector<char>>;
  Matrix bal(n, std::vector<char>(n, 0));
  for (std::size_t i = 0; i < n; ++i) bal[i][i] = 1;
  for (const auto& e : delta.edges)
    if (e.label.is_epsilon()) bal[e.from][e.to] = 1;
  for (bool changed = true; changed;) {
    changed = false;
    auto set = [&](std::size_t i, std::size_t j) {
      if (!bal[i][j]) bal[i][j] = changed = true;
    };
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        if (bal[i][k])
          for (std::size_t j = 0; j < n; ++j)
            if (bal[k][j]) set(i, j);
    for (const auto& open : delta.edges) {
      if (!open.label.is_pos()) continue;
      for (const auto& close : delta.edges)
        if (close.label.is_neg() && close.label.symbol == open.label.symbol && bal[open.to][close.from])
          set(open.from, close.to);
    }
  }
  std::set<std::pair<std::size_t, std::size_t>> result;
  for (const auto& e : delta.edges) {
    if (!e.label.is_pos()) continue;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (bal[i][e.from] && bal[e.to][j]) result.emplace(i, j);
  }
  return result;
}

}  // namespace testing_support
