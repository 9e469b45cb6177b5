#include <gtest/gtest.h>

#include "support/helpers.hpp"

using namespace termlint;
using namespace testing_support;

namespace {

const std::vector<Label> kAlphabet{Label::pos({"f", 1}), Label::pos({"g", 1}), Label::pos({"h", 1}),
                                   Label::neg({"f", 1}), Label::neg({"g", 1}), Label::neg({"h", 1})};

/// Graph over unary predicates n0..n{size-1} with the given edges.
LabeledGraph make_graph(std::size_t size, const std::vector<std::tuple<std::size_t, std::size_t, Label>>& edges) {
  std::string text;
  for (std::size_t i = 0; i < size; ++i) text += "n" + std::to_string(i) + "(a).\n";
  LabeledGraph g{ArgumentIndex(parse_program(text)), {}};
  auto node = [&](std::size_t i) { return g.index.of(ArgumentId{"n" + std::to_string(i), 1, 1}); };
  for (const auto& [a, b, l] : edges) g.edges.push_back({node(a), node(b), l, "x"});
  return g;
}

}  // namespace

TEST(LabelString, Reduction) {
  EXPECT_EQ(reduce_label_string(labels({"f", "g", "~g"})), labels({"f"}));
  EXPECT_EQ(reduce_label_string(labels({"f", "e", "~f", "g"})), labels({"g"}));
  EXPECT_EQ(reduce_label_string(labels({"~f", "f"})), labels({"~f", "f"}));
  EXPECT_EQ(reduce_label_string(labels({"f", "~g"})), labels({"f", "~g"}));
  EXPECT_TRUE(reduce_label_string(labels({"f", "g", "~g", "~f"})).empty());
}

TEST(LabelString, Classification) {
  EXPECT_EQ(classify_string(labels({"f", "g", "~g"})), PathClass::Increasing);
  EXPECT_EQ(classify_string(labels({"g", "~g", "f"})), PathClass::Increasing);
  EXPECT_EQ(classify_string(labels({"f", "~f"})), PathClass::Flat);
  EXPECT_EQ(classify_string({}), PathClass::Flat);
  EXPECT_EQ(classify_string(labels({"f", "~g"})), PathClass::Failing);
  EXPECT_EQ(classify_string(labels({"~f", "f", "f"})), PathClass::Failing);
}

TEST(LabelString, PdaExamples) {
  EXPECT_TRUE(pda_accepts(labels({"f"})));
  EXPECT_TRUE(pda_accepts(labels({"f", "g", "~g"})));
  EXPECT_TRUE(pda_accepts(labels({"g", "~g", "f"})));
  EXPECT_TRUE(pda_accepts(labels({"e", "f", "e"})));
  EXPECT_FALSE(pda_accepts({}));
  EXPECT_FALSE(pda_accepts(labels({"f", "~f"})));
  EXPECT_FALSE(pda_accepts(labels({"~f"})));
  EXPECT_FALSE(pda_accepts(labels({"f", "~g"})));
}

TEST(LabelString, ExhaustiveAgreementUpToLengthEight) {
  std::size_t count = 0;
  LabelString w;
  std::function<void(std::size_t)> rec = [&](std::size_t left) {
    bool inc = classify_string(w) == PathClass::Increasing;
    ASSERT_EQ(inc, pda_accepts(w)) << to_string(w);
    ASSERT_EQ(inc, grammar_accepts(w)) << to_string(w);
    ++count;
    if (left == 0) return;
    for (const auto& l : kAlphabet) {
      w.push_back(l);
      rec(left - 1);
      w.pop_back();
    }
  };
  rec(8);
  EXPECT_EQ(count, 2015539u);
}

TEST(LabelString, RandomAgreement) {
  std::mt19937 rng(99);
  for (int i = 0; i < 2000; ++i) {
    LabelString w;
    std::size_t n = rng() % 41;
    for (std::size_t k = 0; k < n; ++k) w.push_back(kAlphabet[rng() % kAlphabet.size()]);
    bool inc = classify_string(w) == PathClass::Increasing;
    EXPECT_EQ(inc, pda_accepts(w)) << to_string(w);
    EXPECT_EQ(inc, grammar_accepts(w)) << to_string(w);
  }
}

TEST(LabelString, ReductionIsConfluent) {
  // Cancelling pairs in a random order reaches the same normal form.
  std::mt19937 rng(5);
  for (int i = 0; i < 500; ++i) {
    LabelString w;
    std::size_t n = rng() % 16;
    for (std::size_t k = 0; k < n; ++k) w.push_back(kAlphabet[rng() % 4]);
    LabelString cur = w;
    for (;;) {
      std::vector<std::size_t> spots;
      for (std::size_t k = 0; k + 1 < cur.size(); ++k)
        if (cur[k].is_pos() && cur[k + 1].is_neg() && cur[k].symbol == cur[k + 1].symbol) spots.push_back(k);
      if (spots.empty()) break;
      std::size_t k = spots[rng() % spots.size()];
      cur.erase(cur.begin() + static_cast<std::ptrdiff_t>(k), cur.begin() + static_cast<std::ptrdiff_t>(k + 2));
    }
    EXPECT_EQ(cur, reduce_label_string(w)) << to_string(w);
  }
}

TEST(LabeledGraph, LabelPathEdges) {
  Program p = sample("label_path.lp");
  auto g = labeled_argument_graph(p);
  EXPECT_EQ(g.edges.size(), 4u);
  EXPECT_TRUE(g.has_edge(arg(p, "b[1]"), arg(p, "s[1]"), Label::epsilon()));
  EXPECT_TRUE(g.has_edge(arg(p, "s[1]"), arg(p, "r[1]"), Label::pos({"f", 1})));
  EXPECT_TRUE(g.has_edge(arg(p, "r[1]"), arg(p, "q[1]"), Label::pos({"g", 1})));
  EXPECT_TRUE(g.has_edge(arg(p, "q[1]"), arg(p, "s[1]"), Label::neg({"g", 1})));
}

TEST(LabeledGraph, NestedVariablesLabelBothWays) {
  Program p = parse_program("p(f(X),Y) :- q(X,Y).\nr(X) :- q(g(X),Y).");
  auto g = labeled_argument_graph(p);
  EXPECT_TRUE(g.has_edge(arg(p, "q[1]"), arg(p, "p[1]"), Label::pos({"f", 1})));
  EXPECT_TRUE(g.has_edge(arg(p, "q[2]"), arg(p, "p[2]"), Label::epsilon()));
  EXPECT_TRUE(g.has_edge(arg(p, "q[1]"), arg(p, "r[1]"), Label::neg({"g", 1})));
  EXPECT_FALSE(g.has_edge(arg(p, "q[2]"), arg(p, "r[1]"), Label::epsilon()));
}

TEST(LabeledGraph, RejectsNonFlatPrograms) {
  EXPECT_THROW(labeled_argument_graph(sample("deep_terms.lp")), NotFlatError);
}

TEST(LabeledGraph, PropagationDropsLimitedTargets) {
  Program p = sample("propagation.lp");
  auto full = labeled_argument_graph(p);
  auto delta = propagation_graph(p, compute_ar(p).restricted);
  EXPECT_TRUE(full.has_edge(arg(p, "s[1]"), arg(p, "n[1]"), Label::pos({"f", 1})));
  EXPECT_FALSE(delta.has_edge(arg(p, "s[1]"), arg(p, "n[1]"), Label::pos({"f", 1})));
  EXPECT_LT(delta.edges.size(), full.edges.size());
}

TEST(ReducedGraph, LabelPathHasIncreasingCycle) {
  Program p = sample("label_path.lp");
  auto red = reduced_graph(labeled_argument_graph(p));
  auto edges = red.edges();
  EXPECT_NE(std::find(edges.begin(), edges.end(), std::make_pair(arg(p, "s[1]"), arg(p, "s[1]"))), edges.end());
}

TEST(ReducedGraph, MatchesBruteForceOnRandomGraphs) {
  std::mt19937 rng(2024);
  const std::vector<Label> pool{Label::epsilon(), Label::pos({"f", 1}), Label::pos({"g", 1}), Label::neg({"f", 1}),
                                Label::neg({"g", 1})};
  for (int i = 0; i < 150; ++i) {
    std::size_t n = 1 + rng() % 7;
    std::size_t m = rng() % (2 * n + 3);
    std::vector<std::tuple<std::size_t, std::size_t, Label>> edges;
    for (std::size_t k = 0; k < m; ++k) edges.emplace_back(rng() % n, rng() % n, pool[rng() % pool.size()]);
    auto g = make_graph(n, edges);
    auto red = reduced_graph(g);
    std::set<std::pair<std::size_t, std::size_t>> got;
    for (auto [a, b] : red.graph().edges()) got.emplace(a, b);
    EXPECT_EQ(got, grammar_reduction(g)) << "graph " << i;
  }
}

TEST(ReducedGraph, WitnessesSpellSingleSymbol) {
  std::mt19937 rng(77);
  const std::vector<Label> pool{Label::epsilon(), Label::pos({"f", 1}), Label::pos({"g", 1}), Label::neg({"f", 1}),
                                Label::neg({"g", 1})};
  for (int i = 0; i < 100; ++i) {
    std::size_t n = 1 + rng() % 6;
    std::vector<std::tuple<std::size_t, std::size_t, Label>> edges;
    for (std::size_t k = 0; k < 2 * n; ++k) edges.emplace_back(rng() % n, rng() % n, pool[rng() % pool.size()]);
    auto g = make_graph(n, edges);
    auto red = reduced_graph(g);
    for (auto [a, b] : red.graph().edges()) {
      auto path = red.expand_edge(a, b);
      ASSERT_TRUE(path);
      ASSERT_FALSE(path->empty());
      EXPECT_EQ(path->front().from, a);
      EXPECT_EQ(path->back().to, b);
      LabelString w;
      for (std::size_t k = 0; k < path->size(); ++k) {
        if (k) {
          EXPECT_EQ((*path)[k - 1].to, (*path)[k].from);
        }
        w.push_back((*path)[k].label);
      }
      auto r = reduce_label_string(w);
      ASSERT_EQ(r.size(), 1u);
      EXPECT_TRUE(r[0].is_pos());
    }
  }
}

TEST(Gamma, PaperPrograms) {
  Program q = sample("gamma_not_ar.lp");
  auto res = analyze_gamma(q);
  EXPECT_TRUE(res.acyclic);
  EXPECT_EQ(res.ga, all_args(q));
  EXPECT_FALSE(res.witness);

  Program l = sample("label_path.lp");
  auto lr = analyze_gamma(l);
  EXPECT_FALSE(lr.acyclic);
  ASSERT_TRUE(lr.witness);
  EXPECT_EQ(lr.witness->reduced, labels({"f"}));
  EXPECT_EQ(lr.witness->nodes.front(), lr.witness->nodes.back());
  EXPECT_EQ(lr.ga, args(l, {"b[1]"}));

  Program pr = sample("propagation.lp");
  EXPECT_TRUE(analyze_gamma(pr).acyclic);
  EXPECT_FALSE(analyze_gamma(pr, ArgumentSet{}).acyclic);

  Program ps = sample("psi_not_inflationary.lp");
  EXPECT_EQ(gamma_acyclic_args(ps), args(ps, {"p[2]", "r[1]", "t[1]", "s[1]"}));
}

TEST(Gamma, ContainsArgumentRestrictedSet) {
  ProgramGenerator gen(13);
  for (int i = 0; i < 150; ++i) {
    Program p = gen.flat_program();
    auto ar = compute_ar(p).restricted;
    auto ga = gamma_acyclic_args(p);
    EXPECT_TRUE(std::includes(ga.begin(), ga.end(), ar.begin(), ar.end())) << to_string(p);
  }
}
