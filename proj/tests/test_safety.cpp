#include <gtest/gtest.h>

#include "support/helpers.hpp"

using namespace termlint;
using namespace testing_support;

namespace {

using EdgeList = std::vector<std::pair<std::string, std::string>>;

EdgeList sorted(EdgeList e) {
  std::sort(e.begin(), e.end());
  return e;
}

/// Edges of g whose endpoints lie on a common cycle.
EdgeList cycle_edges(const ActivationGraph& g) {
  auto scc = strongly_connected_components(g.graph);
  EdgeList out;
  for (auto [a, b] : g.graph.edges())
    if (scc[a] == scc[b]) out.emplace_back(g.rules[a], g.rules[b]);
  return sorted(out);
}

}  // namespace

TEST(Activation, SingleStepGraphs) {
  Program act = sample("activation.lp");
  EXPECT_EQ(activation_graph(act).edges(), (EdgeList{{"r1", "r2"}}));
  EXPECT_TRUE(rules_depending_on_cycles(activation_graph(act)).empty());

  Program ns = sample("psi_not_inflationary.lp");
  EXPECT_EQ(sorted(activation_graph(ns).edges()),
            (EdgeList{{"r1", "r2"}, {"r2", "r1"}, {"r3", "r4"}, {"r4", "r5"}, {"r5", "r1"}, {"r5", "r3"}}));
}

TEST(Activation, FirstLevelEqualsSingleStepGraph) {
  ProgramGenerator gen(31);
  for (int i = 0; i < 60; ++i) {
    Program p = gen.flat_program();
    EXPECT_EQ(activation_graphs(p, 1).front().edges(), activation_graph(p).edges());
  }
}

TEST(Activation, DeeperLevels) {
  Program p = sample("two_safe.lp");
  auto graphs = activation_graphs(p, 3);
  ASSERT_EQ(graphs.size(), 3u);
  EXPECT_EQ(cycle_edges(graphs[0]), (EdgeList{{"r2", "r3"}, {"r3", "r2"}}));
  EXPECT_EQ(sorted(graphs[1].edges()), (EdgeList{{"r1", "r3"}, {"r3", "r3"}}));
  EXPECT_EQ(cycle_edges(graphs[1]), (EdgeList{{"r3", "r3"}}));
  EXPECT_TRUE(graphs[2].edges().empty());
  EXPECT_EQ(k_restricted_activation_graph(p, 2).edges(), graphs[1].edges());
}

TEST(Activation, BudgetIsEnforced) {
  Program p = sample("two_safe.lp");
  ActivationOptions tight;
  tight.max_subst_bytes = 3;
  EXPECT_THROW(activation_graphs(p, 3, tight), ResourceError);
  EXPECT_NO_THROW(activation_graphs(p, 1, tight));
  EXPECT_THROW(activation_graphs(p, 0), Error);
}

TEST(LimitedTerms, BothConditions) {
  Program p = sample("safety_chain.lp");
  const Rule& r1 = p.rules[0];
  auto c1 = term_limited(p, r1, 0, args(p, {"b[1]"}));
  EXPECT_TRUE(c1);
  EXPECT_EQ(c1.condition, 1);
  EXPECT_FALSE(term_limited(p, r1, 1, args(p, {"b[1]"})));
  auto c2 = term_limited(p, r1, 1, args(p, {"b[1]", "p[1]"}));
  EXPECT_TRUE(c2);
  EXPECT_EQ(c2.condition, 2);
}

TEST(LimitedTerms, SecondConditionNeedsMatchingVariables) {
  Program p = parse_program("p(f(X),g(Y)) :- p(X,Z), b(Y).");
  EXPECT_FALSE(term_limited(p, p.rules[0], 0, args(p, {"p[2]"})));
  Program mixed = parse_program("p(f(X),Y) :- p(X,Y).");
  EXPECT_FALSE(term_limited(mixed, mixed.rules[0], 0, args(mixed, {"p[2]"})));
}

TEST(Psi, SafetyChain) {
  Program p = sample("safety_chain.lp");
  auto rep = safe_args(p, 1);
  std::vector<ArgumentSet> expected{args(p, {"b[1]", "p[1]"}), args(p, {"b[1]", "p[1]", "p[2]"}),
                                    args(p, {"b[1]", "p[1]", "p[2]", "q[1]"})};
  EXPECT_EQ(rep.chain, expected);
  EXPECT_TRUE(rep.all_safe);
  EXPECT_TRUE(rep.chain_monotone);
  EXPECT_EQ(rep.justification.at(arg(p, "b[1]")), Justification::NoCycleDependence);
}

TEST(Psi, NotInflationary) {
  Program p = sample("psi_not_inflationary.lp");
  EXPECT_TRUE(psi(p, args(p, {"p[2]"})).empty());
  auto rep = safe_args(p, 1);
  EXPECT_EQ(rep.safe, args(p, {"r[1]", "t[1]", "s[1]", "p[2]"}));
  EXPECT_FALSE(rep.all_safe);
}

TEST(Psi, ActivationAndHierarchyExamples) {
  Program act = sample("activation.lp");
  EXPECT_TRUE(safe_args(act, 1).all_safe);

  Program two = sample("two_safe.lp");
  EXPECT_FALSE(safe_args(two, 1).all_safe);
  EXPECT_TRUE(safe_args(two, 2).all_safe);

  Program three = sample("three_safe.lp");
  EXPECT_FALSE(safe_args(three, 2).all_safe);
  EXPECT_TRUE(safe_args(three, 3).all_safe);

  Program four = sample("four_safe.lp");
  EXPECT_FALSE(safe_args(four, 3).all_safe);
  EXPECT_TRUE(safe_args(four, 4).all_safe);
}

TEST(Psi, MonotoneOnRandomSets) {
  ProgramGenerator gen(8);
  std::mt19937 rng(8);
  for (int i = 0; i < 80; ++i) {
    Program p = gen.flat_program();
    SafetyContext ctx(p, 1);
    auto all = ctx.index().all();
    ArgumentSet small, large;
    for (const auto& a : all) {
      bool in_small = rng() % 3 == 0;
      if (in_small) small.insert(a);
      if (in_small || rng() % 2) large.insert(a);
    }
    auto ps = ctx.psi(small), pl = ctx.psi(large);
    EXPECT_TRUE(std::includes(pl.begin(), pl.end(), ps.begin(), ps.end())) << to_string(p);
  }
}

TEST(Psi, HierarchyOnRandomPrograms) {
  ProgramGenerator gen(19);
  for (int i = 0; i < 100; ++i) {
    Program p = gen.flat_program();
    auto ga = gamma_acyclic_args(p);
    auto s1 = safe_args(p, 1), s2 = safe_args(p, 2);
    EXPECT_TRUE(s1.chain_monotone);
    EXPECT_TRUE(s2.chain_monotone);
    EXPECT_TRUE(std::includes(s1.safe.begin(), s1.safe.end(), ga.begin(), ga.end())) << to_string(p);
    EXPECT_TRUE(std::includes(s2.safe.begin(), s2.safe.end(), s1.safe.begin(), s1.safe.end())) << to_string(p);
  }
}
