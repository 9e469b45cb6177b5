#include <gtest/gtest.h>

#include "support/helpers.hpp"

using namespace termlint;
using namespace testing_support;

namespace {

Interpretation with_predicates(const Interpretation& m, const Program& p) {
  auto preds = p.predicates();
  return restrict_to(m, {preds.begin(), preds.end()});
}

}  // namespace

TEST(Flatten, DeepRuleFromThePaper) {
  Program out = flatten_program(sample("deep_terms.lp"));
  EXPECT_EQ(to_string(out),
            "r1_1: p(f(A),h(Y,Z)) :- b1_r1(A,Y,Z).\n"
            "r1_2: b1_r1(g(X),Y,Z) :- b2_r1(X,Y,Z).\n"
            "r1_3: b2_r1(X,Y,Z) :- b3_r1(X,Y,g(X),l(Z)).\n"
            "r1_4: b3_r1(X,Y,B,C) :- p(f(X),Y), q(h(B,C)).\n");
  EXPECT_TRUE(is_flat(out).flat);
}

TEST(Flatten, FlatRulesAndFactsUnchanged) {
  Program p = parse_program("p(f(X)) :- p(X).\np(f(g(a))).");
  EXPECT_EQ(flatten_program(p), p);
}

TEST(Flatten, FreshNamesAvoidExistingPredicates) {
  Program p = parse_program("r1: p(f(g(X))) :- b1_r1(X).");
  auto res = flatten_with_origin(p);
  for (const auto& r : res.program.rules) {
    EXPECT_EQ(res.origin.at(r.id), "r1");
  }
  std::set<PredicateSymbol> preds;
  for (const auto& s : res.program.predicates()) preds.insert(s);
  EXPECT_TRUE(preds.count({"b1_r1", 1}));
  EXPECT_TRUE(preds.count({"b1_r1_1", 1}));
}

TEST(Flatten, RandomProgramsBecomeFlat) {
  ProgramGenerator gen(3);
  gen.complex_rate = 0.6;
  for (int i = 0; i < 100; ++i) {
    Program p = gen.program();
    for (auto& r : p.rules)
      if (!r.pos_body.empty()) r.pos_body[0] = Atom{"b", {Term::compound("f", {Term::compound("g", {Term::variable("X")})})}};
    Program f = flatten_program(p);
    EXPECT_TRUE(is_flat(f).flat) << to_string(f);
    EXPECT_EQ(parse_program(to_string(f)), f);
  }
}

TEST(Flatten, PreservesAnswersOnOriginalPredicates) {
  Program p = sample("deep_terms.lp");
  p.rules.push_back(parse_program("p(f(X),Y) :- e(X,Y).").rules[0]);
  p.rules.push_back(parse_program("q(X) :- c(X).").rules[0]);
  p.declared_base = {{"e", 2}, {"c", 1}};
  Program f = flatten_program(p);
  std::mt19937 rng(12);
  std::vector<Term> pool{Term::constant("a"), Term::compound("g", {Term::constant("a")}),
                         Term::compound("h", {Term::compound("g", {Term::constant("a")}),
                                              Term::compound("l", {Term::constant("b")})})};
  for (int i = 0; i < 20; ++i) {
    std::vector<Atom> db;
    for (int k = 0; k < 6; ++k) {
      if (rng() % 2) db.push_back(Atom{"e", {pool[rng() % 2], pool[rng() % 2]}});
      else db.push_back(Atom{"c", {pool[rng() % 3]}});
    }
    auto a = bottom_up_eval(p, db), b = bottom_up_eval(f, db);
    ASSERT_TRUE(a.converged && b.converged);
    EXPECT_EQ(a.model, with_predicates(b.model, p));
  }
}

TEST(Flatten, PreservesAnswersOnRandomPrograms) {
  ProgramGenerator gen(21);
  gen.complex_rate = 0.5;
  std::mt19937 rng(21);
  std::size_t compared = 0;
  Fuel fuel;
  fuel.max_term_depth = 6;
  for (int i = 0; i < 200; ++i) {
    Program p = gen.program();
    Program f = flatten_program(p);
    auto db = random_database(p, rng, 10);
    auto a = bottom_up_eval(p, db, fuel), b = bottom_up_eval(f, db, fuel);
    if (!a.converged || !b.converged) continue;
    ++compared;
    EXPECT_EQ(a.model, with_predicates(b.model, p)) << to_string(p);
  }
  EXPECT_GT(compared, 100u);
}

TEST(Magic, PaperRewritings) {
  auto first = magic_rewrite(parse_atom("p(f(f(a)))"), sample("bounded_query.lp"));
  EXPECT_EQ(first.goal_adornment, "b");
  EXPECT_EQ(to_string(first.program),
            "magic_p_b(f(f(a))).\n"
            "magic_p_b(X) :- magic_p_b(f(X)).\n"
            "p_b(a) :- magic_p_b(a).\n"
            "p_b(f(X)) :- magic_p_b(f(X)), p_b(X).\n");
  auto second = magic_rewrite(parse_atom("p(a)"), sample("shrinking_query.lp"));
  EXPECT_EQ(to_string(second.program),
            "magic_p_b(a).\n"
            "magic_p_b(f(X)) :- magic_p_b(X).\n"
            "p_b(f(f(a))) :- magic_p_b(f(f(a))).\n"
            "p_b(X) :- magic_p_b(X), p_b(f(X)).\n");
}

TEST(Magic, FreeArgumentsAndBasePredicates) {
  Program p = parse_program("p(X,Y) :- e(X,Z), p(Z,Y).\np(X,Y) :- e(X,Y).");
  auto m = magic_rewrite(parse_atom("p(a,Y)"), p);
  EXPECT_EQ(m.goal_adornment, "bf");
  EXPECT_EQ(m.goal, parse_atom("p_bf(a,Y)"));
  EXPECT_EQ(to_string(m.program.rules[1]), "magic_p_bf(Z) :- magic_p_bf(X), e(X,Z).");
  auto base = magic_rewrite(parse_atom("e(a,b)"), p);
  EXPECT_EQ(base.program, p);
}

TEST(Magic, PreservesGoalAnswers) {
  ProgramGenerator gen(55);
  gen.complex_rate = 0.2;
  std::mt19937 rng(55);
  Fuel fuel;
  fuel.max_term_depth = 5;
  std::size_t compared = 0;
  for (int i = 0; i < 200; ++i) {
    Program p = gen.program();
    const Atom& h = p.rules[0].head[0];
    std::vector<Term> goal_args{Term::constant("a")};
    for (std::size_t k = 1; k < h.arity(); ++k) goal_args.push_back(Term::variable("V" + std::to_string(k)));
    Atom goal{h.predicate, goal_args};
    auto m = magic_rewrite(goal, p);
    auto db = random_database(p, rng, 12);
    auto a = bottom_up_eval(p, db, fuel), b = bottom_up_eval(m.program, db, fuel);
    if (!a.converged || !b.converged) continue;
    ++compared;
    std::set<Atom> want, got;
    for (const auto& x : a.model)
      if (unifiable(x, goal)) want.insert(x);
    for (const auto& x : b.model)
      if (unifiable(x, m.goal)) got.insert(Atom{goal.predicate, x.args});
    EXPECT_EQ(want, got) << to_string(p) << "goal " << to_string(goal);
  }
  EXPECT_GT(compared, 100u);
}

TEST(Magic, QueryVerdicts) {
  auto first = query_safe(parse_atom("p(f(f(a)))"), sample("bounded_query.lp"), Criterion::Safe);
  EXPECT_TRUE(first.safe);
  EXPECT_FALSE(first.original);
  EXPECT_TRUE(first.rewritten);
  EXPECT_EQ(first.branch, "rewritten");
  auto second = query_safe(parse_atom("p(a)"), sample("shrinking_query.lp"), Criterion::Safe);
  EXPECT_TRUE(second.original);
  EXPECT_FALSE(second.rewritten);
  EXPECT_EQ(second.branch, "original");
}

TEST(Standard, DisjunctiveExample) {
  Program p = sample("disjunctive.lp");
  EXPECT_EQ(to_string(standard_version(p)),
            "r1_1: p(X) :- r(X).\n"
            "r1_2: q(X) :- r(X).\n"
            "r2: r(X) :- b(X).\n");
  EXPECT_EQ(to_string(extended_program(p)),
            "p(X) | q(X) :- P(X), Q(X), r(X), not a(X).\n"
            "r(X) :- R(X), b(X), not q(X).\n"
            "r1_1_st: P(X) :- R(X).\n"
            "r1_2_st: Q(X) :- R(X).\n"
            "r2_st: R(X) :- b(X).\n");
}

TEST(Standard, SizeIsSumOfHeads) {
  std::mt19937 rng(4);
  for (int i = 0; i < 50; ++i) {
    Program p = random_ground_disjunctive(rng, 4, 3);
    std::size_t heads = 0;
    for (const auto& r : p.rules) heads += r.head.size();
    Program st = standard_version(p);
    EXPECT_EQ(st.rules.size(), heads);
    EXPECT_TRUE(st.is_standard());
  }
}

TEST(Standard, RenamingAvoidsCollisions) {
  Program p;
  p.rules.push_back(Rule{"r1", {Atom{"p", {Term::variable("X")}}}, {Atom{"b", {Term::variable("X")}}}, {}, 0});
  p.rules.push_back(Rule{"r2", {Atom{"P", {Term::variable("X")}}}, {Atom{"b", {Term::variable("X")}}}, {}, 0});
  auto ren = derived_renaming(p);
  std::set<std::string> names{ren.at({"p", 1}), ren.at({"P", 1})};
  EXPECT_EQ(names, (std::set<std::string>{"P_1", "P_2"}));
  EXPECT_FALSE(ren.count({"b", 1}));
}
