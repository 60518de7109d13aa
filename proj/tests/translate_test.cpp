#include <gtest/gtest.h>

#include "support.hpp"
#include "treelog/translate.hpp"

using namespace treelog;
using namespace treelog::testing;

namespace {

const Alphabet kBw({"Black", "White"});
const Alphabet kAb({"a", "b"});

// Checks f1 and f2 select the same nodes on every structure.
void expect_same_unary(const Formula& f1, const Formula& f2, const std::vector<Structure>& structures) {
  for (const auto& s : structures) {
    EXPECT_EQ(evaluate_unary(f1, s), evaluate_unary(f2, s)) << to_text(f1) << " vs " << to_text(f2);
  }
}

std::vector<Structure> structures(const Alphabet& sigma, std::size_t max_nodes, bool ordered, const Schema& s) {
  std::vector<Structure> out;
  for (const auto& t : enumerate_trees(sigma, max_nodes, ordered)) out.push_back(build_structure(t, s));
  return out;
}

// Pointwise agreement of an eliminated atom with the materialized relation.
void expect_axis_agrees(const std::string& rel, int arity, bool ordered, std::size_t max_nodes) {
  const Schema full = ordered ? Schema::ordered_prime(kAb) : Schema::unordered_prime(kAb);
  const Schema base = ordered ? Schema::ordered(kAb) : Schema::unordered(kAb);
  const std::vector<std::string> args = arity == 1 ? std::vector<std::string>{"x"} : std::vector<std::string>{"x", "y"};
  const Formula atom = Formula::relation(rel, args);
  const Formula elim = ordered ? axis_elim_ordered(atom) : axis_elim_unordered(atom);
  for (const auto& r : relation_names(elim)) EXPECT_TRUE(base.contains(r)) << rel << " uses " << r;
  const MsoEvaluator ev(elim);
  for (const auto& t : enumerate_trees(kAb, max_nodes, ordered)) {
    const Structure big = build_structure(t, full);
    const Structure small = build_structure(t, base);
    for_each_assignment(t.size(), free_vars(atom), [&](const Assignment& asg) {
      EXPECT_EQ(ev.holds(small, asg), big.contains(rel, [&] {
        Tuple tu;
        for (const auto& a : args) tu.push_back(asg.nodes.at(a));
        return tu;
      }())) << rel << " on " << to_text(t);
    });
  }
}

}  // namespace

TEST(DatalogToMso, SingleLabelRule) {
  const DatalogQuery q = parse_query("P(x) <- Label_a(x).");
  const Formula f = datalog_to_mso(q);
  EXPECT_EQ(free_vars(f), (FreeVariables{{"x"}, {}}));
  EXPECT_TRUE(alpha_equivalent(f, parse_formula("A2 X. ((A z. (Label_a(z) -> X(z))) -> X(x))")));
  expect_same_unary(f, parse_formula("Label_a(x)"), structures(kAb, 4, false, Schema::unordered(kAb)));
}

TEST(DatalogToMso, UnsatisfiableQuery) {
  const Formula f = datalog_to_mso(parse_query(read_text(data_path("unsat.dl"))));
  for (const auto& s : structures(kAb, 4, false, Schema::unordered(kAb))) EXPECT_TRUE(evaluate_unary(f, s).empty());
}

TEST(DatalogToMso, TwoWhiteProgramOnSmallTree) {
  const DatalogQuery q = parse_query(read_text(data_path("tworeds.dl")));
  const Schema gk = Schema::gottlob_koch(kBw);
  const Formula f = datalog_to_mso(q, gk);
  EXPECT_EQ(free_vars(f), (FreeVariables{{"x"}, {}}));
  EXPECT_EQ(set_quantifier_depth(f), 4u);
  const Structure s = build_structure(parse_tree("(Black (White) (White) (Black))", true), gk);
  EXPECT_EQ(evaluate_unary(f, s), std::set<Node>{0});
  EXPECT_EQ(brute_query(q, s), std::set<Node>{0});
  const Structure one = build_structure(parse_tree("(Black (White) (Black) (Black))", true), gk);
  EXPECT_TRUE(evaluate_unary(f, one).empty());
}

TEST(DatalogToMso, IdbOrder) {
  // Query predicate comes first, the rest in order of first appearance.
  const DatalogQuery q = parse_query("Q(x) <- Leaf(x).\nP(x) <- Child(x,y), Q(y).\nquery: P");
  const Formula f = datalog_to_mso(q);
  ASSERT_EQ(f.kind(), FormulaKind::ForallSet);
  ASSERT_EQ(f.child().kind(), FormulaKind::ForallSet);
  const Formula& matrix = f.child().child();
  ASSERT_EQ(matrix.kind(), FormulaKind::Implies);
  EXPECT_EQ(matrix.child(1), Formula::member(f.name(), "x"));
}

TEST(DatalogToMso, ExtensionalQueryPredicate) {
  const DatalogQuery q{parse_program("P(x) <- Leaf(x)."), "Leaf"};
  EXPECT_EQ(datalog_to_mso(q), parse_formula("Leaf(x)"));
}

TEST(DatalogToMso, Errors) {
  const DatalogQuery binary{parse_program("P(x) <- Child(x,y)."), "Child"};
  EXPECT_EQ(error_code([&] { datalog_to_mso(binary); }), ErrorCode::NotUnary);
  const DatalogQuery missing{parse_program("P(x) <- Leaf(x)."), "Z"};
  EXPECT_EQ(error_code([&] { datalog_to_mso(missing); }), ErrorCode::NotValidated);
  const DatalogQuery q = parse_query("P(x) <- Ls(x).");
  EXPECT_EQ(error_code([&] { datalog_to_mso(q, Schema::unordered_prime(kAb)); }), ErrorCode::NotValidated);
  EXPECT_EQ(error_code([&] { datalog_to_mso(q, Schema::ordered_prime(kAb)); }), std::nullopt);
}

TEST(DatalogToMso, RandomQueriesAgreeWithFixpoint) {
  Rng rng(5);
  for (bool ordered : {false, true}) {
    const Schema s = ordered ? Schema::ordered_prime(kAb) : Schema::unordered_prime(kAb);
    const auto st = structures(kAb, 4, ordered, s);
    for (int i = 0; i < 40; ++i) {
      const DatalogQuery q = random_query(rng, s);
      const MsoEvaluator ev(datalog_to_mso(q, s));
      for (const auto& a : st) EXPECT_EQ(ev.select(a), brute_query(q, a)) << to_text(q.program);
    }
  }
}

TEST(Prenex, LabelRule) {
  const Formula f = datalog_to_mso(parse_query("P(x) <- Label_a(x)."));
  const Formula p = to_prenex_pi1(f);
  EXPECT_TRUE(is_pi1(p));
  EXPECT_FALSE(is_pi1(f));
  expect_same_unary(f, p, structures(kAb, 4, false, Schema::unordered(kAb)));
}

TEST(Prenex, UnsatisfiableQuery) {
  const Formula p = to_prenex_pi1(datalog_to_mso(parse_query(read_text(data_path("unsat.dl")))));
  EXPECT_TRUE(is_pi1(p));
  for (const auto& s : structures(kAb, 4, false, Schema::unordered(kAb))) EXPECT_TRUE(evaluate_unary(p, s).empty());
}

TEST(Prenex, AlreadyPi1IsUnchanged) {
  for (const char* text : {"E y. Child(x,y)", "Leaf(x)", "A2 X. E y. (X(y) | Child(x,y))"}) {
    const Formula f = parse_formula(text);
    EXPECT_TRUE(alpha_equivalent(to_prenex_pi1(f), f)) << text;
  }
}

TEST(Prenex, WrongShape) {
  EXPECT_EQ(error_code([] { to_prenex_pi1(parse_formula("E2 X. X(x)")); }), ErrorCode::WrongShape);
  EXPECT_EQ(error_code([] { to_prenex_pi1(parse_formula("A y. Child(x,y)")); }), ErrorCode::WrongShape);
}

TEST(Prenex, RandomQueries) {
  Rng rng(8);
  const Schema s = Schema::unordered_prime(kAb);
  const auto st = structures(kAb, 4, false, s);
  for (int i = 0; i < 30; ++i) {
    const DatalogQuery q = random_query(rng, s);
    const Formula f = datalog_to_mso(q, s);
    const Formula p = to_prenex_pi1(f);
    EXPECT_TRUE(is_pi1(p)) << to_text(p);
    EXPECT_EQ(free_vars(p), free_vars(f));
    const MsoEvaluator ef(f);
    const MsoEvaluator ep(p);
    for (const auto& a : st) EXPECT_EQ(ef.select(a), ep.select(a)) << to_text(q.program);
  }
}

TEST(AxisElimOrdered, Shapes) {
  EXPECT_TRUE(alpha_equivalent(axis_elim_ordered(parse_formula("Root(x)")), parse_formula("~E y. (Fc(y,x) | Ns(y,x))")));
  EXPECT_TRUE(alpha_equivalent(axis_elim_ordered(parse_formula("Leaf(x)")), parse_formula("~E y. Fc(x,y)")));
  EXPECT_EQ(axis_elim_ordered(parse_formula("Label_a(x) & Fc(x,y)")), parse_formula("Label_a(x) & Fc(x,y)"));
}

TEST(AxisElimOrdered, DescOnFig1) {
  const Formula d = axis_elim_ordered(parse_formula("Desc(x,y)"));
  const Structure s = build_structure(parse_tree(kFig1, true), Schema::ordered(kBw));
  EXPECT_TRUE(evaluate(d, s, {{{"x", 0}, {"y", 8}}, {}}));
  EXPECT_FALSE(evaluate(d, s, {{{"x", 8}, {"y", 0}}, {}}));
  EXPECT_FALSE(evaluate(d, s, {{{"x", 0}, {"y", 0}}, {}}));
  const Structure full = build_structure(parse_tree(kFig1, true), Schema::ordered_prime(kBw));
  for (Node u = 0; u < s.size(); ++u) {
    for (Node v = 0; v < s.size(); ++v) {
      EXPECT_EQ(evaluate(d, s, {{{"x", u}, {"y", v}}, {}}), full.contains("Desc", {u, v}));
    }
  }
}

TEST(AxisElimOrdered, LastSiblingOfRootIsFalse) {
  const Formula ls = axis_elim_ordered(parse_formula("Ls(x)"));
  for (const char* t : {"(a)", "(a (b))", "(b (a) (a (b)))"}) {
    EXPECT_FALSE(evaluate(ls, build_structure(parse_tree(t, true), Schema::ordered(kAb)), {{{"x", 0}}, {}})) << t;
  }
}

TEST(AxisElimOrdered, Biconditionals) {
  for (const char* r : {"Child", "Desc"}) expect_axis_agrees(r, 2, true, 5);
  for (const char* r : {"Root", "Leaf", "Ls"}) expect_axis_agrees(r, 1, true, 5);
}

TEST(AxisElimUnordered, Examples) {
  const Structure s = build_structure(parse_tree(kFig1, false), Schema::unordered(kBw));
  EXPECT_TRUE(evaluate(axis_elim_unordered(parse_formula("Is(x,y)")), s, {{{"x", 1}, {"y", 2}}, {}}));
  EXPECT_FALSE(evaluate(axis_elim_unordered(parse_formula("Is(x,y)")), s, {{{"x", 1}, {"y", 1}}, {}}));
  const Formula root = axis_elim_unordered(parse_formula("Root(x)"));
  EXPECT_TRUE(alpha_equivalent(root, parse_formula("~E y. Child(y,x)")));
  EXPECT_EQ(evaluate_unary(root, s), std::set<Node>{0});
  const Formula desc = axis_elim_unordered(parse_formula("Desc(x,y)"));
  EXPECT_FALSE(evaluate(desc, s, {{{"x", 2}, {"y", 8}}, {}}));
  EXPECT_TRUE(evaluate(desc, s, {{{"x", 4}, {"y", 8}}, {}}));
  EXPECT_GE(set_quantifier_depth(desc), 1u);
}

TEST(AxisElimUnordered, Biconditionals) {
  for (const char* r : {"Desc", "Is"}) expect_axis_agrees(r, 2, false, 5);
  for (const char* r : {"Root", "Leaf"}) expect_axis_agrees(r, 1, false, 5);
}

TEST(AxisFormula, RejectsUnknownRelations) {
  FreshNames fresh({"x", "y"});
  EXPECT_EQ(error_code([&] { axis_formula("Is", true, {"x", "y"}, fresh); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(error_code([&] { axis_formula("Ls", false, {"x"}, fresh); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(error_code([&] { axis_formula("Label_a", true, {"x"}, fresh); }), ErrorCode::InvalidArgument);
  EXPECT_EQ(error_code([&] { axis_formula("Child", true, {"x", "y"}, fresh); }), std::nullopt);
}

TEST(UnorderedToOrdered, ChildAgrees) {
  const Formula c = unordered_to_ordered(parse_formula("Child(x,y)"));
  for (const auto& r : relation_names(c)) EXPECT_TRUE(r == "Fc" || r == "Ns") << r;
  for (const auto& t : enumerate_trees(kAb, 5, true)) {
    const Structure o = build_structure(t, Schema::ordered(kAb));
    const Structure u = build_structure(t.with_order(false), Schema::unordered(kAb));
    for_each_assignment(t.size(), {{"x", "y"}, {}}, [&](const Assignment& asg) {
      EXPECT_EQ(evaluate(c, o, asg), u.contains("Child", {asg.nodes.at("x"), asg.nodes.at("y")}));
    });
  }
}

TEST(UnorderedToOrdered, LabelsUnchanged) {
  EXPECT_EQ(unordered_to_ordered(parse_formula("Label_a(x)")), parse_formula("Label_a(x)"));
}

TEST(UnorderedToOrdered, TwoWhiteFormulaOnOrderedFig1) {
  const Formula f = unordered_to_ordered(parse_formula(read_text(data_path("two_white.mso"))));
  EXPECT_EQ(evaluate_unary(f, build_structure(parse_tree(kFig1, true), Schema::ordered(kBw))), std::set<Node>{0});
}

TEST(UnorderedToOrdered, OrderInvariance) {
  const std::vector<Formula> fs{
      parse_formula(read_text(data_path("two_white.mso"))),
      parse_formula("E y. E z. (Child(x,y) & Child(x,z) & y != z & Label_a(y))"),
      axis_elim_unordered(parse_formula("E y. (Desc(x,y) & Label_b(y) & ~Is(x,y))")),
      axis_elim_unordered(parse_formula("Leaf(x) & ~Root(x)")),
  };
  const Alphabet sigma({"a", "b", "White"});
  for (const auto& f : fs) {
    const Formula g = unordered_to_ordered(f);
    for (const auto& t : enumerate_trees(kAb, 5, true)) {
      const Structure o = build_structure(t, Schema::ordered(sigma));
      const Structure u = build_structure(t.with_order(false), Schema::unordered(sigma));
      EXPECT_EQ(evaluate_unary(g, o), evaluate_unary(f, u)) << to_text(f) << " on " << to_text(t);
    }
    // Two orderings of one unordered tree.
    const Structure o1 = build_structure(parse_tree("(a (b) (a (b) (a)) (White))", true), Schema::ordered(sigma));
    const Structure o2 = build_structure(parse_tree("(a (White) (a (a) (b)) (b))", true), Schema::ordered(sigma));
    const std::vector<Node> iso{0, 3, 2, 1, 5, 4};
    std::set<Node> mapped;
    for (Node v : evaluate_unary(g, o1)) mapped.insert(iso[v]);
    EXPECT_EQ(evaluate_unary(g, o2), mapped) << to_text(f);
  }
}
