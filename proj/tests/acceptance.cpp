// Acceptance suite: one line per criterion, exit status 0 iff all pass.

#include <chrono>
#include <cstdio>
#include <functional>
#include <iostream>
#include <sstream>

#include "support.hpp"
#include "treelog/automata.hpp"
#include "treelog/decide.hpp"
#include "treelog/error.hpp"
#include "treelog/translate.hpp"

using namespace treelog;
using namespace treelog::testing;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;
};

// Collects the first few failure messages.
struct Failures {
  std::size_t count = 0;
  std::ostringstream first;

  void add(const std::string& what) {
    if (count++ < 3) first << (count > 1 ? "; " : "") << what;
  }
  Outcome outcome(const std::string& ok) const {
    if (count == 0) return {true, ok};
    return {false, std::to_string(count) + " failures: " + first.str()};
  }
};

std::set<Tuple> nodes_as_tuples(std::initializer_list<Node> vs) {
  std::set<Tuple> out;
  for (Node v : vs) out.insert({v});
  return out;
}

Outcome golden_examples() {
  Failures f;
  const Alphabet bw({"Black", "White"});
  const LabeledTree fig_u = parse_tree(kFig1, false);
  const LabeledTree fig_o = parse_tree(kFig1, true);

  const FactSet got = atoms(build_structure(fig_u, Schema::unordered(bw)));
  FactSet want;
  for (Node v : {0, 1, 3, 5, 7, 8}) want.insert({"Label_Black", {v}});
  for (Node v : {2, 4, 6}) want.insert({"Label_White", {v}});
  for (auto [u, v] : std::vector<std::pair<Node, Node>>{{0, 1}, {0, 2}, {0, 3}, {0, 4}, {0, 5}, {2, 6}, {2, 7}, {4, 8}}) {
    want.insert({"Child", {u, v}});
  }
  if (got != want || got.size() != 17) f.add("unordered atoms differ (" + std::to_string(got.size()) + " atoms)");

  const Structure gk = build_structure(fig_o, Schema::gottlob_koch(bw));
  if (gk.relation("Fc") != std::set<Tuple>{{0, 1}, {2, 6}, {4, 8}}) f.add("Fc differs");
  if (gk.relation("Ns") != std::set<Tuple>{{1, 2}, {2, 3}, {3, 4}, {4, 5}, {6, 7}}) f.add("Ns differs");
  if (gk.relation("Ls") != nodes_as_tuples({5, 7, 8})) f.add("Ls differs");

  const DatalogQuery tworeds = parse_query(read_text(data_path("tworeds.dl")));
  if (evaluate_unary_query(tworeds, gk) != std::set<Node>{0}) f.add("two-White query is not {v0}");

  const Formula phi = parse_formula(read_text(data_path("two_white.mso")));
  if (evaluate_unary(phi, build_structure(fig_u, Schema::unordered(bw))) != std::set<Node>{0}) {
    f.add("MSO two-White formula is not {v0}");
  }

  const Alphabet ab({"a", "b"});
  const DatalogQuery unsat_child = parse_query("P(x) <- Child(x,x).");
  const DatalogQuery unsat_fc = parse_query("P(x) <- Fc(x,x).");
  std::size_t trees = 0;
  for (bool ordered : {false, true}) {
    const Schema s = ordered ? Schema::ordered_prime(ab) : Schema::unordered_prime(ab);
    for_each_tree(ab, 5, ordered, [&](const LabeledTree& t) {
      ++trees;
      const Structure st = build_structure(t, s);
      if (!evaluate_unary_query(unsat_child, st).empty()) f.add("Child(x,x) selects on " + to_text(t));
      if (ordered && !evaluate_unary_query(unsat_fc, st).empty()) f.add("Fc(x,x) selects on " + to_text(t));
      return true;
    });
  }
  return f.outcome("17 atoms, Fc/Ns/Ls, {v0} twice, empty unsat queries on " + std::to_string(trees) + " trees");
}

Outcome translation_theorem() {
  Failures f;
  Rng rng(20240601);
  const Alphabet ab({"a", "b"});
  const std::size_t programs = 200;
  std::size_t checks = 0;
  for (bool ordered : {false, true}) {
    const Schema s = ordered ? Schema::ordered_prime(ab) : Schema::unordered_prime(ab);
    const auto trees = enumerate_trees(ab, 5, ordered);
    for (std::size_t i = 0; i < programs; ++i) {
      const DatalogQuery q = random_query(rng, s);
      const Formula phi = to_prenex_pi1(datalog_to_mso(q, s));
      if (!is_pi1(phi)) f.add("not prenex: " + to_text(phi));
      const MsoEvaluator ev(phi);
      for (const auto& t : trees) {
        const Structure st = build_structure(t, s);
        ++checks;
        if (ev.select(st) != evaluate_unary_query(q, st)) {
          f.add(to_text(q.program) + " on " + to_text(t));
        }
      }
    }
  }
  return f.outcome(std::to_string(programs) + " programs per mode, " + std::to_string(checks) +
                   " tree evaluations agree");
}

Outcome axis_biconditionals() {
  Failures f;
  const Alphabet ab({"a", "b"});
  std::size_t checks = 0;
  for (bool ordered : {true, false}) {
    const Schema base = ordered ? Schema::ordered(ab) : Schema::unordered(ab);
    const std::vector<std::string> axes = ordered ? std::vector<std::string>{"Child", "Desc", "Root", "Leaf", "Ls"}
                                                  : std::vector<std::string>{"Desc", "Is", "Root", "Leaf"};
    std::vector<std::pair<std::string, MsoEvaluator>> formulas;
    for (const auto& axis : axes) {
      FreshNames fresh({"x", "y"});
      const bool binary = axis == "Child" || axis == "Desc" || axis == "Is";
      formulas.emplace_back(axis, MsoEvaluator(axis_formula(axis, ordered, binary ? std::vector<std::string>{"x", "y"}
                                                                                 : std::vector<std::string>{"x"},
                                                            fresh)));
    }
    for_each_tree(ab, 6, ordered, [&](const LabeledTree& t) {
      const Structure st = build_structure(t, base);
      const Structure full = build_structure(t, ordered ? Schema::ordered_prime(ab) : Schema::unordered_prime(ab));
      for (const auto& [axis, ev] : formulas) {
        const std::set<Tuple>& rel = full.relation(axis);
        const bool binary = axis == "Child" || axis == "Desc" || axis == "Is";
        for (Node u = 0; u < t.size(); ++u) {
          for (Node v = 0; v < (binary ? t.size() : 1); ++v) {
            Assignment asg;
            asg.nodes["x"] = u;
            if (binary) asg.nodes["y"] = v;
            const Tuple tuple = binary ? Tuple{u, v} : Tuple{u};
            ++checks;
            if (ev.holds(st, asg) != (rel.count(tuple) > 0)) f.add(axis + " at " + to_text(t));
          }
        }
      }
      return true;
    });
  }
  return f.outcome(std::to_string(checks) + " node tuples agree on all trees up to 6 nodes");
}

Outcome automata_vs_evaluator() {
  Failures f;
  Rng rng(77);
  const Alphabet ab({"a", "b"});
  const Schema s = Schema::ordered(ab);
  const auto trees = enumerate_trees(ab, 5, true);
  MsoCompiler compiler(ab);
  const std::size_t formulas = 50;
  std::size_t checks = 0;
  std::size_t quantified = 0;
  for (std::size_t i = 0; i < formulas; ++i) {
    const Formula phi = random_formula(rng, ab, 2, 3);
    if (set_quantifier_depth(phi) > 0) ++quantified;
    const auto tracks = tracks_of(phi);
    const TreeAutomaton a = compiler.compile(phi, tracks);
    const MsoEvaluator ev(phi);
    const FreeVariables fv = free_vars(phi);
    for (const auto& t : trees) {
      const Structure st = build_structure(t, s);
      const BinaryTree b = fcns_encode(t);
      for_each_assignment(t.size(), fv, [&](const Assignment& asg) {
        ++checks;
        if (run(a, annotate(b, tracks, asg)) != ev.holds(st, asg)) f.add(to_text(phi) + " on " + to_text(t));
      });
    }
  }
  return f.outcome(std::to_string(formulas) + " formulas (" + std::to_string(quantified) +
                   " with set quantifiers), " + std::to_string(checks) + " runs agree");
}

Outcome decision_cross_validation() {
  Failures f;
  Rng rng(4242);
  const Alphabet ab({"a", "b"});
  const std::size_t pairs = 100;
  std::size_t yes = 0, no = 0, unknown = 0;
  for (bool ordered : {false, true}) {
    const TreeMode mode = ordered ? TreeMode::ordered_trees(ab) : TreeMode::unordered(ab);
    Decider decider(mode);
    const DatalogQuery unsat = unsat_query(mode);
    if (decider.satisfiable(unsat).answer != Answer::No) f.add("unsat query not unsatisfiable");

    auto check = [&](const Verdict& v, const DatalogQuery& q1, const DatalogQuery* q2, const std::string& what) {
      const DatalogQuery& other = q2 ? *q2 : unsat;
      switch (v.answer) {
        case Answer::Yes: ++yes; break;
        case Answer::No: ++no; break;
        case Answer::Unknown: ++unknown; return;
      }
      const bool refuted = v.answer == (q2 ? Answer::No : Answer::Yes);
      if (refuted) {
        if (!v.counterexample || !refutes(*v.counterexample, q1, q2, mode)) f.add(what + ": unverifiable");
      } else if (auto cx = bounded_counterexample_search(q1, other, mode, 5)) {
        f.add(what + ": oracle counterexample " + to_text(cx->tree));
      }
    };

    for (std::size_t i = 0; i < pairs / 2; ++i) {
      const DatalogQuery q1 = random_query(rng, mode.schema);
      DatalogQuery q2 = random_query(rng, mode.schema);
      // Every third pair is related by construction so "yes" answers occur.
      if (i % 3 == 1) {
        q2 = q1;
        q2.program.add_rule(random_query(rng, mode.schema, {1, 1, 2}).program.rules()[0]);
      }
      const std::string tag = (ordered ? "ordered " : "unordered ") + to_text(q1.program) + " / " +
                              to_text(q2.program);
      check(decider.containment(q1, q2), q1, &q2, "contained " + tag);
      check(decider.containment(q2, q1), q2, &q1, "contained reversed " + tag);
      const Verdict eq = decider.equivalence(q1, q2);
      if (eq.answer == Answer::No && (!eq.counterexample || !(refutes(*eq.counterexample, q1, &q2, mode) ||
                                                              refutes(*eq.counterexample, q2, &q1, mode)))) {
        f.add("equivalence counterexample does not verify " + tag);
      }
      for (const DatalogQuery* q : {&q1, static_cast<const DatalogQuery*>(&q2)}) {
        const Verdict sat = decider.satisfiable(*q);
        check(sat, *q, nullptr, "satisfiable " + to_text(q->program));
        const Verdict same = decider.equivalence(*q, unsat);
        if (sat.answer != Answer::Unknown && same.answer != Answer::Unknown &&
            (sat.answer == Answer::Yes) != (same.answer == Answer::No)) {
          f.add("satisfiability disagrees with equivalence to the unsat query: " + to_text(q->program));
        }
      }
    }
  }
  return f.outcome(std::to_string(pairs) + " pairs: " + std::to_string(yes) + " yes, " + std::to_string(no) +
                   " no, " + std::to_string(unknown) + " unknown; all consistent with the bounded oracle");
}

Outcome observation_suite() {
  Failures f;
  const Alphabet al({"a"});
  auto tree = [](const char* text, bool ordered) { return parse_tree(text, ordered); };

  // Root pair, ordered, M = τ'_o without Root; v of T0 is the child of T1.
  const Schema no_root = Schema::ordered(al, {"Child", "Desc", "Leaf", "Ls"});
  const Structure t0 = build_structure(tree("(a)", true), no_root);
  const Structure t1 = build_structure(tree("(a (a))", true), no_root);
  if (!subset(map_facts(atoms(t0), {1}), atoms(t1))) f.add("Root pair inclusion");
  // Leaf and Ls pairs.
  const Schema no_leaf = Schema::ordered(al, {"Child", "Desc", "Root", "Ls"});
  if (!subset(atoms(build_structure(tree("(a)", true), no_leaf)), atoms(build_structure(tree("(a (a))", true), no_leaf)))) {
    f.add("Leaf pair inclusion");
  }
  const Schema no_ls = Schema::ordered(al, {"Child", "Desc", "Root", "Leaf"});
  if (!subset(atoms(build_structure(tree("(a (a))", true), no_ls)), atoms(build_structure(tree("(a (a) (a))", true), no_ls)))) {
    f.add("Ls pair inclusion");
  }
  // q_two pair over τ'_u.
  const Schema up = Schema::unordered_prime(al);
  const Structure t2 = build_structure(tree("(a (a) (a))", false), up);
  const Structure t3 = build_structure(tree("(a (a) (a) (a))", false), up);
  if (!subset(atoms(t2), atoms(t3))) f.add("q_two pair inclusion");
  const Formula two = parse_formula(
      "E y1. E y2. (Child(x,y1) & Child(x,y2) & Label_a(y1) & Label_a(y2) & y1 != y2 & "
      "A z. (Child(x,z) & Label_a(z) -> z = y1 | z = y2))");
  if (evaluate_unary(two, t2) != std::set<Node>{0} || !evaluate_unary(two, t3).empty()) f.add("q_two values");

  // Homomorphism of the sibling observation.
  const Schema m = Schema::unordered(al, {"Desc", "Root", "Leaf"});
  const Structure a = build_structure(tree("(a (a) (a))", false), m);
  const Structure b = build_structure(tree("(a (a))", false), m);
  const std::vector<Node> h{0, 1, 1};
  if (!check_homomorphism(h, a, b)) f.add("h is not a homomorphism");
  const Schema with_is = m.with("Is", 2);
  if (check_homomorphism(h, build_structure(tree("(a (a) (a))", false), with_is),
                         build_structure(tree("(a (a))", false), with_is))) {
    f.add("h preserved Is");
  }

  // Randomized programs: monotonicity along the inclusions, preservation
  // along h.
  Rng rng(99);
  std::size_t programs = 0;
  auto monotone = [&](const Schema& s, const Structure& small, const Structure& big, const std::vector<Node>& emb,
                      const std::string& what) {
    for (int i = 0; i < 100; ++i, ++programs) {
      const DatalogQuery q = random_query(rng, s);
      std::set<Node> image;
      for (Node v : evaluate_unary_query(q, small)) image.insert(emb[v]);
      const auto target = evaluate_unary_query(q, big);
      if (!std::includes(target.begin(), target.end(), image.begin(), image.end())) {
        f.add(what + ": " + to_text(q.program));
      }
    }
  };
  monotone(no_root, t0, t1, {1}, "Root pair");
  monotone(up, t2, t3, {0, 1, 2}, "q_two pair");
  monotone(m, a, b, h, "homomorphism");
  return f.outcome("inclusions and homomorphism hold; " + std::to_string(programs) + " random programs monotone");
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    std::string name;
    std::function<Outcome()> run;
    double limit_seconds;
  };
  const std::vector<Criterion> criteria{
      {1, "golden examples", golden_examples, 1},
      {2, "datalog to MSO translation", translation_theorem, 300},
      {3, "axis formulas vs materialized relations", axis_biconditionals, 120},
      {4, "automata vs direct evaluation", automata_vs_evaluator, 600},
      {5, "decision procedures vs bounded oracle", decision_cross_validation, 600},
      {6, "monotonicity and homomorphism witnesses", observation_suite, 60},
  };
  bool all = true;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (o.pass && secs > c.limit_seconds) {
      o = {false, o.detail + "; over the " + std::to_string(static_cast<int>(c.limit_seconds)) + " s limit"};
    }
    all = all && o.pass;
    std::printf("%s criterion %d (%s): %s [%.2f s]\n", o.pass ? "PASS" : "FAIL", c.id, c.name.c_str(),
                o.detail.c_str(), secs);
    std::fflush(stdout);
  }
  std::printf("NOT REPRODUCED criterion 7 (EXPTIME-hardness): lower bound only, no timing claim\n");
  return all ? 0 : 1;
}
