#include "treelog/decide.hpp"

#include <algorithm>
#include <stdexcept>

#include "treelog/error.hpp"
#include "treelog/translate.hpp"

namespace treelog {

TreeMode TreeMode::unordered(const Alphabet& sigma) { return {false, Schema::unordered_prime(sigma)}; }

TreeMode TreeMode::ordered_trees(const Alphabet& sigma) { return {true, Schema::ordered_prime(sigma)}; }

Alphabet TreeMode::alphabet() const {
  Alphabet a = schema.alphabet();
  return a.empty() ? Alphabet({"a"}) : a;
}

Structure TreeMode::structure(const LabeledTree& t) const { return build_structure(t, schema); }

std::string_view to_string(Answer a) {
  switch (a) {
    case Answer::Yes: return "yes";
    case Answer::No: return "no";
    case Answer::Unknown: return "unknown";
  }
  return "?";
}

DatalogQuery unsat_query(const TreeMode& mode) {
  const std::string axis = mode.schema.contains(rel::kChild) || !mode.ordered ? "Child" : "Fc";
  DatalogRule rule{{"P", {"x"}}, {{axis, {"x", "x"}}}};
  return {DatalogProgram({rule}), "P"};
}

bool refutes(const PointedTree& p, const DatalogQuery& q1, const DatalogQuery* q2, const TreeMode& mode) {
  const Structure s = mode.structure(p.tree);
  if (!evaluate_unary_query(q1, s).count(p.node)) return false;
  return !q2 || !evaluate_unary_query(*q2, s).count(p.node);
}

std::optional<PointedTree> bounded_counterexample_search(const DatalogQuery& q1, const DatalogQuery& q2,
                                                         const TreeMode& mode, std::size_t max_nodes) {
  std::optional<PointedTree> found;
  for_each_tree(mode.alphabet(), max_nodes, mode.ordered, [&](const LabeledTree& t) {
    const Structure s = mode.structure(t);
    const auto a = evaluate_unary_query(q1, s);
    if (a.empty()) return true;
    const auto b = evaluate_unary_query(q2, s);
    for (Node v : a) {
      if (!b.count(v)) {
        found = PointedTree{t, v};
        return false;
      }
    }
    return true;
  });
  return found;
}

namespace {

// Drops leaves other than the designated node for as long as the pair still
// refutes. Node ids stay breadth-first because deleting one entry from a
// breadth-first list leaves a breadth-first list.
PointedTree shrink(PointedTree p, const DatalogQuery& q1, const DatalogQuery* q2, const TreeMode& mode) {
  bool progress = true;
  while (progress && p.tree.size() > 1) {
    progress = false;
    for (Node v = static_cast<Node>(p.tree.size()); v-- > 1;) {
      if (v == p.node || !p.tree.is_leaf(v)) continue;
      std::vector<std::string> labels;
      std::vector<std::int64_t> parent;
      for (Node u = 0; u < p.tree.size(); ++u) {
        if (u == v) continue;
        labels.push_back(p.tree.label(u));
        const std::int64_t par = p.tree.parent(u);
        parent.push_back(par > static_cast<std::int64_t>(v) ? par - 1 : par);
      }
      PointedTree smaller{LabeledTree(std::move(labels), std::move(parent), p.tree.ordered()),
                          p.node > v ? p.node - 1 : p.node};
      if (refutes(smaller, q1, q2, mode)) {
        p = std::move(smaller);
        progress = true;
        break;
      }
    }
  }
  return p;
}

}  // namespace

struct Decider::Impl {
  TreeMode mode;
  DecideOptions options;
  MsoCompiler compiler;

  Impl(TreeMode m, DecideOptions o) : mode(std::move(m)), options(o), compiler(mode.alphabet(), o.limits) {}

  // ψ(x) over Label, Fc and Ns.
  Formula base_formula(const DatalogQuery& q) {
    const Formula f = datalog_to_mso(q, mode.schema);
    if (mode.ordered) return axis_elim_ordered(f);
    return unordered_to_ordered(axis_elim_unordered(f));
  }

  // Looks for a node in [[q1]] \ [[q2]] (or [[q1]] when q2 is null).
  Verdict refute(const DatalogQuery& q1, const DatalogQuery* q2) {
    Formula phi = base_formula(q1);
    if (q2) phi = Formula::conjunction({phi, Formula::negation(base_formula(*q2))});

    std::optional<BinaryTree> w;
    try {
      w = witness(restrict_to_valid(compiler.compile(phi, {{"x", false}}), options.limits));
    } catch (const Error& e) {
      if (e.code() != ErrorCode::StateBudgetExceeded) throw;
      Verdict v;
      v.answer = Answer::Unknown;
      const DatalogQuery other = q2 ? *q2 : unsat_query(mode);
      v.evidence = bounded_counterexample_search(q1, other, mode, options.oracle_nodes);
      v.note = std::string(e.what()) + "; bounded search up to " + std::to_string(options.oracle_nodes) +
               " nodes " + (v.evidence ? "found a counterexample" : "found nothing");
      return v;
    }
    if (!w) return {Answer::Yes, std::nullopt, std::nullopt, ""};

    std::vector<Node> node_map;
    LabeledTree t = fcns_decode(*w, &node_map);
    const auto marked = std::find_if(w->nodes.begin(), w->nodes.end(), [](const BinaryNode& n) { return n.bits & 1; });
    PointedTree p{mode.ordered ? t : t.with_order(false), node_map[marked - w->nodes.begin()]};
    if (!refutes(p, q1, q2, mode)) {
      throw std::logic_error("automaton witness " + to_text(p.tree) + " at " + LabeledTree::node_name(p.node) +
                             " does not re-verify");
    }
    if (options.minimize_counterexamples) p = shrink(std::move(p), q1, q2, mode);
    return {Answer::No, std::move(p), std::nullopt, ""};
  }
};

Decider::Decider(TreeMode mode, DecideOptions options)
    : impl_(std::make_unique<Impl>(std::move(mode), options)) {}
Decider::~Decider() = default;
Decider::Decider(Decider&&) noexcept = default;
Decider& Decider::operator=(Decider&&) noexcept = default;

const TreeMode& Decider::mode() const noexcept { return impl_->mode; }

Verdict Decider::containment(const DatalogQuery& q1, const DatalogQuery& q2) { return impl_->refute(q1, &q2); }

Verdict Decider::equivalence(const DatalogQuery& q1, const DatalogQuery& q2) {
  Verdict forward = containment(q1, q2);
  if (forward.answer == Answer::No) {
    forward.note = "not contained in the second query";
    return forward;
  }
  Verdict backward = containment(q2, q1);
  if (backward.answer == Answer::No) {
    backward.note = "second query not contained in the first";
    return backward;
  }
  if (forward.answer == Answer::Unknown) return forward;
  return backward;
}

Verdict Decider::satisfiable(const DatalogQuery& q) {
  Verdict v = impl_->refute(q, nullptr);
  // Refuting emptiness means the query is satisfiable.
  if (v.answer == Answer::Yes) {
    v.answer = Answer::No;
  } else if (v.answer == Answer::No) {
    v.answer = Answer::Yes;
  }
  return v;
}

Verdict containment(const DatalogQuery& q1, const DatalogQuery& q2, const TreeMode& mode,
                    const DecideOptions& options) {
  return Decider(mode, options).containment(q1, q2);
}

Verdict equivalence(const DatalogQuery& q1, const DatalogQuery& q2, const TreeMode& mode,
                    const DecideOptions& options) {
  return Decider(mode, options).equivalence(q1, q2);
}

Verdict satisfiable(const DatalogQuery& q, const TreeMode& mode, const DecideOptions& options) {
  return Decider(mode, options).satisfiable(q);
}

}  // namespace treelog
