#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <string>

#include "treelog/automata.hpp"
#include "treelog/datalog.hpp"
#include "treelog/structure.hpp"
#include "treelog/tree.hpp"

namespace treelog {

/// Trees of one kind plus the schema queries are written against. The
/// alphabet is taken from the schema's label relations.
struct TreeMode {
  bool ordered = false;
  Schema schema;

  /// τ'_u over `sigma`.
  static TreeMode unordered(const Alphabet& sigma);
  /// τ'_o over `sigma`.
  static TreeMode ordered_trees(const Alphabet& sigma);

  /// Σ of the schema, or {a} when it has no labels.
  Alphabet alphabet() const;
  /// S(T) for a tree of this mode.
  Structure structure(const LabeledTree& t) const;
};

/// A tree with a designated node.
struct PointedTree {
  LabeledTree tree;
  Node node = 0;
};

enum class Answer { Yes, No, Unknown };

std::string_view to_string(Answer a);

struct Verdict {
  Answer answer = Answer::Unknown;
  /// Counterexample for a failed containment or equivalence, witness for a
  /// satisfiable query.
  std::optional<PointedTree> counterexample;
  /// For Unknown: whatever the bounded search found (possibly nothing).
  std::optional<PointedTree> evidence;
  std::string note;
};

struct DecideOptions {
  AutomatonLimits limits;
  /// Tree size searched by the fallback oracle when the automata run out of
  /// budget.
  std::size_t oracle_nodes = 5;
  bool minimize_counterexamples = true;
};

/// P(x) <- Child(x,x), or Fc(x,x) when the schema has no Child.
DatalogQuery unsat_query(const TreeMode& mode);

/// Holds the automaton cache shared across calls in one mode.
class Decider {
 public:
  explicit Decider(TreeMode mode, DecideOptions options = {});
  ~Decider();
  Decider(Decider&&) noexcept;
  Decider& operator=(Decider&&) noexcept;

  const TreeMode& mode() const noexcept;

  /// Throws NotUnary or NotValidated.
  Verdict containment(const DatalogQuery& q1, const DatalogQuery& q2);
  Verdict equivalence(const DatalogQuery& q1, const DatalogQuery& q2);
  Verdict satisfiable(const DatalogQuery& q);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

Verdict containment(const DatalogQuery& q1, const DatalogQuery& q2, const TreeMode& mode,
                    const DecideOptions& options = {});
Verdict equivalence(const DatalogQuery& q1, const DatalogQuery& q2, const TreeMode& mode,
                    const DecideOptions& options = {});
Verdict satisfiable(const DatalogQuery& q, const TreeMode& mode, const DecideOptions& options = {});

/// First node in [[q1]] \ [[q2]] over all trees of the mode with at most
/// `max_nodes` nodes, in enumeration order. Uses fixpoint evaluation only.
std::optional<PointedTree> bounded_counterexample_search(const DatalogQuery& q1, const DatalogQuery& q2,
                                                         const TreeMode& mode, std::size_t max_nodes);

/// True iff `node` is in [[q1]](S(tree)) and, when given, not in [[q2]].
bool refutes(const PointedTree& p, const DatalogQuery& q1, const DatalogQuery* q2, const TreeMode& mode);

}  // namespace treelog
