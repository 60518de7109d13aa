#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace treelog {

/// Index of a node inside a tree or structure domain.
using Node = std::uint32_t;

/// A finite, non-empty, ordered list of label symbols.
class Alphabet {
 public:
  Alphabet() = default;
  explicit Alphabet(std::vector<std::string> symbols);

  std::size_t size() const noexcept { return symbols_.size(); }
  bool empty() const noexcept { return symbols_.empty(); }
  const std::string& operator[](std::size_t i) const { return symbols_[i]; }
  const std::vector<std::string>& symbols() const noexcept { return symbols_; }

  bool contains(std::string_view symbol) const;
  /// Position of `symbol`; throws UnknownLabel if absent.
  std::size_t index_of(std::string_view symbol) const;

  friend bool operator==(const Alphabet&, const Alphabet&) = default;

 private:
  std::vector<std::string> symbols_;
};

/// Node-labeled unranked tree, optionally carrying a sibling order.
///
/// Nodes are numbered 0..size()-1; node 0 is always the root and numbering is
/// breadth-first, children in stored order. For unordered trees the stored
/// child order carries no meaning.
class LabeledTree {
 public:
  /// Builds a tree from a parent array (`kNoParent` for the root) and labels.
  /// Throws InvalidTree unless the array describes exactly one rooted tree.
  /// Child order is taken from increasing node index; ids are renumbered
  /// breadth-first when the input is not already in that form.
  LabeledTree(std::vector<std::string> labels, std::vector<std::int64_t> parent,
              bool ordered);

  static constexpr std::int64_t kNoParent = -1;

  std::size_t size() const noexcept { return labels_.size(); }
  bool ordered() const noexcept { return ordered_; }
  Node root() const noexcept { return 0; }

  const std::string& label(Node v) const { return labels_[v]; }
  const std::vector<std::string>& labels() const noexcept { return labels_; }
  std::int64_t parent(Node v) const { return parent_[v]; }
  std::span<const Node> children(Node v) const { return children_[v]; }
  bool is_leaf(Node v) const { return children_[v].empty(); }

  /// Same nodes and edges, order flag changed.
  LabeledTree with_order(bool ordered) const;

  /// Canonical serialization. Unordered trees sort child subtrees, so two
  /// unordered trees are isomorphic iff their canonical forms agree.
  std::string canonical_form() const;

  /// Node identifier as printed in reports (`v<i>`).
  static std::string node_name(Node v);

  friend bool operator==(const LabeledTree& a, const LabeledTree& b) {
    return a.ordered_ == b.ordered_ && a.labels_ == b.labels_ &&
           a.parent_ == b.parent_;
  }

 private:
  LabeledTree() = default;
  void rebuild_children();

  std::vector<std::string> labels_;
  std::vector<std::int64_t> parent_;
  std::vector<std::vector<Node>> children_;
  bool ordered_ = false;
};

/// Parses `node ::= '(' label { node } ')'`. Child order in the text becomes
/// the tree order when `ordered` is set.
LabeledTree parse_tree(std::string_view text, bool ordered);

/// Inverse of parse_tree for the stored child order.
std::string to_text(const LabeledTree& tree);

/// Calls `visit` once per Σ-labeled tree with at most `max_nodes` nodes, up to
/// isomorphism (order-preserving isomorphism when `ordered`). Trees come in
/// increasing size, then increasing canonical form. Returning false from
/// `visit` stops the enumeration.
void for_each_tree(const Alphabet& sigma, std::size_t max_nodes, bool ordered,
                   const std::function<bool(const LabeledTree&)>& visit);

std::vector<LabeledTree> enumerate_trees(const Alphabet& sigma,
                                         std::size_t max_nodes, bool ordered);

}  // namespace treelog
