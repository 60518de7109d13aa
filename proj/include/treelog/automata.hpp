#pragma once

#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "treelog/mso.hpp"
#include "treelog/mso_eval.hpp"
#include "treelog/tree.hpp"

namespace treelog {

/// Binary tree over Σ × {0,1}^k. Left edges are first-child edges, right
/// edges next-sibling edges. Bit i of `bits` belongs to track i.
struct BinaryNode {
  std::string label;
  std::uint32_t bits = 0;
  std::int32_t left = -1;
  std::int32_t right = -1;

  friend bool operator==(const BinaryNode&, const BinaryNode&) = default;
};

struct BinaryTree {
  std::vector<BinaryNode> nodes;
  std::int32_t root = 0;

  friend bool operator==(const BinaryTree&, const BinaryTree&) = default;
};

/// First-child/next-sibling encoding using the stored child order. Node i of
/// the result is node i of `t`.
BinaryTree fcns_encode(const LabeledTree& t);

/// Inverse of fcns_encode. Throws NotASingleTree if the root has a right
/// child. `node_map`, when given, receives the tree node of every binary node.
LabeledTree fcns_decode(const BinaryTree& b, std::vector<Node>* node_map = nullptr);

/// A variable carried as one bit per node.
struct Track {
  std::string name;
  bool is_set = false;

  friend bool operator==(const Track&, const Track&) = default;
};

/// Sets the bits of `b` (an encoding of a tree whose node ids match) for the
/// given tracks. Throws UnboundVariable if a track has no value.
BinaryTree annotate(const BinaryTree& b, const std::vector<Track>& tracks, const Assignment& asg);

struct AutomatonLimits {
  std::size_t state_budget = 2'000'000;
  /// Cap on transition-table cells, (states + 1)² · |symbols|.
  std::size_t cell_budget = std::size_t{1} << 26;
};

/// Complete deterministic bottom-up automaton over binary trees with symbols
/// Σ × {0,1}^k. A missing child is read as the slot `kAbsent`; state q
/// occupies slot q + 1. A tree is accepted iff the state at its root is
/// accepting.
class TreeAutomaton {
 public:
  static constexpr std::uint32_t kAbsent = 0;

  TreeAutomaton(Alphabet sigma, std::vector<Track> tracks, std::size_t states, std::vector<std::uint32_t> delta,
                std::vector<bool> accepting);

  /// One-state automaton accepting everything or nothing.
  static TreeAutomaton constant(Alphabet sigma, std::vector<Track> tracks, bool value);

  const Alphabet& alphabet() const noexcept { return sigma_; }
  const std::vector<Track>& tracks() const noexcept { return tracks_; }
  std::size_t num_states() const noexcept { return states_; }
  std::size_t num_symbols() const noexcept { return symbols_; }
  bool deterministic() const noexcept { return true; }

  std::uint32_t symbol(std::size_t label, std::uint32_t bits) const {
    return static_cast<std::uint32_t>((label << tracks_.size()) | bits);
  }
  /// Target state for child slots `left`, `right` and a symbol.
  std::uint32_t next(std::uint32_t left, std::uint32_t right, std::uint32_t sym) const {
    return delta_[(static_cast<std::size_t>(left) * (states_ + 1) + right) * symbols_ + sym];
  }
  bool accepting(std::uint32_t q) const { return accepting_[q]; }
  const std::vector<bool>& accepting_states() const noexcept { return accepting_; }

  /// Index of the track called `name`, or -1.
  int track_index(std::string_view name) const;

  /// Same automaton with tracks renamed position by position.
  TreeAutomaton renamed(const std::vector<std::string>& names) const;

 private:
  Alphabet sigma_;
  std::vector<Track> tracks_;
  std::size_t states_;
  std::size_t symbols_;
  std::vector<std::uint32_t> delta_;
  std::vector<bool> accepting_;
};

/// Language-wise boolean combination; both automata must have equal
/// alphabets and tracks (see align). Throws AlphabetMismatch.
TreeAutomaton product(const TreeAutomaton& a, const TreeAutomaton& b, const std::function<bool(bool, bool)>& op,
                      const AutomatonLimits& limits = {});

TreeAutomaton complement(const TreeAutomaton& a);

/// Reorders and extends tracks; `tracks` must contain every track of `a`.
/// New tracks are ignored by the result.
TreeAutomaton align(const TreeAutomaton& a, const std::vector<Track>& tracks, const AutomatonLimits& limits = {});

/// Existential projection of one track, determinized by subset construction.
/// A node-variable track must carry exactly one marked node for a tree to
/// count as a witness.
TreeAutomaton project(const TreeAutomaton& a, std::string_view track, const AutomatonLimits& limits = {});

/// Intersects with the constraint that every node track marks exactly one
/// node.
TreeAutomaton restrict_to_valid(const TreeAutomaton& a, const AutomatonLimits& limits = {});

/// Merges states with equal future behaviour.
TreeAutomaton minimize(const TreeAutomaton& a);

/// Throws AlphabetMismatch for unknown labels or bits beyond the tracks.
bool run(const TreeAutomaton& a, const BinaryTree& b);

/// A minimal-height accepted tree whose root has no right child (the
/// encoding of a single unranked tree), or nothing.
std::optional<BinaryTree> witness(const TreeAutomaton& a);

bool is_empty(const TreeAutomaton& a);

/// States, accepting set and one `(l, r, sym) -> q` line per transition.
std::string dump(const TreeAutomaton& a);

/// Compiles MSO formulas over Label_σ, Fc, Ns, equality and membership.
/// Results are cached up to renaming of variables.
class MsoCompiler {
 public:
  explicit MsoCompiler(Alphabet sigma, AutomatonLimits limits = {});
  ~MsoCompiler();

  /// Automaton over exactly `tracks`, which must include free_vars(f).
  /// Throws UnsupportedAtom, StateBudgetExceeded or InvalidArgument.
  TreeAutomaton compile(const Formula& f, const std::vector<Track>& tracks);

  /// Tracks are the free variables, sorted by name.
  TreeAutomaton compile(const Formula& f);

  const Alphabet& alphabet() const noexcept;
  std::size_t cache_size() const noexcept;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

/// Free variables of `f` as tracks, sorted by name.
std::vector<Track> tracks_of(const Formula& f);

}  // namespace treelog
