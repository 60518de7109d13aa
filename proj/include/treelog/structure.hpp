#pragma once

#include <compare>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "treelog/tree.hpp"

namespace treelog {

using Tuple = std::vector<Node>;

/// Names of the tree relations. Labels are `Label_<symbol>`.
namespace rel {
inline constexpr std::string_view kChild = "Child";
inline constexpr std::string_view kDesc = "Desc";
inline constexpr std::string_view kIs = "Is";
inline constexpr std::string_view kRoot = "Root";
inline constexpr std::string_view kLeaf = "Leaf";
inline constexpr std::string_view kFc = "Fc";
inline constexpr std::string_view kNs = "Ns";
inline constexpr std::string_view kLs = "Ls";
inline constexpr std::string_view kLabelPrefix = "Label_";

std::string label(std::string_view symbol);
/// True for `Label_<something>`.
bool is_label(std::string_view name);
/// The symbol part of a label relation name.
std::string label_symbol(std::string_view name);
}  // namespace rel

/// Finite relational signature: relation symbols with arities.
class Schema {
 public:
  Schema() = default;
  explicit Schema(std::map<std::string, int, std::less<>> arities);

  /// τ_u^M for M ⊆ {Desc, Is, Root, Leaf}.
  static Schema unordered(const Alphabet& sigma, const std::set<std::string>& extra = {});
  /// τ_o^M for M ⊆ {Child, Desc, Root, Leaf, Ls}.
  static Schema ordered(const Alphabet& sigma, const std::set<std::string>& extra = {});
  static Schema unordered_prime(const Alphabet& sigma);
  static Schema ordered_prime(const Alphabet& sigma);
  static Schema gottlob_koch(const Alphabet& sigma);

  bool contains(std::string_view symbol) const { return arities_.find(symbol) != arities_.end(); }
  /// Arity of `symbol`; throws UnknownSymbol.
  int arity(std::string_view symbol) const;
  const std::map<std::string, int, std::less<>>& symbols() const noexcept { return arities_; }

  /// Σ recovered from the Label_ symbols, in name order.
  Alphabet alphabet() const;
  /// True when the schema mentions Fc, Ns or Ls.
  bool needs_order() const;

  bool is_subschema_of(const Schema& other) const;
  Schema with(std::string_view symbol, int arity) const;
  Schema without(std::string_view symbol) const;

  friend bool operator==(const Schema&, const Schema&) = default;

 private:
  std::map<std::string, int, std::less<>> arities_;
};

/// A ground atom R(a1,...,ar).
struct Fact {
  std::string predicate;
  Tuple args;

  friend auto operator<=>(const Fact&, const Fact&) = default;
  friend bool operator==(const Fact&, const Fact&) = default;
};

using FactSet = std::set<Fact>;

std::string to_string(const Fact& fact, const std::vector<std::string>& names = {});

/// Finite relational structure over a schema; domain elements are 0..size-1.
class Structure {
 public:
  Structure(Schema schema, std::vector<std::string> element_names);

  const Schema& schema() const noexcept { return schema_; }
  std::size_t size() const noexcept { return names_.size(); }
  const std::vector<std::string>& names() const noexcept { return names_; }
  const std::string& name(Node v) const { return names_[v]; }

  /// Inserts a tuple; throws UnknownSymbol / DomainError on mismatch.
  void add(std::string_view relation, Tuple tuple);
  const std::set<Tuple>& relation(std::string_view name) const;
  bool contains(std::string_view name, const Tuple& tuple) const;

  friend bool operator==(const Structure&, const Structure&) = default;

 private:
  Schema schema_;
  std::vector<std::string> names_;
  std::map<std::string, std::set<Tuple>, std::less<>> relations_;
};

/// Materializes S_u^M(t) or S_o^M(t) for the schema's symbols.
Structure build_structure(const LabeledTree& t, const Schema& s);

/// One ground atom per tuple per relation.
FactSet atoms(const Structure& a);

/// Restriction to a subschema; throws NotASubschema.
Structure reduct(const Structure& a, const Schema& s);

}  // namespace treelog
