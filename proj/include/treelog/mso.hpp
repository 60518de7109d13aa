#pragma once

#include <memory>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace treelog {

enum class FormulaKind {
  Relation,   // R(x1,...,xr)
  Equal,      // x = y
  Member,     // X(x)
  Not,
  And,        // n-ary, derived
  Or,         // n-ary
  Implies,    // derived
  Iff,        // derived
  Exists,     // node quantifiers
  Forall,
  ExistsSet,  // set quantifiers
  ForallSet,
};

/// Immutable MSO formula. Copies share structure.
///
/// Node variables start with a lowercase letter. Set variables are a single
/// uppercase letter optionally followed by digits or primes (X, X1, Y').
class Formula {
 public:
  // Atoms.
  static Formula relation(std::string name, std::vector<std::string> args);
  static Formula equal(std::string x, std::string y);
  static Formula member(std::string set, std::string x);
  // Connectives. And/Or with a single operand return that operand.
  static Formula negation(Formula f);
  static Formula conjunction(std::vector<Formula> fs);
  static Formula disjunction(std::vector<Formula> fs);
  static Formula implies(Formula a, Formula b);
  static Formula iff(Formula a, Formula b);
  static Formula not_equal(std::string x, std::string y);
  // Quantifiers.
  static Formula exists(std::string var, Formula body);
  static Formula forall(std::string var, Formula body);
  static Formula exists_set(std::string var, Formula body);
  static Formula forall_set(std::string var, Formula body);

  FormulaKind kind() const noexcept;
  /// Relation name, set variable of a Member atom, or quantified variable.
  const std::string& name() const noexcept;
  /// Arguments of Relation / Equal / Member atoms.
  const std::vector<std::string>& args() const noexcept;
  const std::vector<Formula>& children() const noexcept;
  const Formula& child(std::size_t i = 0) const { return children()[i]; }

  bool is_atom() const noexcept;
  bool is_quantifier() const noexcept;
  bool is_set_quantifier() const noexcept;

  /// Structural equality (no renaming).
  friend bool operator==(const Formula& a, const Formula& b);

 private:
  struct Data;
  explicit Formula(std::shared_ptr<const Data> d) : d_(std::move(d)) {}
  std::shared_ptr<const Data> d_;
};

bool is_set_variable_name(std::string_view name);
bool is_node_variable_name(std::string_view name);

struct FreeVariables {
  std::set<std::string> nodes;
  std::set<std::string> sets;

  bool empty() const { return nodes.empty() && sets.empty(); }
  friend bool operator==(const FreeVariables&, const FreeVariables&) = default;
};

FreeVariables free_vars(const Formula& f);

/// All variable names (free or bound) and relation names used.
std::set<std::string> variable_names(const Formula& f);
std::set<std::string> relation_names(const Formula& f);

/// Parses the text syntax: `E x. f`, `A x. f`, `E2 X. f`, `A2 X. f`, `~f`,
/// `f & g`, `f | g`, `f -> g`, `f <-> g`, `x = y`, `x != y`, `R(x,y)`, `X(x)`.
/// Precedence from tightest: `~`, `&`, `|`, `->` (right-assoc), `<->`;
/// quantifier bodies extend as far right as possible.
Formula parse_formula(std::string_view text);

/// Prints in the syntax accepted by parse_formula.
std::string to_text(const Formula& f);

/// Rewrites And, Implies, Iff and Forall/ForallSet into the ¬, ∨, ∃ core.
Formula normalize(const Formula& f);

/// Structural equality after normalization and bound-variable renaming.
bool alpha_equivalent(const Formula& a, const Formula& b);

/// Alpha-canonical text: bound variables renamed by binding order, free
/// variables by first occurrence. `free_order` receives the free variables in
/// that order when non-null.
std::string canonical_key(const Formula& f, std::vector<std::string>* free_order = nullptr);

/// ∀X1 … ∀Xm ∃x1 … ∃xk ξ with ξ quantifier-free.
bool is_pi1(const Formula& f);

/// Deepest nesting of set quantifiers along any path.
std::size_t set_quantifier_depth(const Formula& f);

/// Generates names not clashing with a reserved set.
class FreshNames {
 public:
  explicit FreshNames(std::set<std::string> reserved = {}) : used_(std::move(reserved)) {}

  void reserve(const std::set<std::string>& names) { used_.insert(names.begin(), names.end()); }
  /// `stem` must be a valid variable stem; digits are appended.
  std::string node(std::string_view stem = "u");
  std::string set(std::string_view stem = "Y");

 private:
  std::string next(std::string_view stem);
  std::set<std::string> used_;
  std::size_t counter_ = 0;
};

/// Simultaneous capture-avoiding substitution of free node variables.
/// Bound variables of `f` are renamed to fresh names first.
Formula substitute(const Formula& f, const std::vector<std::pair<std::string, std::string>>& map,
                   FreshNames& fresh);

/// Renames every bound variable to a fresh name.
Formula rename_bound(const Formula& f, FreshNames& fresh);

}  // namespace treelog
