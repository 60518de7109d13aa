#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <set>
#include <string>

#include "treelog/mso.hpp"
#include "treelog/structure.hpp"

namespace treelog {

/// Values for free variables.
struct Assignment {
  std::map<std::string, Node> nodes;
  std::map<std::string, std::set<Node>> sets;
};

struct EvalOptions {
  /// Refuse evaluation when 2^(set-quantifier nesting · |A|) exceeds this.
  std::uint64_t budget = std::uint64_t{1} << 26;
};

/// A formula prepared for repeated evaluation over many structures.
///
/// Preparation puts the formula in negation normal form, pushes quantifiers
/// inward and orders conjuncts so cheap atoms are tried first.
class MsoEvaluator {
 public:
  explicit MsoEvaluator(const Formula& f, EvalOptions options = {});
  ~MsoEvaluator();
  MsoEvaluator(MsoEvaluator&&) noexcept;
  MsoEvaluator& operator=(MsoEvaluator&&) noexcept;

  /// Throws UnboundVariable, UnknownSymbol, DomainError or BudgetExceeded.
  bool holds(const Structure& a, const Assignment& asg) const;

  /// Nodes satisfying a formula with exactly one free node variable and no
  /// free set variables; throws WrongFreeVariableShape otherwise.
  std::set<Node> select(const Structure& a) const;

  struct Impl;

 private:
  std::unique_ptr<Impl> impl_;
};

bool evaluate(const Formula& f, const Structure& a, const Assignment& asg, EvalOptions options = {});

std::set<Node> evaluate_unary(const Formula& f, const Structure& a, EvalOptions options = {});

}  // namespace treelog
