#pragma once

#include <functional>
#include <string>
#include <string_view>
#include <vector>

#include "treelog/datalog.hpp"
#include "treelog/mso.hpp"

namespace treelog {

/// cl_ρ(X): X is closed under ρ-successors.
Formula closure(const std::string& set, const std::function<Formula(const std::string&, const std::string&)>& rho,
                FreshNames& fresh);

/// Axis formula for `relation` over the base schema (τ_o when `ordered`,
/// τ_u otherwise), with the given arguments free and all bound variables
/// drawn from `fresh`.
///
/// Ordered: Child, Desc, Root, Leaf, Ls and the auxiliary "Ns*".
/// Unordered: Desc, Is, Root, Leaf and the auxiliary "Child*".
/// Throws InvalidArgument for anything else.
Formula axis_formula(std::string_view relation, bool ordered, const std::vector<std::string>& args,
                     FreshNames& fresh);

/// ∀X1 … ∀Xm (χ → X1(x)) for a unary query; X1 is the query predicate and the
/// other IDB predicates follow in order of first appearance. Rule variables
/// become z1, z2, … and the free variable is x. An extensional query
/// predicate P yields P(x).
///
/// Throws NotValidated or NotUnary.
Formula datalog_to_mso(const DatalogQuery& q);

/// Same, validating against `schema`.
Formula datalog_to_mso(const DatalogQuery& q, const Schema& schema);

/// ∀X̄ ∃z̄ (X1(x) ∨ ⋁_r ¬((b1 ∧ … ∧ bn) → h)) for output of datalog_to_mso.
/// Formulas that are already Π₁ are returned unchanged. Throws WrongShape.
Formula to_prenex_pi1(const Formula& f);

/// Replaces Child, Desc, Root, Leaf and Ls atoms by their τ_o definitions.
Formula axis_elim_ordered(const Formula& f);

/// Replaces Desc, Is, Root and Leaf atoms by their τ_u definitions.
Formula axis_elim_unordered(const Formula& f);

/// Replaces Child atoms by the ordered definition so that a τ_u formula can
/// be evaluated over S_o(T).
Formula unordered_to_ordered(const Formula& f);

}  // namespace treelog
