#pragma once

// Shared helpers for the test suites: random programs and formulas, plus
// brute-force reference implementations that do not go through the library's
// evaluators.

#include <cstdint>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "treelog/datalog.hpp"
#include "treelog/error.hpp"
#include "treelog/mso.hpp"
#include "treelog/mso_eval.hpp"
#include "treelog/structure.hpp"
#include "treelog/tree.hpp"

namespace treelog::testing {

using Rng = std::mt19937_64;

inline const char* kFig1 = "(Black (Black) (White (White) (Black)) (Black) (White (Black)) (Black))";

/// Path of a file under data/.
std::string data_path(const std::string& name);
std::string read_text(const std::string& path);

/// Relations computed straight from parent pointers and child lists.
std::set<Tuple> brute_relation(const LabeledTree& t, const std::string& name);

/// Least fixpoint by trying every valuation of every rule until nothing
/// changes.
FactSet brute_fixpoint(const DatalogProgram& p, const Structure& a);
std::set<Node> brute_query(const DatalogQuery& q, const Structure& a);

struct ProgramShape {
  std::size_t max_rules = 3;
  std::size_t max_idb = 2;
  std::size_t max_body = 3;
};

/// Random unary query valid for `schema`; the query predicate is P and the
/// second IDB (if any) is Q.
DatalogQuery random_query(Rng& rng, const Schema& schema, ProgramShape shape = {});

/// Random formula over Label_σ, Fc, Ns, = and membership with at most
/// `set_quantifiers` set quantifiers and `node_quantifiers` node quantifiers.
/// Free variables are drawn from x and X.
Formula random_formula(Rng& rng, const Alphabet& sigma, std::size_t set_quantifiers,
                       std::size_t node_quantifiers);

/// Calls `visit` with every assignment to the given free variables.
template <class F>
void for_each_assignment(std::size_t n, const FreeVariables& fv, F&& visit) {
  std::vector<std::string> nodes(fv.nodes.begin(), fv.nodes.end());
  std::vector<std::string> sets(fv.sets.begin(), fv.sets.end());
  std::vector<std::uint64_t> idx(nodes.size() + sets.size(), 0);
  std::vector<std::uint64_t> radix;
  for (std::size_t i = 0; i < nodes.size(); ++i) radix.push_back(n);
  for (std::size_t i = 0; i < sets.size(); ++i) radix.push_back(std::uint64_t{1} << n);
  while (true) {
    Assignment asg;
    for (std::size_t i = 0; i < nodes.size(); ++i) asg.nodes[nodes[i]] = static_cast<Node>(idx[i]);
    for (std::size_t i = 0; i < sets.size(); ++i) {
      std::set<Node> s;
      for (Node v = 0; v < n; ++v) {
        if (idx[nodes.size() + i] >> v & 1) s.insert(v);
      }
      asg.sets[sets[i]] = s;
    }
    visit(asg);
    std::size_t i = 0;
    for (; i < idx.size(); ++i) {
      if (++idx[i] < radix[i]) break;
      idx[i] = 0;
    }
    if (i == idx.size()) return;
  }
}

/// Textbook recursive evaluation with no preprocessing.
bool naive_eval(const Formula& f, const Structure& a, Assignment asg);

/// Code of the Error thrown by `f`, or nothing when `f` returns normally.
template <class F>
std::optional<ErrorCode> error_code(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

/// Maps every fact through `h`.
FactSet map_facts(const FactSet& facts, const std::vector<Node>& h);

bool subset(const FactSet& a, const FactSet& b);

}  // namespace treelog::testing
