#pragma once

#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "treelog/structure.hpp"

namespace treelog {

/// P(x1,...,xm) with variables only; repeated variables are allowed.
struct DatalogAtom {
  std::string predicate;
  std::vector<std::string> args;

  friend bool operator==(const DatalogAtom&, const DatalogAtom&) = default;
};

/// head <- body. Empty bodies are representable so validate() can reject them.
struct DatalogRule {
  DatalogAtom head;
  std::vector<DatalogAtom> body;

  /// Variables in order of first occurrence (head first).
  std::vector<std::string> variables() const;

  friend bool operator==(const DatalogRule&, const DatalogRule&) = default;
};

class DatalogProgram {
 public:
  DatalogProgram() = default;
  explicit DatalogProgram(std::vector<DatalogRule> rules) : rules_(std::move(rules)) {}

  const std::vector<DatalogRule>& rules() const noexcept { return rules_; }
  void add_rule(DatalogRule r) { rules_.push_back(std::move(r)); }

  /// Head predicates in order of first appearance.
  std::vector<std::string> idb() const;
  /// Body-only predicates in order of first appearance.
  std::vector<std::string> edb() const;
  bool is_idb(std::string_view predicate) const;
  /// Arity as used in the program, or -1 when the predicate does not occur.
  int arity_of(std::string_view predicate) const;

  friend bool operator==(const DatalogProgram&, const DatalogProgram&) = default;

 private:
  std::vector<DatalogRule> rules_;
};

struct DatalogQuery {
  DatalogProgram program;
  std::string predicate;
};

/// Parses `head '<-' atom (',' atom)* '.'` rules with `%` comments.
/// Throws SyntaxError, or an Error with code SafetyError for unsafe rules.
DatalogProgram parse_program(std::string_view text);

/// Like parse_program, plus an optional trailing `query: <predicate>` line.
/// Without it the head of the first rule is the query predicate.
DatalogQuery parse_query(std::string_view text);

std::string to_text(const DatalogRule& rule);
std::string to_text(const DatalogProgram& program);
std::string to_text(const DatalogQuery& query);

enum class ViolationKind { Unsafe, EmptyBody, NotMonadic, NotInSchema, ArityMismatch, NoQueryPredicate };

struct Violation {
  ViolationKind kind;
  std::string message;
};

/// Safety, monadic IDBs, edb(P) ⊆ schema, and consistent arities. Never throws.
std::vector<Violation> validate(const DatalogProgram& p, const Schema& s);
/// As above, plus the query predicate must occur in the program.
std::vector<Violation> validate(const DatalogQuery& q, const Schema& s);

/// Schema inferred from the program's own extensional predicates.
Schema inferred_schema(const DatalogProgram& p);

/// One application of T_P. Throws DomainError for facts outside F_{P,A}.
FactSet immediate_consequence(const DatalogProgram& p, const FactSet& c, std::size_t domain_size);

enum class FixpointStrategy { SemiNaive, Naive };

/// Least fixpoint of T_P containing atoms(a). Throws NotValidated when the
/// program does not validate against the structure's schema.
FactSet fixpoint(const DatalogProgram& p, const Structure& a,
                 FixpointStrategy strategy = FixpointStrategy::SemiNaive);

/// [[Q]](A) as a set of k-tuples.
std::set<Tuple> evaluate_query(const DatalogQuery& q, const Structure& a,
                               FixpointStrategy strategy = FixpointStrategy::SemiNaive);

/// [[Q]](A) for a unary query, as a node set.
std::set<Node> evaluate_unary_query(const DatalogQuery& q, const Structure& a);

/// `(P{rule,rule,...})` with variables renamed x0,x1,... per rule.
std::string canonical_text(const DatalogQuery& q);

/// Length of canonical_text over the alphabet where each predicate, variable
/// letter, digit, bracket, comma and arrow is one symbol.
std::size_t query_size(const DatalogQuery& q);

/// True iff `h` maps every tuple of every relation of `a` into `b`.
bool check_homomorphism(const std::vector<Node>& h, const Structure& a, const Structure& b);

}  // namespace treelog
