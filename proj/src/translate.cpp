#include "treelog/translate.hpp"

#include <algorithm>
#include <map>
#include <optional>

#include "treelog/error.hpp"

namespace treelog {

namespace {

using Rho = std::function<Formula(const std::string&, const std::string&)>;

Formula rel2(std::string_view r, const std::string& a, const std::string& b) {
  return Formula::relation(std::string(r), {a, b});
}

// ∀X ((X(x) ∧ cl_ρ(X)) → X(y)): y is reachable from x by ρ-steps.
Formula reach(const std::string& x, const std::string& y, const Rho& rho, FreshNames& fresh) {
  const std::string set = fresh.set("X");
  return Formula::forall_set(
      set, Formula::implies(Formula::conjunction({Formula::member(set, x), closure(set, rho, fresh)}),
                            Formula::member(set, y)));
}

Formula ordered_root(const std::string& x, FreshNames& fresh) {
  const std::string y = fresh.node("y");
  return Formula::negation(Formula::exists(y, Formula::disjunction({rel2(rel::kFc, y, x), rel2(rel::kNs, y, x)})));
}

Formula ordered_child(const std::string& x, const std::string& y, FreshNames& fresh) {
  const std::string first = fresh.node("x");
  return Formula::exists(first,
                         Formula::conjunction({rel2(rel::kFc, x, first), axis_formula("Ns*", true, {first, y}, fresh)}));
}

Formula unordered_child_star(const std::string& x, const std::string& y, FreshNames& fresh) {
  return reach(x, y, [](const std::string& a, const std::string& b) { return rel2(rel::kChild, a, b); }, fresh);
}

void require_args(std::string_view relation, const std::vector<std::string>& args, std::size_t n) {
  if (args.size() != n) {
    throw Error(ErrorCode::InvalidArgument, "axis '" + std::string(relation) + "' takes " + std::to_string(n) +
                                                " arguments");
  }
}

Formula rewrite_atoms(const Formula& f, const std::function<std::optional<Formula>(const Formula&)>& atom_map) {
  using K = FormulaKind;
  switch (f.kind()) {
    case K::Relation: {
      auto replaced = atom_map(f);
      return replaced ? *replaced : f;
    }
    case K::Equal:
    case K::Member: return f;
    case K::Not: return Formula::negation(rewrite_atoms(f.child(), atom_map));
    case K::And:
    case K::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(rewrite_atoms(c, atom_map));
      return f.kind() == K::And ? Formula::conjunction(std::move(parts)) : Formula::disjunction(std::move(parts));
    }
    case K::Implies: return Formula::implies(rewrite_atoms(f.child(0), atom_map), rewrite_atoms(f.child(1), atom_map));
    case K::Iff: return Formula::iff(rewrite_atoms(f.child(0), atom_map), rewrite_atoms(f.child(1), atom_map));
    case K::Exists: return Formula::exists(f.name(), rewrite_atoms(f.child(), atom_map));
    case K::Forall: return Formula::forall(f.name(), rewrite_atoms(f.child(), atom_map));
    case K::ExistsSet: return Formula::exists_set(f.name(), rewrite_atoms(f.child(), atom_map));
    case K::ForallSet: return Formula::forall_set(f.name(), rewrite_atoms(f.child(), atom_map));
  }
  return f;
}

Formula eliminate(const Formula& f, bool ordered, std::initializer_list<std::string_view> axes) {
  FreshNames fresh;
  fresh.reserve(variable_names(f));
  return rewrite_atoms(f, [&](const Formula& atom) -> std::optional<Formula> {
    if (std::find(axes.begin(), axes.end(), atom.name()) == axes.end()) return std::nullopt;
    return axis_formula(atom.name(), ordered, atom.args(), fresh);
  });
}

}  // namespace

Formula closure(const std::string& set, const Rho& rho, FreshNames& fresh) {
  const std::string u = fresh.node("u");
  const std::string w = fresh.node("w");
  return Formula::forall(
      u, Formula::forall(w, Formula::implies(Formula::conjunction({Formula::member(set, u), rho(u, w)}),
                                             Formula::member(set, w))));
}

Formula axis_formula(std::string_view relation, bool ordered, const std::vector<std::string>& args,
                     FreshNames& fresh) {
  fresh.reserve(std::set<std::string>(args.begin(), args.end()));
  if (ordered) {
    if (relation == rel::kRoot) {
      require_args(relation, args, 1);
      return ordered_root(args[0], fresh);
    }
    if (relation == rel::kLeaf) {
      require_args(relation, args, 1);
      const std::string y = fresh.node("y");
      return Formula::negation(Formula::exists(y, rel2(rel::kFc, args[0], y)));
    }
    if (relation == rel::kLs) {
      require_args(relation, args, 1);
      const std::string y = fresh.node("y");
      return Formula::conjunction({Formula::negation(Formula::exists(y, rel2(rel::kNs, args[0], y))),
                                   Formula::negation(ordered_root(args[0], fresh))});
    }
    if (relation == "Ns*") {
      require_args(relation, args, 2);
      return reach(args[0], args[1], [](const std::string& a, const std::string& b) { return rel2(rel::kNs, a, b); },
                   fresh);
    }
    if (relation == rel::kChild) {
      require_args(relation, args, 2);
      return ordered_child(args[0], args[1], fresh);
    }
    if (relation == rel::kDesc) {
      require_args(relation, args, 2);
      return Formula::conjunction(
          {Formula::not_equal(args[0], args[1]),
           reach(args[0], args[1],
                 [&fresh](const std::string& a, const std::string& b) { return ordered_child(a, b, fresh); }, fresh)});
    }
  } else {
    if (relation == rel::kRoot) {
      require_args(relation, args, 1);
      const std::string y = fresh.node("y");
      return Formula::negation(Formula::exists(y, rel2(rel::kChild, y, args[0])));
    }
    if (relation == rel::kLeaf) {
      require_args(relation, args, 1);
      const std::string y = fresh.node("y");
      return Formula::negation(Formula::exists(y, rel2(rel::kChild, args[0], y)));
    }
    if (relation == rel::kIs) {
      require_args(relation, args, 2);
      const std::string u = fresh.node("u");
      return Formula::conjunction(
          {Formula::not_equal(args[0], args[1]),
           Formula::exists(u, Formula::conjunction({rel2(rel::kChild, u, args[0]), rel2(rel::kChild, u, args[1])}))});
    }
    if (relation == "Child*") {
      require_args(relation, args, 2);
      return unordered_child_star(args[0], args[1], fresh);
    }
    if (relation == rel::kDesc) {
      require_args(relation, args, 2);
      return Formula::conjunction(
          {Formula::not_equal(args[0], args[1]), unordered_child_star(args[0], args[1], fresh)});
    }
  }
  throw Error(ErrorCode::InvalidArgument, "no " + std::string(ordered ? "ordered" : "unordered") +
                                              " axis formula for '" + std::string(relation) + "'");
}

// ---------------------------------------------------------------------------

namespace {

Formula translate_validated(const DatalogQuery& q) {
  const auto& p = q.program;
  if (p.arity_of(q.predicate) != 1) {
    throw Error(ErrorCode::NotUnary, "query predicate '" + q.predicate + "' is not unary");
  }
  if (!p.is_idb(q.predicate)) return Formula::relation(q.predicate, {"x"});

  std::vector<std::string> idb{q.predicate};
  for (const auto& h : p.idb()) {
    if (h != q.predicate) idb.push_back(h);
  }
  std::map<std::string, std::string> set_of;
  for (std::size_t i = 0; i < idb.size(); ++i) set_of[idb[i]] = "X" + std::to_string(i + 1);

  std::size_t next_var = 0;
  std::vector<Formula> rules;
  for (const auto& r : p.rules()) {
    std::map<std::string, std::string> rename;
    std::vector<std::string> order;
    for (const auto& v : r.variables()) {
      rename[v] = "z" + std::to_string(++next_var);
      order.push_back(rename[v]);
    }
    auto atom = [&](const DatalogAtom& a) {
      std::vector<std::string> args;
      for (const auto& v : a.args) args.push_back(rename.at(v));
      if (auto it = set_of.find(a.predicate); it != set_of.end()) return Formula::member(it->second, args[0]);
      return Formula::relation(a.predicate, std::move(args));
    };
    std::vector<Formula> body;
    for (const auto& b : r.body) body.push_back(atom(b));
    Formula psi = Formula::implies(Formula::conjunction(std::move(body)), atom(r.head));
    for (auto it = order.rbegin(); it != order.rend(); ++it) psi = Formula::forall(*it, psi);
    rules.push_back(psi);
  }
  Formula out = Formula::implies(Formula::conjunction(std::move(rules)), Formula::member("X1", "x"));
  for (auto it = idb.rbegin(); it != idb.rend(); ++it) out = Formula::forall_set(set_of[*it], out);
  return out;
}

bool quantifier_free(const Formula& f) {
  if (f.is_quantifier()) return false;
  return std::all_of(f.children().begin(), f.children().end(), quantifier_free);
}

[[noreturn]] void reject(const std::vector<Violation>& violations) {
  std::string msg = "query does not validate:";
  for (const auto& v : violations) msg += " " + v.message + ";";
  throw Error(ErrorCode::NotValidated, msg);
}

}  // namespace

Formula datalog_to_mso(const DatalogQuery& q) {
  if (auto v = validate(q, inferred_schema(q.program)); !v.empty()) reject(v);
  return translate_validated(q);
}

Formula datalog_to_mso(const DatalogQuery& q, const Schema& schema) {
  if (auto v = validate(q, schema); !v.empty()) reject(v);
  return translate_validated(q);
}

Formula to_prenex_pi1(const Formula& f) {
  if (is_pi1(f)) return f;
  auto wrong = [](const std::string& why) { return Error(ErrorCode::WrongShape, "not a translated query: " + why); };

  std::vector<std::string> sets;
  const Formula* cur = &f;
  while (cur->kind() == FormulaKind::ForallSet) {
    sets.push_back(cur->name());
    cur = &cur->child();
  }
  if (sets.empty() || cur->kind() != FormulaKind::Implies) throw wrong("expected ∀X̄ (χ → X1(x))");
  const Formula& goal = cur->child(1);
  if (goal.kind() != FormulaKind::Member) throw wrong("conclusion is not a membership atom");
  const Formula& chi = cur->child(0);
  std::vector<Formula> rules =
      chi.kind() == FormulaKind::And ? chi.children() : std::vector<Formula>{chi};

  FreshNames fresh;
  fresh.reserve(variable_names(f));
  std::set<std::string> taken{goal.args()[0]};
  std::vector<std::string> prefix;
  std::vector<Formula> disjuncts{goal};
  for (const Formula& rule : rules) {
    std::vector<std::pair<std::string, std::string>> renaming;
    const Formula* r = &rule;
    while (r->kind() == FormulaKind::Forall) {
      std::string name = r->name();
      if (!taken.insert(name).second) {
        const std::string fresh_name = fresh.node("z");
        renaming.emplace_back(name, fresh_name);
        name = fresh_name;
        taken.insert(name);
      }
      prefix.push_back(name);
      r = &r->child();
    }
    if (r->kind() != FormulaKind::Implies) throw wrong("rule formula is not an implication");
    if (!quantifier_free(*r)) throw wrong("rule formula is not quantifier-free under its prefix");
    Formula matrix = renaming.empty() ? *r : substitute(*r, renaming, fresh);
    disjuncts.push_back(Formula::negation(matrix));
  }

  Formula out = Formula::disjunction(std::move(disjuncts));
  for (auto it = prefix.rbegin(); it != prefix.rend(); ++it) out = Formula::exists(*it, out);
  for (auto it = sets.rbegin(); it != sets.rend(); ++it) out = Formula::forall_set(*it, out);
  return out;
}

Formula axis_elim_ordered(const Formula& f) {
  return eliminate(f, true, {rel::kChild, rel::kDesc, rel::kRoot, rel::kLeaf, rel::kLs});
}

Formula axis_elim_unordered(const Formula& f) {
  return eliminate(f, false, {rel::kDesc, rel::kIs, rel::kRoot, rel::kLeaf});
}

Formula unordered_to_ordered(const Formula& f) { return eliminate(f, true, {rel::kChild}); }

}  // namespace treelog
