#include "support.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace treelog::testing {

std::string data_path(const std::string& name) { return std::string(TREELOG_DATA_DIR) + "/" + name; }

std::string read_text(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

std::set<Tuple> brute_relation(const LabeledTree& t, const std::string& name) {
  const auto n = static_cast<Node>(t.size());
  std::set<Tuple> out;
  auto parent_of = [&](Node v) { return t.parent(v); };
  auto is_ancestor = [&](Node a, Node d) {
    for (std::int64_t p = parent_of(d); p >= 0; p = parent_of(static_cast<Node>(p))) {
      if (p == a) return true;
    }
    return false;
  };
  for (Node u = 0; u < n; ++u) {
    const auto kids = t.children(u);
    if (name == "Root" && parent_of(u) < 0) out.insert({u});
    if (name == "Leaf" && kids.empty()) out.insert({u});
    if (name == "Ls" && !kids.empty()) out.insert({kids.back()});
    if (name == "Fc" && !kids.empty()) out.insert({u, kids.front()});
    if (name == "Ns") {
      for (std::size_t i = 0; i + 1 < kids.size(); ++i) out.insert({kids[i], kids[i + 1]});
    }
    if (rel::is_label(name) && t.label(u) == rel::label_symbol(name)) out.insert({u});
    for (Node v = 0; v < n; ++v) {
      if (name == "Child" && parent_of(v) == u) out.insert({u, v});
      if (name == "Desc" && is_ancestor(u, v)) out.insert({u, v});
      if (name == "Is" && u != v && parent_of(u) >= 0 && parent_of(u) == parent_of(v)) out.insert({u, v});
    }
  }
  return out;
}

FactSet brute_fixpoint(const DatalogProgram& p, const Structure& a) {
  FactSet facts = atoms(a);
  const auto n = static_cast<Node>(a.size());
  for (bool changed = true; changed;) {
    changed = false;
    for (const DatalogRule& r : p.rules()) {
      const std::vector<std::string> vars = r.variables();
      std::vector<Node> val(vars.size(), 0);
      auto value = [&](const std::string& v) {
        return val[std::find(vars.begin(), vars.end(), v) - vars.begin()];
      };
      auto ground = [&](const DatalogAtom& at) {
        Fact f{at.predicate, {}};
        for (const auto& v : at.args) f.args.push_back(value(v));
        return f;
      };
      while (true) {
        const bool fires = std::all_of(r.body.begin(), r.body.end(),
                                       [&](const DatalogAtom& b) { return facts.count(ground(b)) > 0; });
        if (fires && facts.insert(ground(r.head)).second) changed = true;
        std::size_t i = 0;
        for (; i < val.size(); ++i) {
          if (++val[i] < n) break;
          val[i] = 0;
        }
        if (i == val.size()) break;
      }
    }
  }
  return facts;
}

std::set<Node> brute_query(const DatalogQuery& q, const Structure& a) {
  std::set<Node> out;
  for (const Fact& f : brute_fixpoint(q.program, a)) {
    if (f.predicate == q.predicate) out.insert(f.args[0]);
  }
  return out;
}

DatalogQuery random_query(Rng& rng, const Schema& schema, ProgramShape shape) {
  std::vector<std::pair<std::string, int>> edb(schema.symbols().begin(), schema.symbols().end());
  const std::vector<std::string> pool{"x", "y", "z"};
  auto pick = [&](std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); };
  while (true) {
    const std::size_t rules = 1 + pick(shape.max_rules);
    const std::size_t idbs = rules >= 2 && shape.max_idb >= 2 && pick(2) ? 2 : 1;
    const std::vector<std::string> heads = idbs == 2 ? std::vector<std::string>{"P", "Q"}
                                                     : std::vector<std::string>{"P"};
    DatalogProgram p;
    for (std::size_t i = 0; i < rules; ++i) {
      DatalogRule r;
      r.head = {i < heads.size() ? heads[i] : heads[pick(heads.size())], {"x"}};
      const std::size_t body = 1 + pick(shape.max_body);
      for (std::size_t j = 0; j < body; ++j) {
        DatalogAtom at;
        if (pick(4) == 0) {
          at.predicate = heads[pick(heads.size())];
          at.args = {pool[pick(pool.size())]};
        } else {
          const auto& [name, arity] = edb[pick(edb.size())];
          at.predicate = name;
          for (int k = 0; k < arity; ++k) at.args.push_back(pool[pick(pool.size())]);
        }
        if (j == 0) at.args[pick(at.args.size())] = "x";
        r.body.push_back(std::move(at));
      }
      p.add_rule(std::move(r));
    }
    DatalogQuery q{std::move(p), "P"};
    if (validate(q, schema).empty()) return q;
  }
}

namespace {

struct FormulaGen {
  Rng& rng;
  const Alphabet& sigma;
  std::size_t sets_left;
  std::size_t nodes_left;
  std::size_t counter = 0;

  std::size_t pick(std::size_t n) { return std::uniform_int_distribution<std::size_t>(0, n - 1)(rng); }

  Formula atom(const std::vector<std::string>& nodes, const std::vector<std::string>& sets) {
    auto node = [&] { return nodes[pick(nodes.size())]; };
    switch (pick(sets.empty() ? 4 : 5)) {
      case 0: return Formula::relation(rel::label(sigma[pick(sigma.size())]), {node()});
      case 1: return Formula::relation("Fc", {node(), node()});
      case 2: return Formula::relation("Ns", {node(), node()});
      case 3: return Formula::equal(node(), node());
      default: return Formula::member(sets[pick(sets.size())], node());
    }
  }

  Formula gen(std::size_t depth, std::vector<std::string> nodes, std::vector<std::string> sets) {
    if (depth == 0 || pick(5) == 0) return atom(nodes, sets);
    switch (pick(6)) {
      case 0: return Formula::negation(gen(depth - 1, nodes, sets));
      case 1: return Formula::conjunction({gen(depth - 1, nodes, sets), gen(depth - 1, nodes, sets)});
      case 2: return Formula::disjunction({gen(depth - 1, nodes, sets), gen(depth - 1, nodes, sets)});
      case 3: return Formula::implies(gen(depth - 1, nodes, sets), gen(depth - 1, nodes, sets));
      default: break;
    }
    const bool universal = pick(2);
    if (sets_left > 0 && pick(2)) {
      --sets_left;
      const std::string v = "Y" + std::to_string(++counter);
      sets.push_back(v);
      Formula body = gen(depth - 1, nodes, sets);
      return universal ? Formula::forall_set(v, body) : Formula::exists_set(v, body);
    }
    if (nodes_left > 0) {
      --nodes_left;
      const std::string v = "y" + std::to_string(++counter);
      nodes.push_back(v);
      Formula body = gen(depth - 1, nodes, sets);
      return universal ? Formula::forall(v, body) : Formula::exists(v, body);
    }
    return gen(depth - 1, nodes, sets);
  }
};

}  // namespace

Formula random_formula(Rng& rng, const Alphabet& sigma, std::size_t set_quantifiers, std::size_t node_quantifiers) {
  FormulaGen g{rng, sigma, set_quantifiers, node_quantifiers};
  return g.gen(6, {"x"}, {"X"});
}

bool naive_eval(const Formula& f, const Structure& a, Assignment asg) {
  using K = FormulaKind;
  const auto n = static_cast<Node>(a.size());
  switch (f.kind()) {
    case K::Relation: {
      Tuple t;
      for (const auto& v : f.args()) t.push_back(asg.nodes.at(v));
      return a.contains(f.name(), t);
    }
    case K::Equal: return asg.nodes.at(f.args()[0]) == asg.nodes.at(f.args()[1]);
    case K::Member: return asg.sets.at(f.name()).count(asg.nodes.at(f.args()[0])) > 0;
    case K::Not: return !naive_eval(f.child(), a, asg);
    case K::And:
      for (const auto& c : f.children()) {
        if (!naive_eval(c, a, asg)) return false;
      }
      return true;
    case K::Or:
      for (const auto& c : f.children()) {
        if (naive_eval(c, a, asg)) return true;
      }
      return false;
    case K::Implies: return !naive_eval(f.child(0), a, asg) || naive_eval(f.child(1), a, asg);
    case K::Iff: return naive_eval(f.child(0), a, asg) == naive_eval(f.child(1), a, asg);
    case K::Exists:
    case K::Forall: {
      const bool want = f.kind() == K::Exists;
      for (Node v = 0; v < n; ++v) {
        asg.nodes[f.name()] = v;
        if (naive_eval(f.child(), a, asg) == want) return want;
      }
      return !want;
    }
    case K::ExistsSet:
    case K::ForallSet: {
      const bool want = f.kind() == K::ExistsSet;
      for (std::uint64_t m = 0; m < (std::uint64_t{1} << n); ++m) {
        std::set<Node> s;
        for (Node v = 0; v < n; ++v) {
          if (m >> v & 1) s.insert(v);
        }
        asg.sets[f.name()] = s;
        if (naive_eval(f.child(), a, asg) == want) return want;
      }
      return !want;
    }
  }
  return false;
}

FactSet map_facts(const FactSet& facts, const std::vector<Node>& h) {
  FactSet out;
  for (Fact f : facts) {
    for (auto& a : f.args) a = h[a];
    out.insert(std::move(f));
  }
  return out;
}

bool subset(const FactSet& a, const FactSet& b) { return std::includes(b.begin(), b.end(), a.begin(), a.end()); }

}  // namespace treelog::testing
