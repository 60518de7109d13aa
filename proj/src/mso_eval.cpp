#include "treelog/mso_eval.hpp"

#include <algorithm>
#include <bit>

#include "treelog/error.hpp"

namespace treelog {

namespace {

// Internal form: negation normal form with slot numbers instead of names.
// Every binder gets its own slot, so no save/restore is needed while
// evaluating.
struct Ir {
  enum Kind { Atom, Eq, Mem, And, Or, Ex, All, ExS, AllS };
  explicit Ir(Kind k) : kind(k) {}

  Kind kind;
  bool neg = false;
  int rel = -1;
  std::vector<int> args;
  int set = -1;
  int var = -1;
  std::vector<Ir> kids;

  enum GenKind { NoGen, GenEq, GenFwd, GenBwd, GenUnary, GenMem } gen = NoGen;
  int gen_rel = -1;
  int gen_other = -1;
  int memo = -1;
  std::vector<int> memo_slots;

  bool is_quant() const { return kind >= Ex; }
  bool is_set_quant() const { return kind == ExS || kind == AllS; }
  bool is_literal() const { return kind <= Mem; }
};

Ir make_junction(Ir::Kind k, std::vector<Ir> parts) {
  if (parts.size() == 1) return std::move(parts.front());
  Ir out{k};
  for (auto& p : parts) {
    if (p.kind == k) {
      for (auto& q : p.kids) out.kids.push_back(std::move(q));
    } else {
      out.kids.push_back(std::move(p));
    }
  }
  return out;
}

Ir make_quant(Ir::Kind k, int var, Ir body) {
  Ir out{k};
  out.var = var;
  out.kids.push_back(std::move(body));
  return out;
}

bool uses(const Ir& n, int var, bool is_set) {
  if (n.kind == Ir::Mem) return is_set ? n.set == var : n.args[0] == var;
  if (n.kind == Ir::Atom || n.kind == Ir::Eq) {
    return !is_set && std::find(n.args.begin(), n.args.end(), var) != n.args.end();
  }
  for (const auto& k : n.kids) {
    if (uses(k, var, is_set)) return true;
  }
  return false;
}

void free_slots(const Ir& n, std::set<int>& nodes, std::set<int>& sets) {
  switch (n.kind) {
    case Ir::Atom:
    case Ir::Eq: nodes.insert(n.args.begin(), n.args.end()); return;
    case Ir::Mem:
      sets.insert(n.set);
      nodes.insert(n.args[0]);
      return;
    default: break;
  }
  for (const auto& k : n.kids) free_slots(k, nodes, sets);
  if (n.kind == Ir::Ex || n.kind == Ir::All) nodes.erase(n.var);
  if (n.is_set_quant()) sets.erase(n.var);
}

bool has_set_quantifier(const Ir& n) {
  if (n.is_set_quant()) return true;
  return std::any_of(n.kids.begin(), n.kids.end(), has_set_quantifier);
}

// Pushes the quantifier at `q` as far inward as possible.
Ir push(Ir q) {
  const bool is_set = q.is_set_quant();
  const bool existential = q.kind == Ir::Ex || q.kind == Ir::ExS;
  const Ir::Kind split = existential ? Ir::Or : Ir::And;
  const Ir::Kind pull = existential ? Ir::And : Ir::Or;
  Ir& body = q.kids[0];
  if (!uses(body, q.var, is_set)) return std::move(body);
  if (body.kind == split) {
    std::vector<Ir> parts;
    for (auto& k : body.kids) parts.push_back(push(make_quant(q.kind, q.var, std::move(k))));
    return make_junction(split, std::move(parts));
  }
  if (body.kind == pull) {
    std::vector<Ir> with, without;
    for (auto& k : body.kids) (uses(k, q.var, is_set) ? with : without).push_back(std::move(k));
    if (without.empty()) {
      body.kids = std::move(with);
      return q;
    }
    without.push_back(push(make_quant(q.kind, q.var, make_junction(pull, std::move(with)))));
    return make_junction(pull, std::move(without));
  }
  return q;
}

Ir miniscope(Ir n) {
  for (auto& k : n.kids) k = miniscope(std::move(k));
  if (n.kind == Ir::And || n.kind == Ir::Or) {
    std::vector<Ir> parts = std::move(n.kids);
    return make_junction(n.kind, std::move(parts));
  }
  if (n.is_quant()) return push(std::move(n));
  return n;
}

double cost(const Ir& n) {
  switch (n.kind) {
    case Ir::Atom:
    case Ir::Eq:
    case Ir::Mem: return 1;
    case Ir::And:
    case Ir::Or: {
      double c = 0;
      for (const auto& k : n.kids) c += cost(k);
      return c;
    }
    case Ir::Ex:
    case Ir::All: return 4 * cost(n.kids[0]);
    default: return 64 * cost(n.kids[0]);
  }
}

void order_kids(Ir& n) {
  for (auto& k : n.kids) order_kids(k);
  if (n.kind == Ir::And || n.kind == Ir::Or) {
    std::vector<std::pair<double, Ir>> keyed;
    for (auto& k : n.kids) {
      const double c = cost(k);
      keyed.emplace_back(c, std::move(k));
    }
    std::stable_sort(keyed.begin(), keyed.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
    n.kids.clear();
    for (auto& [c, k] : keyed) n.kids.push_back(std::move(k));
  }
}

// Picks a literal that restricts the candidate values of a node quantifier.
// For ∃ a positive conjunct, for ∀ a negative disjunct.
void choose_generator(Ir& q, const std::vector<int>& arities) {
  const bool existential = q.kind == Ir::Ex;
  const Ir& body = q.kids[0];
  std::vector<const Ir*> parts;
  if (body.kind == (existential ? Ir::And : Ir::Or)) {
    for (const auto& k : body.kids) parts.push_back(&k);
  } else {
    parts.push_back(&body);
  }
  int best_rank = 0;
  for (const Ir* p : parts) {
    if (!p->is_literal() || p->neg == existential) continue;
    int rank = 0;
    Ir::GenKind kind = Ir::NoGen;
    int rel = -1, other = -1;
    if (p->kind == Ir::Eq && p->args[0] != p->args[1]) {
      rank = 5;
      kind = Ir::GenEq;
      other = p->args[0] == q.var ? p->args[1] : p->args[0];
    } else if (p->kind == Ir::Atom && arities[p->rel] == 2 && p->args[0] != p->args[1]) {
      rank = 4;
      rel = p->rel;
      if (p->args[1] == q.var) {
        kind = Ir::GenFwd;
        other = p->args[0];
      } else {
        kind = Ir::GenBwd;
        other = p->args[1];
      }
    } else if (p->kind == Ir::Mem && p->args[0] == q.var) {
      rank = 3;
      kind = Ir::GenMem;
      other = p->set;
    } else if (p->kind == Ir::Atom && arities[p->rel] == 1) {
      rank = 2;
      kind = Ir::GenUnary;
      rel = p->rel;
    }
    if (kind != Ir::NoGen && (p->kind == Ir::Mem || std::find(p->args.begin(), p->args.end(), q.var) != p->args.end()) &&
        rank > best_rank) {
      best_rank = rank;
      q.gen = kind;
      q.gen_rel = rel;
      q.gen_other = other;
    }
  }
}

void annotate(Ir& n, const std::vector<int>& arities, int& memo_count) {
  for (auto& k : n.kids) annotate(k, arities, memo_count);
  if (n.kind == Ir::Ex || n.kind == Ir::All) choose_generator(n, arities);
  if (n.is_quant() && has_set_quantifier(n)) {
    std::set<int> nodes, sets;
    free_slots(n, nodes, sets);
    if (sets.empty() && nodes.size() <= 3) {
      n.memo = memo_count++;
      n.memo_slots.assign(nodes.begin(), nodes.end());
    }
  }
}

struct RelTable {
  int arity = 0;
  std::vector<std::uint8_t> bits;  // unary: n entries; binary: n*n
  std::vector<std::vector<Node>> fwd, bwd;
  std::vector<Node> members;
  const std::set<Tuple>* tuples = nullptr;
};

}  // namespace

struct MsoEvaluator::Impl {
  Ir root{Ir::Atom};
  EvalOptions options;
  std::size_t set_depth = 0;
  std::vector<std::pair<std::string, int>> rels;  // name, arity per rel id
  std::vector<int> arities;
  std::map<std::string, int> free_nodes, free_sets;
  int node_slots = 0, set_slots = 0, memo_count = 0;

  // Conversion state.
  std::vector<std::pair<std::string, int>> node_scope, set_scope;

  int rel_id(const std::string& name, int arity) {
    for (std::size_t i = 0; i < rels.size(); ++i) {
      if (rels[i].first == name && rels[i].second == arity) return static_cast<int>(i);
    }
    rels.emplace_back(name, arity);
    arities.push_back(arity);
    return static_cast<int>(rels.size() - 1);
  }

  int slot(const std::string& v, bool is_set) {
    auto& scope = is_set ? set_scope : node_scope;
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      if (it->first == v) return it->second;
    }
    auto& free = is_set ? free_sets : free_nodes;
    auto found = free.find(v);
    if (found != free.end()) return found->second;
    const int s = is_set ? set_slots++ : node_slots++;
    free.emplace(v, s);
    return s;
  }

  Ir convert(const Formula& f, bool negated) {
    using K = FormulaKind;
    switch (f.kind()) {
      case K::Relation: {
        Ir n{Ir::Atom};
        n.neg = negated;
        n.rel = rel_id(f.name(), static_cast<int>(f.args().size()));
        for (const auto& a : f.args()) n.args.push_back(slot(a, false));
        return n;
      }
      case K::Equal: {
        Ir n{Ir::Eq};
        n.neg = negated;
        n.args = {slot(f.args()[0], false), slot(f.args()[1], false)};
        return n;
      }
      case K::Member: {
        Ir n{Ir::Mem};
        n.neg = negated;
        n.set = slot(f.name(), true);
        n.args = {slot(f.args()[0], false)};
        return n;
      }
      case K::Not: return convert(f.child(), !negated);
      case K::And:
      case K::Or: {
        std::vector<Ir> parts;
        for (const auto& c : f.children()) parts.push_back(convert(c, negated));
        const bool conj = (f.kind() == K::And) != negated;
        return make_junction(conj ? Ir::And : Ir::Or, std::move(parts));
      }
      case K::Implies: {
        Ir a = convert(f.child(0), !negated);
        Ir b = convert(f.child(1), negated);
        return make_junction(negated ? Ir::And : Ir::Or, {std::move(a), std::move(b)});
      }
      case K::Iff: {
        // a <-> b is (~a | b) & (a | ~b); its negation (a & ~b) | (~a & b).
        Ir na = convert(f.child(0), true), pb = convert(f.child(1), false);
        Ir pa = convert(f.child(0), false), nb = convert(f.child(1), true);
        if (!negated) {
          return make_junction(Ir::And, {make_junction(Ir::Or, {std::move(na), std::move(pb)}),
                                         make_junction(Ir::Or, {std::move(pa), std::move(nb)})});
        }
        return make_junction(Ir::Or, {make_junction(Ir::And, {std::move(pa), std::move(nb)}),
                                      make_junction(Ir::And, {std::move(na), std::move(pb)})});
      }
      default: break;
    }
    const bool is_set = f.is_set_quantifier();
    const bool existential = (f.kind() == K::Exists || f.kind() == K::ExistsSet) != negated;
    const int s = is_set ? set_slots++ : node_slots++;
    auto& scope = is_set ? set_scope : node_scope;
    scope.emplace_back(f.name(), s);
    Ir body = convert(f.child(), negated);
    scope.pop_back();
    const Ir::Kind k = is_set ? (existential ? Ir::ExS : Ir::AllS) : (existential ? Ir::Ex : Ir::All);
    return make_quant(k, s, std::move(body));
  }
};

namespace {

class Run {
 public:
  Run(const MsoEvaluator::Impl& impl, const Structure& a) : impl_(impl), n_(a.size()) {
    if (impl.set_depth > 0) {
      const std::size_t bits = impl.set_depth * n_;
      if (n_ > 63 || bits >= 64 || (std::uint64_t{1} << bits) > impl.options.budget) {
        throw Error(ErrorCode::BudgetExceeded, "direct evaluation needs 2^" + std::to_string(bits) +
                                                   " set assignments, over the configured budget");
      }
    }
    for (const auto& [name, arity] : impl.rels) {
      if (!a.schema().contains(name) || a.schema().arity(name) != arity) {
        throw Error(ErrorCode::UnknownSymbol,
                    "relation '" + name + "/" + std::to_string(arity) + "' is not in the structure's schema");
      }
      RelTable t;
      t.arity = arity;
      const auto& tuples = a.relation(name);
      if (arity == 1) {
        t.bits.assign(n_, 0);
        for (const auto& tu : tuples) {
          t.bits[tu[0]] = 1;
          t.members.push_back(tu[0]);
        }
      } else if (arity == 2) {
        t.bits.assign(n_ * n_, 0);
        t.fwd.resize(n_);
        t.bwd.resize(n_);
        for (const auto& tu : tuples) {
          t.bits[tu[0] * n_ + tu[1]] = 1;
          t.fwd[tu[0]].push_back(tu[1]);
          t.bwd[tu[1]].push_back(tu[0]);
        }
      } else {
        t.tuples = &tuples;
      }
      tables_.push_back(std::move(t));
    }
    nodes_.assign(impl.node_slots, 0);
    sets_.assign(impl.set_slots, 0);
    memos_.resize(impl.memo_count);
  }

  std::size_t size() const { return n_; }
  Node& node(int slot) { return nodes_[slot]; }
  std::uint64_t& set(int slot) { return sets_[slot]; }

  bool eval(const Ir& n) {
    switch (n.kind) {
      case Ir::Atom: return atom(n) != n.neg;
      case Ir::Eq: return (nodes_[n.args[0]] == nodes_[n.args[1]]) != n.neg;
      case Ir::Mem: return (((sets_[n.set] >> nodes_[n.args[0]]) & 1) != 0) != n.neg;
      case Ir::And:
        for (const auto& k : n.kids) {
          if (!eval(k)) return false;
        }
        return true;
      case Ir::Or:
        for (const auto& k : n.kids) {
          if (eval(k)) return true;
        }
        return false;
      default: break;
    }
    if (n.memo < 0) return quantifier(n);
    auto& table = memos_[n.memo];
    if (table.empty()) {
      std::size_t cells = 1;
      for (std::size_t i = 0; i < n.memo_slots.size(); ++i) cells *= n_;
      table.assign(cells, -1);
    }
    std::size_t key = 0;
    for (int s : n.memo_slots) key = key * n_ + nodes_[s];
    if (table[key] < 0) table[key] = quantifier(n) ? 1 : 0;
    return table[key] == 1;
  }

 private:
  bool atom(const Ir& n) const {
    const RelTable& t = tables_[n.rel];
    if (t.arity == 1) return t.bits[nodes_[n.args[0]]] != 0;
    if (t.arity == 2) return t.bits[nodes_[n.args[0]] * n_ + nodes_[n.args[1]]] != 0;
    Tuple tu;
    for (int s : n.args) tu.push_back(nodes_[s]);
    return t.tuples->count(tu) != 0;
  }

  bool quantifier(const Ir& n) {
    const Ir& body = n.kids[0];
    switch (n.kind) {
      case Ir::Ex:
      case Ir::All: {
        const bool want = n.kind == Ir::Ex;
        Node& slot = nodes_[n.var];
        auto try_value = [&](Node v) {
          slot = v;
          return eval(body) == want;
        };
        switch (n.gen) {
          case Ir::GenEq: return try_value(nodes_[n.gen_other]) ? want : !want;
          case Ir::GenFwd:
          case Ir::GenBwd: {
            const RelTable& t = tables_[n.gen_rel];
            const auto& cands = (n.gen == Ir::GenFwd ? t.fwd : t.bwd)[nodes_[n.gen_other]];
            for (Node v : cands) {
              if (try_value(v)) return want;
            }
            return !want;
          }
          case Ir::GenUnary:
            for (Node v : tables_[n.gen_rel].members) {
              if (try_value(v)) return want;
            }
            return !want;
          case Ir::GenMem:
            for (std::uint64_t m = sets_[n.gen_other]; m != 0; m &= m - 1) {
              if (try_value(static_cast<Node>(std::countr_zero(m)))) return want;
            }
            return !want;
          case Ir::NoGen: break;
        }
        for (Node v = 0; v < n_; ++v) {
          if (try_value(v)) return want;
        }
        return !want;
      }
      default: {
        const bool want = n.kind == Ir::ExS;
        std::uint64_t& slot = sets_[n.var];
        const std::uint64_t end = std::uint64_t{1} << n_;
        for (std::uint64_t m = 0; m < end; ++m) {
          slot = m;
          if (eval(body) == want) return want;
        }
        return !want;
      }
    }
  }

  const MsoEvaluator::Impl& impl_;
  std::size_t n_;
  std::vector<RelTable> tables_;
  std::vector<Node> nodes_;
  std::vector<std::uint64_t> sets_;
  std::vector<std::vector<std::int8_t>> memos_;
};

}  // namespace

MsoEvaluator::MsoEvaluator(const Formula& f, EvalOptions options) : impl_(std::make_unique<Impl>()) {
  impl_->options = options;
  impl_->set_depth = set_quantifier_depth(f);
  Ir ir = impl_->convert(f, false);
  ir = miniscope(std::move(ir));
  order_kids(ir);
  annotate(ir, impl_->arities, impl_->memo_count);
  impl_->root = std::move(ir);
}

MsoEvaluator::~MsoEvaluator() = default;
MsoEvaluator::MsoEvaluator(MsoEvaluator&&) noexcept = default;
MsoEvaluator& MsoEvaluator::operator=(MsoEvaluator&&) noexcept = default;

bool MsoEvaluator::holds(const Structure& a, const Assignment& asg) const {
  Run run(*impl_, a);
  for (const auto& [name, slot] : impl_->free_nodes) {
    auto it = asg.nodes.find(name);
    if (it == asg.nodes.end()) throw Error(ErrorCode::UnboundVariable, "node variable '" + name + "' is unbound");
    if (it->second >= a.size()) throw Error(ErrorCode::DomainError, "'" + name + "' is assigned outside the domain");
    run.node(slot) = it->second;
  }
  for (const auto& [name, slot] : impl_->free_sets) {
    auto it = asg.sets.find(name);
    if (it == asg.sets.end()) throw Error(ErrorCode::UnboundVariable, "set variable '" + name + "' is unbound");
    if (a.size() > 64) throw Error(ErrorCode::BudgetExceeded, "set variables need a domain of at most 64 elements");
    std::uint64_t mask = 0;
    for (Node v : it->second) {
      if (v >= a.size()) throw Error(ErrorCode::DomainError, "'" + name + "' contains an element outside the domain");
      mask |= std::uint64_t{1} << v;
    }
    run.set(slot) = mask;
  }
  return run.eval(impl_->root);
}

std::set<Node> MsoEvaluator::select(const Structure& a) const {
  if (impl_->free_nodes.size() != 1 || !impl_->free_sets.empty()) {
    throw Error(ErrorCode::WrongFreeVariableShape, "expected exactly one free node variable and no free set variables");
  }
  Run run(*impl_, a);
  const int slot = impl_->free_nodes.begin()->second;
  std::set<Node> out;
  for (Node v = 0; v < a.size(); ++v) {
    run.node(slot) = v;
    if (run.eval(impl_->root)) out.insert(v);
  }
  return out;
}

bool evaluate(const Formula& f, const Structure& a, const Assignment& asg, EvalOptions options) {
  return MsoEvaluator(f, options).holds(a, asg);
}

std::set<Node> evaluate_unary(const Formula& f, const Structure& a, EvalOptions options) {
  return MsoEvaluator(f, options).select(a);
}

}  // namespace treelog
