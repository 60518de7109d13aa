#include "treelog/structure.hpp"

#include <algorithm>

#include "treelog/error.hpp"

namespace treelog {

namespace rel {

std::string label(std::string_view symbol) { return std::string(kLabelPrefix) + std::string(symbol); }

bool is_label(std::string_view name) {
  return name.size() > kLabelPrefix.size() && name.substr(0, kLabelPrefix.size()) == kLabelPrefix;
}

std::string label_symbol(std::string_view name) {
  return std::string(name.substr(kLabelPrefix.size()));
}

}  // namespace rel

namespace {

std::map<std::string, int, std::less<>> label_symbols(const Alphabet& sigma) {
  if (sigma.empty()) throw Error(ErrorCode::InvalidArgument, "alphabet must be non-empty");
  std::map<std::string, int, std::less<>> out;
  for (const auto& a : sigma.symbols()) out.emplace(rel::label(a), 1);
  return out;
}

int builtin_arity(std::string_view name) {
  if (name == rel::kChild || name == rel::kDesc || name == rel::kIs || name == rel::kFc ||
      name == rel::kNs) {
    return 2;
  }
  if (name == rel::kRoot || name == rel::kLeaf || name == rel::kLs) return 1;
  return 0;
}

Schema extend(std::map<std::string, int, std::less<>> base, const std::set<std::string>& extra,
              std::initializer_list<std::string_view> allowed) {
  for (const auto& m : extra) {
    if (std::find(allowed.begin(), allowed.end(), m) == allowed.end()) {
      throw Error(ErrorCode::InvalidArgument, "relation '" + m + "' is not allowed in this schema family");
    }
    base.emplace(m, builtin_arity(m));
  }
  return Schema(std::move(base));
}

}  // namespace

Schema::Schema(std::map<std::string, int, std::less<>> arities) : arities_(std::move(arities)) {
  for (const auto& [name, ar] : arities_) {
    if (ar <= 0) throw Error(ErrorCode::InvalidArgument, "relation '" + name + "' needs positive arity");
    const int expected = rel::is_label(name) ? 1 : builtin_arity(name);
    if (expected != 0 && expected != ar) {
      throw Error(ErrorCode::InvalidArgument, "relation '" + name + "' has arity " +
                                                  std::to_string(expected));
    }
  }
}

Schema Schema::unordered(const Alphabet& sigma, const std::set<std::string>& extra) {
  auto base = label_symbols(sigma);
  base.emplace(rel::kChild, 2);
  return extend(std::move(base), extra, {rel::kDesc, rel::kIs, rel::kRoot, rel::kLeaf});
}

Schema Schema::ordered(const Alphabet& sigma, const std::set<std::string>& extra) {
  auto base = label_symbols(sigma);
  base.emplace(rel::kFc, 2);
  base.emplace(rel::kNs, 2);
  return extend(std::move(base), extra,
                {rel::kChild, rel::kDesc, rel::kRoot, rel::kLeaf, rel::kLs});
}

Schema Schema::unordered_prime(const Alphabet& sigma) {
  return unordered(sigma, {"Desc", "Is", "Root", "Leaf"});
}

Schema Schema::ordered_prime(const Alphabet& sigma) {
  return ordered(sigma, {"Child", "Desc", "Root", "Leaf", "Ls"});
}

Schema Schema::gottlob_koch(const Alphabet& sigma) { return ordered(sigma, {"Root", "Leaf", "Ls"}); }

int Schema::arity(std::string_view symbol) const {
  auto it = arities_.find(symbol);
  if (it == arities_.end()) {
    throw Error(ErrorCode::UnknownSymbol, "relation '" + std::string(symbol) + "' is not in the schema");
  }
  return it->second;
}

Alphabet Schema::alphabet() const {
  std::vector<std::string> out;
  for (const auto& [name, ar] : arities_) {
    if (rel::is_label(name)) out.push_back(rel::label_symbol(name));
  }
  return Alphabet(std::move(out));
}

bool Schema::needs_order() const {
  return contains(rel::kFc) || contains(rel::kNs) || contains(rel::kLs);
}

bool Schema::is_subschema_of(const Schema& other) const {
  return std::all_of(arities_.begin(), arities_.end(), [&](const auto& entry) {
    auto it = other.arities_.find(entry.first);
    return it != other.arities_.end() && it->second == entry.second;
  });
}

Schema Schema::with(std::string_view symbol, int arity) const {
  auto copy = arities_;
  copy.insert_or_assign(std::string(symbol), arity);
  return Schema(std::move(copy));
}

Schema Schema::without(std::string_view symbol) const {
  auto copy = arities_;
  if (auto it = copy.find(symbol); it != copy.end()) copy.erase(it);
  return Schema(std::move(copy));
}

std::string to_string(const Fact& fact, const std::vector<std::string>& names) {
  std::string out = fact.predicate + "(";
  for (std::size_t i = 0; i < fact.args.size(); ++i) {
    if (i) out += ',';
    out += fact.args[i] < names.size() ? names[fact.args[i]] : LabeledTree::node_name(fact.args[i]);
  }
  return out + ")";
}

Structure::Structure(Schema schema, std::vector<std::string> element_names)
    : schema_(std::move(schema)), names_(std::move(element_names)) {
  if (names_.empty()) throw Error(ErrorCode::DomainError, "a structure needs a non-empty domain");
  for (const auto& [name, ar] : schema_.symbols()) relations_.emplace(name, std::set<Tuple>{});
}

void Structure::add(std::string_view relation, Tuple tuple) {
  auto it = relations_.find(relation);
  if (it == relations_.end()) {
    throw Error(ErrorCode::UnknownSymbol, "relation '" + std::string(relation) + "' is not in the schema");
  }
  if (static_cast<int>(tuple.size()) != schema_.arity(relation)) {
    throw Error(ErrorCode::DomainError, "arity mismatch for '" + std::string(relation) + "'");
  }
  for (Node v : tuple) {
    if (v >= names_.size()) throw Error(ErrorCode::DomainError, "tuple element outside the domain");
  }
  it->second.insert(std::move(tuple));
}

const std::set<Tuple>& Structure::relation(std::string_view name) const {
  auto it = relations_.find(name);
  if (it == relations_.end()) {
    throw Error(ErrorCode::UnknownSymbol, "relation '" + std::string(name) + "' is not in the schema");
  }
  return it->second;
}

bool Structure::contains(std::string_view name, const Tuple& tuple) const {
  return relation(name).count(tuple) != 0;
}

Structure build_structure(const LabeledTree& t, const Schema& s) {
  if (s.needs_order() && !t.ordered()) {
    throw Error(ErrorCode::OrderRequired, "schema needs a sibling order but the tree is unordered");
  }
  for (Node v = 0; v < t.size(); ++v) {
    if (!s.contains(rel::label(t.label(v)))) {
      throw Error(ErrorCode::UnknownLabel, "label '" + t.label(v) + "' is not covered by the schema");
    }
  }
  for (const auto& [name, ar] : s.symbols()) {
    if (!rel::is_label(name) && builtin_arity(name) == 0) {
      throw Error(ErrorCode::UnknownSymbol, "no tree interpretation for relation '" + name + "'");
    }
  }

  std::vector<std::string> names;
  for (Node v = 0; v < t.size(); ++v) names.push_back(LabeledTree::node_name(v));
  Structure out(s, std::move(names));
  const auto n = static_cast<Node>(t.size());

  for (Node v = 0; v < n; ++v) {
    const std::string lab = rel::label(t.label(v));
    out.add(lab, {v});
    const auto kids = t.children(v);
    if (s.contains(rel::kChild)) {
      for (Node c : kids) out.add(rel::kChild, {v, c});
    }
    if (s.contains(rel::kIs)) {
      for (Node a : kids) {
        for (Node b : kids) {
          if (a != b) out.add(rel::kIs, {a, b});
        }
      }
    }
    if (s.contains(rel::kLeaf) && kids.empty()) out.add(rel::kLeaf, {v});
    if (s.contains(rel::kFc) && !kids.empty()) out.add(rel::kFc, {v, kids.front()});
    if (s.contains(rel::kNs)) {
      for (std::size_t i = 0; i + 1 < kids.size(); ++i) out.add(rel::kNs, {kids[i], kids[i + 1]});
    }
    if (s.contains(rel::kLs) && !kids.empty()) out.add(rel::kLs, {kids.back()});
    if (s.contains(rel::kDesc)) {
      // Desc(v, w) for every strict descendant w: walk up from w.
      for (Node w = 0; w < n; ++w) {
        for (std::int64_t p = t.parent(w); p != LabeledTree::kNoParent; p = t.parent(static_cast<Node>(p))) {
          if (static_cast<Node>(p) == v) {
            out.add(rel::kDesc, {v, w});
            break;
          }
        }
      }
    }
  }
  if (s.contains(rel::kRoot)) out.add(rel::kRoot, {t.root()});
  return out;
}

FactSet atoms(const Structure& a) {
  FactSet out;
  for (const auto& [name, ar] : a.schema().symbols()) {
    for (const auto& tuple : a.relation(name)) out.insert(Fact{name, tuple});
  }
  return out;
}

Structure reduct(const Structure& a, const Schema& s) {
  if (!s.is_subschema_of(a.schema())) {
    throw Error(ErrorCode::NotASubschema, "target schema is not contained in the structure's schema");
  }
  Structure out(s, a.names());
  for (const auto& [name, ar] : s.symbols()) {
    for (const auto& tuple : a.relation(name)) out.add(name, tuple);
  }
  return out;
}

}  // namespace treelog
