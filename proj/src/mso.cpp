#include "treelog/mso.hpp"

#include <algorithm>
#include <cctype>
#include <map>

#include "treelog/error.hpp"

namespace treelog {

struct Formula::Data {
  FormulaKind kind;
  std::string name;
  std::vector<std::string> args;
  std::vector<Formula> children;
};

namespace {

const std::vector<std::string> kNoArgs;

void require_node_var(const std::string& v) {
  if (!is_node_variable_name(v)) {
    throw Error(ErrorCode::InvalidArgument, "'" + v + "' is not a node variable name");
  }
}

void require_set_var(const std::string& v) {
  if (!is_set_variable_name(v)) {
    throw Error(ErrorCode::InvalidArgument, "'" + v + "' is not a set variable name");
  }
}

}  // namespace

bool is_set_variable_name(std::string_view name) {
  if (name.empty() || !std::isupper(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin() + 1, name.end(),
                     [](char c) { return std::isdigit(static_cast<unsigned char>(c)) || c == '\''; });
}

bool is_node_variable_name(std::string_view name) {
  if (name.empty() || !std::islower(static_cast<unsigned char>(name[0]))) return false;
  return std::all_of(name.begin(), name.end(), [](char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'';
  });
}

Formula Formula::relation(std::string name, std::vector<std::string> args) {
  if (args.empty()) throw Error(ErrorCode::InvalidArgument, "relation atom needs arguments");
  for (const auto& a : args) require_node_var(a);
  return Formula(std::make_shared<const Data>(Data{FormulaKind::Relation, std::move(name), std::move(args), {}}));
}

Formula Formula::equal(std::string x, std::string y) {
  require_node_var(x);
  require_node_var(y);
  return Formula(std::make_shared<const Data>(Data{FormulaKind::Equal, "", {std::move(x), std::move(y)}, {}}));
}

Formula Formula::member(std::string set, std::string x) {
  require_set_var(set);
  require_node_var(x);
  return Formula(std::make_shared<const Data>(Data{FormulaKind::Member, std::move(set), {std::move(x)}, {}}));
}

Formula Formula::negation(Formula f) {
  return Formula(std::make_shared<const Data>(Data{FormulaKind::Not, "", {}, {std::move(f)}}));
}

Formula Formula::conjunction(std::vector<Formula> fs) {
  if (fs.empty()) throw Error(ErrorCode::InvalidArgument, "empty conjunction");
  if (fs.size() == 1) return fs.front();
  return Formula(std::make_shared<const Data>(Data{FormulaKind::And, "", {}, std::move(fs)}));
}

Formula Formula::disjunction(std::vector<Formula> fs) {
  if (fs.empty()) throw Error(ErrorCode::InvalidArgument, "empty disjunction");
  if (fs.size() == 1) return fs.front();
  return Formula(std::make_shared<const Data>(Data{FormulaKind::Or, "", {}, std::move(fs)}));
}

Formula Formula::implies(Formula a, Formula b) {
  return Formula(std::make_shared<const Data>(Data{FormulaKind::Implies, "", {}, {std::move(a), std::move(b)}}));
}

Formula Formula::iff(Formula a, Formula b) {
  return Formula(std::make_shared<const Data>(Data{FormulaKind::Iff, "", {}, {std::move(a), std::move(b)}}));
}

Formula Formula::not_equal(std::string x, std::string y) { return negation(equal(std::move(x), std::move(y))); }

Formula Formula::exists(std::string var, Formula body) {
  require_node_var(var);
  return Formula(std::make_shared<const Data>(Data{FormulaKind::Exists, std::move(var), {}, {std::move(body)}}));
}

Formula Formula::forall(std::string var, Formula body) {
  require_node_var(var);
  return Formula(std::make_shared<const Data>(Data{FormulaKind::Forall, std::move(var), {}, {std::move(body)}}));
}

Formula Formula::exists_set(std::string var, Formula body) {
  require_set_var(var);
  return Formula(std::make_shared<const Data>(Data{FormulaKind::ExistsSet, std::move(var), {}, {std::move(body)}}));
}

Formula Formula::forall_set(std::string var, Formula body) {
  require_set_var(var);
  return Formula(std::make_shared<const Data>(Data{FormulaKind::ForallSet, std::move(var), {}, {std::move(body)}}));
}

FormulaKind Formula::kind() const noexcept { return d_->kind; }
const std::string& Formula::name() const noexcept { return d_->name; }
const std::vector<std::string>& Formula::args() const noexcept { return d_->args; }
const std::vector<Formula>& Formula::children() const noexcept { return d_->children; }

bool Formula::is_atom() const noexcept {
  return d_->kind == FormulaKind::Relation || d_->kind == FormulaKind::Equal || d_->kind == FormulaKind::Member;
}

bool Formula::is_quantifier() const noexcept {
  switch (d_->kind) {
    case FormulaKind::Exists:
    case FormulaKind::Forall:
    case FormulaKind::ExistsSet:
    case FormulaKind::ForallSet: return true;
    default: return false;
  }
}

bool Formula::is_set_quantifier() const noexcept {
  return d_->kind == FormulaKind::ExistsSet || d_->kind == FormulaKind::ForallSet;
}

bool operator==(const Formula& a, const Formula& b) {
  if (a.d_ == b.d_) return true;
  return a.kind() == b.kind() && a.name() == b.name() && a.args() == b.args() && a.children() == b.children();
}

// ---------------------------------------------------------------------------
// Variables

namespace {

void collect_free(const Formula& f, std::set<std::string>& bound_nodes, std::set<std::string>& bound_sets,
                  FreeVariables& out) {
  switch (f.kind()) {
    case FormulaKind::Relation:
    case FormulaKind::Equal:
      for (const auto& a : f.args()) {
        if (!bound_nodes.count(a)) out.nodes.insert(a);
      }
      return;
    case FormulaKind::Member:
      if (!bound_sets.count(f.name())) out.sets.insert(f.name());
      if (!bound_nodes.count(f.args()[0])) out.nodes.insert(f.args()[0]);
      return;
    case FormulaKind::Exists:
    case FormulaKind::Forall: {
      const bool fresh = bound_nodes.insert(f.name()).second;
      collect_free(f.child(), bound_nodes, bound_sets, out);
      if (fresh) bound_nodes.erase(f.name());
      return;
    }
    case FormulaKind::ExistsSet:
    case FormulaKind::ForallSet: {
      const bool fresh = bound_sets.insert(f.name()).second;
      collect_free(f.child(), bound_nodes, bound_sets, out);
      if (fresh) bound_sets.erase(f.name());
      return;
    }
    default:
      for (const auto& c : f.children()) collect_free(c, bound_nodes, bound_sets, out);
  }
}

void collect_names(const Formula& f, std::set<std::string>& vars, std::set<std::string>& rels) {
  switch (f.kind()) {
    case FormulaKind::Relation:
      rels.insert(f.name());
      vars.insert(f.args().begin(), f.args().end());
      return;
    case FormulaKind::Equal: vars.insert(f.args().begin(), f.args().end()); return;
    case FormulaKind::Member:
      vars.insert(f.name());
      vars.insert(f.args()[0]);
      return;
    default:
      if (f.is_quantifier()) vars.insert(f.name());
      for (const auto& c : f.children()) collect_names(c, vars, rels);
  }
}

}  // namespace

FreeVariables free_vars(const Formula& f) {
  FreeVariables out;
  std::set<std::string> bn, bs;
  collect_free(f, bn, bs, out);
  return out;
}

std::set<std::string> variable_names(const Formula& f) {
  std::set<std::string> vars, rels;
  collect_names(f, vars, rels);
  return vars;
}

std::set<std::string> relation_names(const Formula& f) {
  std::set<std::string> vars, rels;
  collect_names(f, vars, rels);
  return rels;
}

// ---------------------------------------------------------------------------
// Printing

namespace {

enum Level { kQuant = 0, kIff = 1, kImplies = 2, kOr = 3, kAnd = 4, kUnary = 5 };

std::string join_args(const std::vector<std::string>& args) {
  std::string out;
  for (std::size_t i = 0; i < args.size(); ++i) {
    if (i) out += ',';
    out += args[i];
  }
  return out;
}

std::string print(const Formula& f, int context) {
  auto wrap = [&](int own, std::string s) { return own < context ? "(" + s + ")" : s; };
  switch (f.kind()) {
    case FormulaKind::Relation: return f.name() + "(" + join_args(f.args()) + ")";
    case FormulaKind::Equal: return f.args()[0] + " = " + f.args()[1];
    case FormulaKind::Member: return f.name() + "(" + f.args()[0] + ")";
    case FormulaKind::Not:
      if (f.child().kind() == FormulaKind::Equal) {
        return wrap(kUnary, f.child().args()[0] + " != " + f.child().args()[1]);
      }
      return "~" + print(f.child(), kUnary);
    case FormulaKind::And:
    case FormulaKind::Or: {
      const bool is_and = f.kind() == FormulaKind::And;
      const int own = is_and ? kAnd : kOr;
      std::string s;
      for (std::size_t i = 0; i < f.children().size(); ++i) {
        if (i) s += is_and ? " & " : " | ";
        s += print(f.children()[i], own + 1);
      }
      return wrap(own, s);
    }
    case FormulaKind::Implies:
      return wrap(kImplies, print(f.child(0), kOr) + " -> " + print(f.child(1), kImplies));
    case FormulaKind::Iff:
      return wrap(kIff, print(f.child(0), kImplies) + " <-> " + print(f.child(1), kImplies));
    case FormulaKind::Exists: return wrap(kQuant, "E " + f.name() + ". " + print(f.child(), kQuant));
    case FormulaKind::Forall: return wrap(kQuant, "A " + f.name() + ". " + print(f.child(), kQuant));
    case FormulaKind::ExistsSet: return wrap(kQuant, "E2 " + f.name() + ". " + print(f.child(), kQuant));
    case FormulaKind::ForallSet: return wrap(kQuant, "A2 " + f.name() + ". " + print(f.child(), kQuant));
  }
  return {};
}

}  // namespace

std::string to_text(const Formula& f) { return print(f, kQuant); }

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct FToken {
  enum Kind { Ident, LParen, RParen, Comma, Dot, Not, And, Or, Implies, Iff, Eq, Neq, End } kind;
  std::string text;
  std::size_t line, col;
};

std::vector<FToken> lex_formula(std::string_view text) {
  std::vector<FToken> out;
  std::size_t pos = 0, line = 1, col = 1;
  auto advance = [&](std::size_t n) {
    for (std::size_t i = 0; i < n; ++i) {
      if (text[pos] == '\n') {
        ++line;
        col = 1;
      } else {
        ++col;
      }
      ++pos;
    }
  };
  while (true) {
    while (pos < text.size()) {
      if (text[pos] == '%') {
        while (pos < text.size() && text[pos] != '\n') advance(1);
      } else if (std::isspace(static_cast<unsigned char>(text[pos]))) {
        advance(1);
      } else {
        break;
      }
    }
    if (pos >= text.size()) {
      out.push_back({FToken::End, "", line, col});
      return out;
    }
    const std::size_t l = line, c = col;
    const char ch = text[pos];
    if (std::isalpha(static_cast<unsigned char>(ch)) || ch == '_') {
      std::size_t start = pos;
      while (pos < text.size() && (std::isalnum(static_cast<unsigned char>(text[pos])) || text[pos] == '_' ||
                                   text[pos] == '\'')) {
        advance(1);
      }
      out.push_back({FToken::Ident, std::string(text.substr(start, pos - start)), l, c});
      continue;
    }
    auto starts = [&](std::string_view s) { return text.substr(pos, s.size()) == s; };
    if (starts("<->")) {
      advance(3);
      out.push_back({FToken::Iff, "<->", l, c});
    } else if (starts("->")) {
      advance(2);
      out.push_back({FToken::Implies, "->", l, c});
    } else if (starts("!=")) {
      advance(2);
      out.push_back({FToken::Neq, "!=", l, c});
    } else {
      FToken::Kind k;
      switch (ch) {
        case '(': k = FToken::LParen; break;
        case ')': k = FToken::RParen; break;
        case ',': k = FToken::Comma; break;
        case '.': k = FToken::Dot; break;
        case '~': k = FToken::Not; break;
        case '&': k = FToken::And; break;
        case '|': k = FToken::Or; break;
        case '=': k = FToken::Eq; break;
        default: throw SyntaxError(l, c, std::string("unexpected character '") + ch + "'");
      }
      advance(1);
      out.push_back({k, std::string(1, ch), l, c});
    }
  }
}

class FormulaParser {
 public:
  explicit FormulaParser(std::string_view text) : toks_(lex_formula(text)) {}

  Formula parse() {
    Formula f = parse_iff();
    if (peek().kind != FToken::End) fail(peek(), "unexpected input after formula");
    return f;
  }

 private:
  Formula parse_iff() {
    Formula left = parse_implies();
    if (peek().kind == FToken::Iff) {
      next();
      return Formula::iff(left, parse_implies());
    }
    return left;
  }

  Formula parse_implies() {
    Formula left = parse_or();
    if (peek().kind == FToken::Implies) {
      next();
      return Formula::implies(left, parse_implies());
    }
    return left;
  }

  Formula parse_or() {
    std::vector<Formula> parts{parse_and()};
    while (peek().kind == FToken::Or) {
      next();
      parts.push_back(parse_and());
    }
    return Formula::disjunction(std::move(parts));
  }

  Formula parse_and() {
    std::vector<Formula> parts{parse_unary()};
    while (peek().kind == FToken::And) {
      next();
      parts.push_back(parse_unary());
    }
    return Formula::conjunction(std::move(parts));
  }

  Formula parse_unary() {
    const FToken& t = peek();
    if (t.kind == FToken::Not) {
      next();
      return Formula::negation(parse_unary());
    }
    if (t.kind == FToken::LParen) {
      next();
      Formula f = parse_iff();
      expect(FToken::RParen, "')'");
      return f;
    }
    if (t.kind != FToken::Ident) fail(t, "expected a formula");
    if ((t.text == "E" || t.text == "A" || t.text == "E2" || t.text == "A2") && peek(1).kind == FToken::Ident) {
      return parse_quantifier();
    }
    return parse_atom();
  }

  Formula parse_quantifier() {
    const std::string q = next().text;
    const FToken& var = next();
    const bool set_q = q.size() == 2;
    if (set_q && !is_set_variable_name(var.text)) fail(var, "expected a set variable");
    if (!set_q && !is_node_variable_name(var.text)) fail(var, "expected a node variable");
    expect(FToken::Dot, "'.' after quantified variable");
    if (set_q) bound_sets_.push_back(var.text);
    Formula body = parse_iff();
    if (set_q) bound_sets_.pop_back();
    if (q == "E") return Formula::exists(var.text, body);
    if (q == "A") return Formula::forall(var.text, body);
    if (q == "E2") return Formula::exists_set(var.text, body);
    return Formula::forall_set(var.text, body);
  }

  Formula parse_atom() {
    const FToken& id = next();
    if (peek().kind == FToken::Eq || peek().kind == FToken::Neq) {
      const bool neq = next().kind == FToken::Neq;
      const FToken& rhs = expect(FToken::Ident, "a node variable");
      check_node(id);
      check_node(rhs);
      return neq ? Formula::not_equal(id.text, rhs.text) : Formula::equal(id.text, rhs.text);
    }
    if (peek().kind != FToken::LParen) fail(peek(), "expected '(', '=' or '!=' after '" + id.text + "'");
    next();
    std::vector<std::string> args;
    do {
      const FToken& a = expect(FToken::Ident, "a node variable");
      check_node(a);
      args.push_back(a.text);
    } while (peek().kind == FToken::Comma && (next(), true));
    expect(FToken::RParen, "')'");
    const bool bound_set =
        std::find(bound_sets_.begin(), bound_sets_.end(), id.text) != bound_sets_.end();
    if (args.size() == 1 && (bound_set || is_set_variable_name(id.text))) {
      return Formula::member(id.text, args[0]);
    }
    return Formula::relation(id.text, std::move(args));
  }

  void check_node(const FToken& t) const {
    if (!is_node_variable_name(t.text)) fail(t, "'" + t.text + "' is not a node variable (must start lowercase)");
  }

  const FToken& peek(std::size_t ahead = 0) const { return toks_[std::min(pos_ + ahead, toks_.size() - 1)]; }
  const FToken& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }
  const FToken& expect(FToken::Kind k, const std::string& what) {
    if (peek().kind != k) fail(peek(), "expected " + what);
    return next();
  }
  [[noreturn]] static void fail(const FToken& t, const std::string& what) {
    throw SyntaxError(t.line, t.col, what);
  }

  std::vector<FToken> toks_;
  std::size_t pos_ = 0;
  std::vector<std::string> bound_sets_;
};

}  // namespace

Formula parse_formula(std::string_view text) { return FormulaParser(text).parse(); }

// ---------------------------------------------------------------------------
// Normal forms and comparison

Formula normalize(const Formula& f) {
  using K = FormulaKind;
  auto neg = [](Formula g) {
    if (g.kind() == K::Not) return g.child();
    return Formula::negation(std::move(g));
  };
  switch (f.kind()) {
    case K::Relation:
    case K::Equal:
    case K::Member: return f;
    case K::Not: return neg(normalize(f.child()));
    case K::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(normalize(c));
      return Formula::disjunction(std::move(parts));
    }
    case K::And: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(neg(normalize(c)));
      return neg(Formula::disjunction(std::move(parts)));
    }
    case K::Implies: return Formula::disjunction({neg(normalize(f.child(0))), normalize(f.child(1))});
    case K::Iff: {
      const Formula a = normalize(f.child(0));
      const Formula b = normalize(f.child(1));
      const Formula ab = Formula::disjunction({neg(a), b});
      const Formula ba = Formula::disjunction({neg(b), a});
      return neg(Formula::disjunction({neg(ab), neg(ba)}));
    }
    case K::Exists: return Formula::exists(f.name(), normalize(f.child()));
    case K::Forall: return neg(Formula::exists(f.name(), neg(normalize(f.child()))));
    case K::ExistsSet: return Formula::exists_set(f.name(), normalize(f.child()));
    case K::ForallSet: return neg(Formula::exists_set(f.name(), neg(normalize(f.child()))));
  }
  return f;
}

namespace {

class KeyPrinter {
 public:
  explicit KeyPrinter(bool rename_free) : rename_free_(rename_free) {}

  std::string run(const Formula& f) {
    std::string out;
    emit(f, out);
    return out;
  }

  std::vector<std::string> free_order;

 private:
  std::string var(const std::string& v, bool is_set) {
    auto& scope = is_set ? set_scope_ : node_scope_;
    for (auto it = scope.rbegin(); it != scope.rend(); ++it) {
      if (it->first == v) return it->second;
    }
    if (!rename_free_) return "'" + v;
    auto& free_map = is_set ? free_sets_ : free_nodes_;
    auto found = free_map.find(v);
    if (found == free_map.end()) {
      found = free_map.emplace(v, (is_set ? "F" : "f") + std::to_string(free_order.size())).first;
      free_order.push_back(v);
    }
    return found->second;
  }

  void emit(const Formula& f, std::string& out) {
    using K = FormulaKind;
    switch (f.kind()) {
      case K::Relation:
        out += f.name() + "(";
        for (const auto& a : f.args()) out += var(a, false) + ",";
        out += ")";
        return;
      case K::Equal: out += "=(" + var(f.args()[0], false) + "," + var(f.args()[1], false) + ")"; return;
      case K::Member: out += "in(" + var(f.name(), true) + "," + var(f.args()[0], false) + ")"; return;
      default: break;
    }
    if (f.is_quantifier()) {
      const bool is_set = f.is_set_quantifier();
      auto& scope = is_set ? set_scope_ : node_scope_;
      const std::string canon = (is_set ? "B" : "b") + std::to_string(bound_counter_++);
      static const char* tags[] = {"", "", "", "", "", "", "", "", "E", "A", "E2", "A2"};
      out += std::string(tags[static_cast<int>(f.kind())]) + " " + canon + ".[";
      scope.emplace_back(f.name(), canon);
      emit(f.child(), out);
      scope.pop_back();
      out += "]";
      return;
    }
    static const char* ops[] = {"", "", "", "not", "and", "or", "imp", "iff"};
    out += std::string(ops[static_cast<int>(f.kind())]) + "[";
    for (const auto& c : f.children()) {
      emit(c, out);
      out += ";";
    }
    out += "]";
  }

  bool rename_free_;
  std::size_t bound_counter_ = 0;
  std::vector<std::pair<std::string, std::string>> node_scope_, set_scope_;
  std::map<std::string, std::string> free_nodes_, free_sets_;
};

}  // namespace

std::string canonical_key(const Formula& f, std::vector<std::string>* free_order) {
  KeyPrinter p(true);
  std::string key = p.run(f);
  if (free_order) *free_order = p.free_order;
  return key;
}

bool alpha_equivalent(const Formula& a, const Formula& b) {
  return KeyPrinter(false).run(normalize(a)) == KeyPrinter(false).run(normalize(b));
}

bool is_pi1(const Formula& f) {
  const Formula* cur = &f;
  while (cur->kind() == FormulaKind::ForallSet) cur = &cur->child();
  while (cur->kind() == FormulaKind::Exists) cur = &cur->child();
  std::vector<const Formula*> stack{cur};
  while (!stack.empty()) {
    const Formula* g = stack.back();
    stack.pop_back();
    if (g->is_quantifier()) return false;
    for (const auto& c : g->children()) stack.push_back(&c);
  }
  return true;
}

std::size_t set_quantifier_depth(const Formula& f) {
  std::size_t best = 0;
  for (const auto& c : f.children()) best = std::max(best, set_quantifier_depth(c));
  return best + (f.is_set_quantifier() ? 1 : 0);
}

// ---------------------------------------------------------------------------
// Fresh names and substitution

std::string FreshNames::next(std::string_view stem) {
  for (;;) {
    std::string candidate = std::string(stem) + std::to_string(++counter_);
    if (used_.insert(candidate).second) return candidate;
  }
}

std::string FreshNames::node(std::string_view stem) { return next(stem); }
std::string FreshNames::set(std::string_view stem) { return next(stem); }

namespace {

using Env = std::vector<std::pair<std::string, std::string>>;

std::string lookup(const Env& env, const std::string& v) {
  for (auto it = env.rbegin(); it != env.rend(); ++it) {
    if (it->first == v) return it->second;
  }
  return v;
}

Formula rewrite(const Formula& f, Env& env, FreshNames& fresh) {
  using K = FormulaKind;
  auto map_args = [&]() {
    std::vector<std::string> out;
    for (const auto& a : f.args()) out.push_back(lookup(env, a));
    return out;
  };
  switch (f.kind()) {
    case K::Relation: return Formula::relation(f.name(), map_args());
    case K::Equal: {
      auto a = map_args();
      return Formula::equal(a[0], a[1]);
    }
    case K::Member: return Formula::member(lookup(env, f.name()), lookup(env, f.args()[0]));
    case K::Not: return Formula::negation(rewrite(f.child(), env, fresh));
    case K::And:
    case K::Or: {
      std::vector<Formula> parts;
      for (const auto& c : f.children()) parts.push_back(rewrite(c, env, fresh));
      return f.kind() == K::And ? Formula::conjunction(std::move(parts)) : Formula::disjunction(std::move(parts));
    }
    case K::Implies: return Formula::implies(rewrite(f.child(0), env, fresh), rewrite(f.child(1), env, fresh));
    case K::Iff: return Formula::iff(rewrite(f.child(0), env, fresh), rewrite(f.child(1), env, fresh));
    default: break;
  }
  const bool is_set = f.is_set_quantifier();
  const std::string stem(1, is_set ? f.name()[0] : f.name()[0]);
  const std::string renamed = is_set ? fresh.set(stem) : fresh.node(stem);
  env.emplace_back(f.name(), renamed);
  Formula body = rewrite(f.child(), env, fresh);
  env.pop_back();
  switch (f.kind()) {
    case K::Exists: return Formula::exists(renamed, body);
    case K::Forall: return Formula::forall(renamed, body);
    case K::ExistsSet: return Formula::exists_set(renamed, body);
    default: return Formula::forall_set(renamed, body);
  }
}

}  // namespace

Formula substitute(const Formula& f, const std::vector<std::pair<std::string, std::string>>& map,
                   FreshNames& fresh) {
  fresh.reserve(variable_names(f));
  for (const auto& [from, to] : map) fresh.reserve({from, to});
  Env env(map.begin(), map.end());
  return rewrite(f, env, fresh);
}

Formula rename_bound(const Formula& f, FreshNames& fresh) { return substitute(f, {}, fresh); }

}  // namespace treelog
