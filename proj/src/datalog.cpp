#include "treelog/datalog.hpp"

#include <algorithm>
#include <cctype>
#include <map>
#include <unordered_map>

#include "treelog/error.hpp"

namespace treelog {

std::vector<std::string> DatalogRule::variables() const {
  std::vector<std::string> out;
  auto note = [&](const DatalogAtom& a) {
    for (const auto& v : a.args) {
      if (std::find(out.begin(), out.end(), v) == out.end()) out.push_back(v);
    }
  };
  note(head);
  for (const auto& b : body) note(b);
  return out;
}

std::vector<std::string> DatalogProgram::idb() const {
  std::vector<std::string> out;
  for (const auto& r : rules_) {
    if (std::find(out.begin(), out.end(), r.head.predicate) == out.end()) out.push_back(r.head.predicate);
  }
  return out;
}

std::vector<std::string> DatalogProgram::edb() const {
  const auto heads = idb();
  std::vector<std::string> out;
  for (const auto& r : rules_) {
    for (const auto& b : r.body) {
      if (std::find(heads.begin(), heads.end(), b.predicate) == heads.end() &&
          std::find(out.begin(), out.end(), b.predicate) == out.end()) {
        out.push_back(b.predicate);
      }
    }
  }
  return out;
}

bool DatalogProgram::is_idb(std::string_view predicate) const {
  return std::any_of(rules_.begin(), rules_.end(),
                     [&](const DatalogRule& r) { return r.head.predicate == predicate; });
}

int DatalogProgram::arity_of(std::string_view predicate) const {
  for (const auto& r : rules_) {
    if (r.head.predicate == predicate) return static_cast<int>(r.head.args.size());
    for (const auto& b : r.body) {
      if (b.predicate == predicate) return static_cast<int>(b.args.size());
    }
  }
  return -1;
}

// ---------------------------------------------------------------------------
// Parsing

namespace {

struct Token {
  enum Kind { Ident, LParen, RParen, Comma, Dot, Arrow, Colon, End } kind;
  std::string text;
  std::size_t line;
  std::size_t col;
};

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      skip();
      const std::size_t line = line_, col = col_;
      if (pos_ >= text_.size()) {
        out.push_back({Token::End, "", line, col});
        return out;
      }
      const char c = text_[pos_];
      if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
        std::size_t start = pos_;
        while (pos_ < text_.size() &&
               (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_' ||
                text_[pos_] == '\'')) {
          advance();
        }
        out.push_back({Token::Ident, std::string(text_.substr(start, pos_ - start)), line, col});
        continue;
      }
      if (c == '<' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '-') {
        advance();
        advance();
        out.push_back({Token::Arrow, "<-", line, col});
        continue;
      }
      Token::Kind kind;
      switch (c) {
        case '(': kind = Token::LParen; break;
        case ')': kind = Token::RParen; break;
        case ',': kind = Token::Comma; break;
        case '.': kind = Token::Dot; break;
        case ':': kind = Token::Colon; break;
        default: throw SyntaxError(line, col, std::string("unexpected character '") + c + "'");
      }
      advance();
      out.push_back({kind, std::string(1, c), line, col});
    }
  }

 private:
  void skip() {
    while (pos_ < text_.size()) {
      if (text_[pos_] == '%') {
        while (pos_ < text_.size() && text_[pos_] != '\n') advance();
      } else if (std::isspace(static_cast<unsigned char>(text_[pos_]))) {
        advance();
      } else {
        break;
      }
    }
  }

  void advance() {
    if (text_[pos_] == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    ++pos_;
  }

  std::string_view text_;
  std::size_t pos_ = 0, line_ = 1, col_ = 1;
};

class ProgramParser {
 public:
  explicit ProgramParser(std::string_view text) : toks_(Lexer(text).run()) {}

  DatalogQuery parse(bool allow_query_line) {
    DatalogQuery q;
    while (peek().kind != Token::End) {
      if (allow_query_line && peek().kind == Token::Ident && peek().text == "query" &&
          peek(1).kind == Token::Colon) {
        next();
        next();
        q.predicate = expect(Token::Ident, "a predicate name").text;
        if (peek().kind != Token::End) fail(peek(), "nothing may follow the query line");
        break;
      }
      q.program.add_rule(parse_rule());
    }
    return q;
  }

 private:
  DatalogRule parse_rule() {
    const Token& start = peek();
    DatalogRule r;
    r.head = parse_atom();
    expect(Token::Arrow, "'<-'");
    r.body.push_back(parse_atom());
    while (peek().kind == Token::Comma) {
      next();
      r.body.push_back(parse_atom());
    }
    expect(Token::Dot, "'.' at end of rule");
    for (const auto& v : r.head.args) {
      bool found = std::any_of(r.body.begin(), r.body.end(), [&](const DatalogAtom& b) {
        return std::find(b.args.begin(), b.args.end(), v) != b.args.end();
      });
      if (!found) {
        throw Error(ErrorCode::SafetyError, std::to_string(start.line) + ":" + std::to_string(start.col) +
                                                ": head variable '" + v + "' does not occur in the body");
      }
    }
    return r;
  }

  DatalogAtom parse_atom() {
    DatalogAtom a;
    a.predicate = expect(Token::Ident, "a predicate name").text;
    expect(Token::LParen, "'('");
    a.args.push_back(expect(Token::Ident, "a variable").text);
    while (peek().kind == Token::Comma) {
      next();
      a.args.push_back(expect(Token::Ident, "a variable").text);
    }
    expect(Token::RParen, "')'");
    return a;
  }

  const Token& peek(std::size_t ahead = 0) const {
    return toks_[std::min(pos_ + ahead, toks_.size() - 1)];
  }
  const Token& next() { return toks_[std::min(pos_++, toks_.size() - 1)]; }

  const Token& expect(Token::Kind kind, const char* what) {
    if (peek().kind != kind) fail(peek(), std::string("expected ") + what);
    return next();
  }

  [[noreturn]] static void fail(const Token& t, const std::string& what) {
    throw SyntaxError(t.line, t.col, what + (t.kind == Token::End ? " (end of input)" : ", found '" + t.text + "'"));
  }

  std::vector<Token> toks_;
  std::size_t pos_ = 0;
};

}  // namespace

DatalogProgram parse_program(std::string_view text) { return ProgramParser(text).parse(false).program; }

DatalogQuery parse_query(std::string_view text) {
  DatalogQuery q = ProgramParser(text).parse(true);
  if (q.predicate.empty() && !q.program.rules().empty()) q.predicate = q.program.rules().front().head.predicate;
  return q;
}

namespace {

std::string atom_text(const DatalogAtom& a) {
  std::string out = a.predicate + "(";
  for (std::size_t i = 0; i < a.args.size(); ++i) {
    if (i) out += ',';
    out += a.args[i];
  }
  return out + ")";
}

}  // namespace

std::string to_text(const DatalogRule& rule) {
  std::string out = atom_text(rule.head) + " <- ";
  for (std::size_t i = 0; i < rule.body.size(); ++i) {
    if (i) out += ", ";
    out += atom_text(rule.body[i]);
  }
  return out + ".";
}

std::string to_text(const DatalogProgram& program) {
  std::string out;
  for (const auto& r : program.rules()) out += to_text(r) + "\n";
  return out;
}

std::string to_text(const DatalogQuery& query) {
  return to_text(query.program) + "query: " + query.predicate + "\n";
}

// ---------------------------------------------------------------------------
// Validation

std::vector<Violation> validate(const DatalogProgram& p, const Schema& s) {
  std::vector<Violation> out;
  std::map<std::string, int> seen_arity;
  auto check_arity = [&](const DatalogAtom& a) {
    auto [it, inserted] = seen_arity.emplace(a.predicate, static_cast<int>(a.args.size()));
    if (!inserted && it->second != static_cast<int>(a.args.size())) {
      out.push_back({ViolationKind::ArityMismatch,
                     "predicate '" + a.predicate + "' used with arities " + std::to_string(it->second) +
                         " and " + std::to_string(a.args.size())});
    }
  };
  for (const auto& r : p.rules()) {
    check_arity(r.head);
    for (const auto& b : r.body) check_arity(b);
    if (r.body.empty()) {
      out.push_back({ViolationKind::EmptyBody, "rule '" + atom_text(r.head) + "' has an empty body"});
    }
    for (const auto& v : r.head.args) {
      bool found = std::any_of(r.body.begin(), r.body.end(), [&](const DatalogAtom& b) {
        return std::find(b.args.begin(), b.args.end(), v) != b.args.end();
      });
      if (!found) {
        out.push_back({ViolationKind::Unsafe, "head variable '" + v + "' of rule '" + to_text(r) +
                                                  "' does not occur in the body"});
      }
    }
  }
  for (const auto& h : p.idb()) {
    if (p.arity_of(h) != 1) {
      out.push_back({ViolationKind::NotMonadic, "intensional predicate '" + h + "' has arity " +
                                                    std::to_string(p.arity_of(h))});
    }
    if (s.contains(h)) {
      out.push_back({ViolationKind::NotInSchema, "intensional predicate '" + h + "' clashes with a schema relation"});
    }
  }
  for (const auto& e : p.edb()) {
    if (!s.contains(e)) {
      out.push_back({ViolationKind::NotInSchema, "extensional predicate '" + e + "' is not in the schema"});
    } else if (s.arity(e) != p.arity_of(e)) {
      out.push_back({ViolationKind::ArityMismatch, "predicate '" + e + "' has schema arity " +
                                                       std::to_string(s.arity(e))});
    }
  }
  return out;
}

std::vector<Violation> validate(const DatalogQuery& q, const Schema& s) {
  auto out = validate(q.program, s);
  if (q.program.arity_of(q.predicate) < 0) {
    out.push_back({ViolationKind::NoQueryPredicate,
                   "query predicate '" + q.predicate + "' does not occur in the program"});
  }
  return out;
}

Schema inferred_schema(const DatalogProgram& p) {
  std::map<std::string, int, std::less<>> ar;
  for (const auto& e : p.edb()) ar.emplace(e, std::max(1, p.arity_of(e)));
  // A builtin name used with the wrong arity is left out, so validation
  // reports it instead of this function throwing.
  std::map<std::string, int, std::less<>> safe;
  for (const auto& [name, a] : ar) {
    try {
      (void)Schema({{name, a}});
      safe.emplace(name, a);
    } catch (const Error&) {
    }
  }
  return Schema(std::move(safe));
}

// ---------------------------------------------------------------------------
// Evaluation

namespace {

class Relation {
 public:
  explicit Relation(std::size_t arity) : index_(arity) {}

  std::size_t arity() const { return index_.size(); }
  const std::vector<Tuple>& tuples() const { return list_; }
  bool contains(const Tuple& t) const { return set_.count(t) != 0; }

  bool insert(const Tuple& t) {
    if (!set_.insert(t).second) return false;
    const auto idx = static_cast<std::uint32_t>(list_.size());
    list_.push_back(t);
    for (std::size_t p = 0; p < t.size(); ++p) index_[p][t[p]].push_back(idx);
    return true;
  }

  /// Indices of tuples with `value` at position `pos`.
  const std::vector<std::uint32_t>* matching(std::size_t pos, Node value) const {
    auto it = index_[pos].find(value);
    return it == index_[pos].end() ? nullptr : &it->second;
  }

 private:
  std::set<Tuple> set_;
  std::vector<Tuple> list_;
  std::vector<std::unordered_map<Node, std::vector<std::uint32_t>>> index_;
};

class Database {
 public:
  Relation& get(const std::string& pred, std::size_t arity) {
    auto it = rels_.find(pred);
    if (it == rels_.end()) it = rels_.emplace(pred, Relation(arity)).first;
    return it->second;
  }
  const Relation* find(const std::string& pred) const {
    auto it = rels_.find(pred);
    return it == rels_.end() ? nullptr : &it->second;
  }
  bool contains(const Fact& f) const {
    const Relation* r = find(f.predicate);
    return r && r->arity() == f.args.size() && r->contains(f.args);
  }
  bool insert(const Fact& f) { return get(f.predicate, f.args.size()).insert(f.args); }

  FactSet facts() const {
    FactSet out;
    for (const auto& [name, r] : rels_) {
      for (const auto& t : r.tuples()) out.insert(Fact{name, t});
    }
    return out;
  }

 private:
  std::map<std::string, Relation> rels_;
};

// Backtracking join of one rule body. Variables are numbered per rule.
class RuleMatcher {
 public:
  explicit RuleMatcher(const DatalogRule& rule) : rule_(rule) {
    auto vars = rule.variables();
    auto slot = [&](const std::string& v) {
      return static_cast<std::size_t>(std::find(vars.begin(), vars.end(), v) - vars.begin());
    };
    for (const auto& v : rule.head.args) head_.push_back(slot(v));
    for (const auto& b : rule.body) {
      std::vector<std::size_t> s;
      for (const auto& v : b.args) s.push_back(slot(v));
      body_.push_back(std::move(s));
    }
    num_vars_ = vars.size();
  }

  /// Calls `emit(head_tuple)` for every valuation satisfying the body. Atom
  /// `delta_pos` (if any) is matched against `delta` instead of `db`.
  template <class Emit>
  void run(const Database& db, int delta_pos, const Relation* delta, Emit&& emit) const {
    std::vector<std::int64_t> binding(num_vars_, -1);
    match(0, db, delta_pos, delta, binding, emit);
  }

 private:
  template <class Emit>
  void match(std::size_t i, const Database& db, int delta_pos, const Relation* delta,
             std::vector<std::int64_t>& binding, Emit& emit) const {
    if (i == body_.size()) {
      Tuple head;
      head.reserve(head_.size());
      for (std::size_t s : head_) head.push_back(static_cast<Node>(binding[s]));
      emit(head);
      return;
    }
    const auto& slots = body_[i];
    const Relation* rel = static_cast<int>(i) == delta_pos ? delta : db.find(rule_.body[i].predicate);
    if (!rel || rel->arity() != slots.size()) return;

    auto try_tuple = [&](const Tuple& t) {
      std::vector<std::size_t> bound_here;
      bool ok = true;
      for (std::size_t p = 0; p < slots.size() && ok; ++p) {
        auto& b = binding[slots[p]];
        if (b < 0) {
          b = t[p];
          bound_here.push_back(slots[p]);
        } else if (static_cast<Node>(b) != t[p]) {
          ok = false;
        }
      }
      if (ok) match(i + 1, db, delta_pos, delta, binding, emit);
      for (std::size_t s : bound_here) binding[s] = -1;
    };

    // Use the index on the first bound position when there is one.
    for (std::size_t p = 0; p < slots.size(); ++p) {
      if (binding[slots[p]] >= 0) {
        if (const auto* hits = rel->matching(p, static_cast<Node>(binding[slots[p]]))) {
          for (std::uint32_t idx : *hits) try_tuple(rel->tuples()[idx]);
        }
        return;
      }
    }
    for (const auto& t : rel->tuples()) try_tuple(t);
  }

  const DatalogRule& rule_;
  std::vector<std::size_t> head_;
  std::vector<std::vector<std::size_t>> body_;
  std::size_t num_vars_ = 0;
};

void check_facts(const DatalogProgram& p, const FactSet& c, std::size_t domain_size) {
  for (const auto& f : c) {
    for (Node v : f.args) {
      if (v >= domain_size) throw Error(ErrorCode::DomainError, "fact " + to_string(f) + " mentions an element outside the domain");
    }
    const int ar = p.arity_of(f.predicate);
    if (ar >= 0 && ar != static_cast<int>(f.args.size())) {
      throw Error(ErrorCode::DomainError, "fact " + to_string(f) + " has the wrong arity");
    }
  }
}

Database load(const FactSet& c) {
  Database db;
  for (const auto& f : c) db.insert(f);
  return db;
}

FactSet naive_fixpoint(const DatalogProgram& p, FactSet c, std::size_t domain_size) {
  for (;;) {
    FactSet next = immediate_consequence(p, c, domain_size);
    if (next.size() == c.size()) return next;
    c = std::move(next);
  }
}

FactSet semi_naive_fixpoint(const DatalogProgram& p, const FactSet& c) {
  Database db = load(c);
  std::vector<RuleMatcher> matchers;
  for (const auto& r : p.rules()) matchers.emplace_back(r);

  std::map<std::string, Relation> delta;
  auto add_new = [&](std::map<std::string, Relation>& fresh, const std::string& pred, const Tuple& t) {
    if (db.find(pred) && db.find(pred)->contains(t)) return;
    fresh.try_emplace(pred, Relation(t.size())).first->second.insert(t);
  };

  for (std::size_t i = 0; i < matchers.size(); ++i) {
    const auto& pred = p.rules()[i].head.predicate;
    matchers[i].run(db, -1, nullptr, [&](const Tuple& t) { add_new(delta, pred, t); });
  }
  while (!delta.empty()) {
    for (const auto& [pred, r] : delta) {
      for (const auto& t : r.tuples()) db.insert(Fact{pred, t});
    }
    std::map<std::string, Relation> fresh;
    for (std::size_t i = 0; i < matchers.size(); ++i) {
      const auto& rule = p.rules()[i];
      for (std::size_t pos = 0; pos < rule.body.size(); ++pos) {
        auto it = delta.find(rule.body[pos].predicate);
        if (it == delta.end()) continue;
        matchers[i].run(db, static_cast<int>(pos), &it->second,
                        [&](const Tuple& t) { add_new(fresh, rule.head.predicate, t); });
      }
    }
    delta = std::move(fresh);
  }
  return db.facts();
}

}  // namespace

FactSet immediate_consequence(const DatalogProgram& p, const FactSet& c, std::size_t domain_size) {
  check_facts(p, c, domain_size);
  Database db = load(c);
  FactSet out = c;
  for (const auto& r : p.rules()) {
    if (r.body.empty()) continue;
    RuleMatcher(r).run(db, -1, nullptr, [&](const Tuple& t) { out.insert(Fact{r.head.predicate, t}); });
  }
  return out;
}

FactSet fixpoint(const DatalogProgram& p, const Structure& a, FixpointStrategy strategy) {
  if (auto v = validate(p, a.schema()); !v.empty()) {
    throw Error(ErrorCode::NotValidated, v.front().message);
  }
  const FactSet base = atoms(a);
  return strategy == FixpointStrategy::Naive ? naive_fixpoint(p, base, a.size())
                                             : semi_naive_fixpoint(p, base);
}

std::set<Tuple> evaluate_query(const DatalogQuery& q, const Structure& a, FixpointStrategy strategy) {
  if (auto v = validate(q, a.schema()); !v.empty()) {
    throw Error(ErrorCode::NotValidated, v.front().message);
  }
  std::set<Tuple> out;
  for (const auto& f : fixpoint(q.program, a, strategy)) {
    if (f.predicate == q.predicate) out.insert(f.args);
  }
  return out;
}

std::set<Node> evaluate_unary_query(const DatalogQuery& q, const Structure& a) {
  if (q.program.arity_of(q.predicate) != 1) {
    throw Error(ErrorCode::NotUnary, "query predicate '" + q.predicate + "' is not unary");
  }
  std::set<Node> out;
  for (const auto& t : evaluate_query(q, a)) out.insert(t.front());
  return out;
}

// ---------------------------------------------------------------------------
// Size

namespace {

// Pieces of the canonical serialization, one alphabet symbol each.
std::vector<std::string> canonical_symbols(const DatalogQuery& q) {
  std::vector<std::string> out{"(", q.predicate, "{"};
  bool first_rule = true;
  for (const auto& r : q.program.rules()) {
    if (!first_rule) out.push_back(",");
    first_rule = false;
    const auto vars = r.variables();
    auto emit_atom = [&](const DatalogAtom& a) {
      out.push_back(a.predicate);
      out.push_back("(");
      for (std::size_t i = 0; i < a.args.size(); ++i) {
        if (i) out.push_back(",");
        const auto idx = static_cast<std::size_t>(std::find(vars.begin(), vars.end(), a.args[i]) - vars.begin());
        out.push_back("x");
        for (char d : std::to_string(idx)) out.emplace_back(1, d);
      }
      out.push_back(")");
    };
    emit_atom(r.head);
    out.push_back("<-");
    for (std::size_t i = 0; i < r.body.size(); ++i) {
      if (i) out.push_back(",");
      emit_atom(r.body[i]);
    }
  }
  out.push_back("}");
  out.push_back(")");
  return out;
}

}  // namespace

std::string canonical_text(const DatalogQuery& q) {
  std::string out;
  for (const auto& s : canonical_symbols(q)) out += s;
  return out;
}

std::size_t query_size(const DatalogQuery& q) { return canonical_symbols(q).size(); }

bool check_homomorphism(const std::vector<Node>& h, const Structure& a, const Structure& b) {
  if (!(a.schema() == b.schema())) {
    throw Error(ErrorCode::InvalidArgument, "homomorphism check needs structures over one schema");
  }
  if (h.size() != a.size()) throw Error(ErrorCode::InvalidArgument, "map must be total on the source domain");
  for (Node v : h) {
    if (v >= b.size()) throw Error(ErrorCode::DomainError, "map image outside the target domain");
  }
  for (const auto& [name, ar] : a.schema().symbols()) {
    for (const auto& t : a.relation(name)) {
      Tuple image;
      image.reserve(t.size());
      for (Node v : t) image.push_back(h[v]);
      if (!b.contains(name, image)) return false;
    }
  }
  return true;
}

}  // namespace treelog
