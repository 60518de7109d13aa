#include "treelog/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <sstream>

#include "treelog/automata.hpp"
#include "treelog/datalog.hpp"
#include "treelog/decide.hpp"
#include "treelog/error.hpp"
#include "treelog/mso_eval.hpp"
#include "treelog/translate.hpp"

namespace treelog {

namespace {

// Problems with the invocation itself; always exit code 2.
struct UsageError {
  std::string message;
};

struct Options {
  std::string schema;
  std::string with;
  std::string mode;
  std::string sigma;
  std::size_t max_nodes = 5;
  std::size_t state_budget = AutomatonLimits{}.state_budget;
  std::uint64_t eval_budget = EvalOptions{}.budget;

  std::string tree_file;
  std::string program_file;
  std::string formula_file;
  std::vector<std::string> inputs;
  bool prenex = false;
  bool facts = false;
  bool to_ordered = false;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError{path + ": cannot open file"};
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

template <class F>
auto parse_file(const std::string& path, F&& parse) {
  const std::string text = read_file(path);
  try {
    return parse(text);
  } catch (const SyntaxError& e) {
    throw UsageError{path + ":" + e.what()};
  } catch (const Error& e) {
    throw UsageError{path + ": " + e.what()};
  }
}

DatalogQuery load_query(const std::string& path) {
  return parse_file(path, [](const std::string& t) { return parse_query(t); });
}

Formula load_formula(const std::string& path) {
  return parse_file(path, [](const std::string& t) { return parse_formula(t); });
}

LabeledTree load_tree(const std::string& path, bool ordered) {
  return parse_file(path, [ordered](const std::string& t) { return parse_tree(t, ordered); });
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream in(s);
  for (std::string item; std::getline(in, item, ',');) {
    item.erase(0, item.find_first_not_of(" \t"));
    item.erase(item.find_last_not_of(" \t") + 1);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void add_labels(std::set<std::string>& labels, const DatalogProgram& p) {
  for (const auto& e : p.edb()) {
    if (rel::is_label(e)) labels.insert(rel::label_symbol(e));
  }
}

// Explicit --sigma wins; otherwise the labels that occur in the inputs.
Alphabet resolve_alphabet(const Options& o, const std::set<std::string>& found) {
  if (!o.sigma.empty()) {
    std::vector<std::string> symbols = split_list(o.sigma);
    if (symbols.empty()) throw UsageError{"--sigma: empty alphabet"};
    return Alphabet(symbols);
  }
  if (found.empty()) return Alphabet({"a"});
  return Alphabet(std::vector<std::string>(found.begin(), found.end()));
}

bool mode_is_ordered(const Options& o) {
  const bool by_schema = o.schema == "o" || o.schema == "o-prime" || o.schema == "gk";
  if (o.mode.empty()) return by_schema;
  const bool ordered = o.mode == "ordered";
  if (!o.schema.empty() && ordered != by_schema) {
    throw UsageError{"--schema " + o.schema + " does not match --mode " + o.mode};
  }
  return ordered;
}

Schema resolve_schema(const Options& o, const Alphabet& sigma, bool ordered) {
  static const std::map<std::string, std::string> relation_names{
      {"child", "Child"}, {"desc", "Desc"}, {"root", "Root"}, {"leaf", "Leaf"}, {"ls", "Ls"}, {"is", "Is"}};
  std::set<std::string> extra;
  for (const auto& w : split_list(o.with)) {
    auto it = relation_names.find(w);
    if (it == relation_names.end()) throw UsageError{"--with: unknown relation '" + w + "'"};
    extra.insert(it->second);
  }
  const std::string name = o.schema.empty() ? (o.with.empty() ? (ordered ? "o-prime" : "u-prime")
                                                              : (ordered ? "o" : "u"))
                                            : o.schema;
  const std::set<std::string> allowed =
      ordered ? std::set<std::string>{"Child", "Desc", "Root", "Leaf", "Ls"}
              : std::set<std::string>{"Desc", "Is", "Root", "Leaf"};
  for (const auto& e : extra) {
    if (!allowed.count(e)) throw UsageError{"--with: " + e + " is not available for this schema"};
  }
  if (!extra.empty() && name != "u" && name != "o") throw UsageError{"--with needs --schema u or o"};
  if (name == "u") return Schema::unordered(sigma, extra);
  if (name == "u-prime") return Schema::unordered_prime(sigma);
  if (name == "o") return Schema::ordered(sigma, extra);
  if (name == "o-prime") return Schema::ordered_prime(sigma);
  return Schema::gottlob_koch(sigma);
}

TreeMode resolve_mode(const Options& o, const std::vector<DatalogQuery>& queries) {
  std::set<std::string> labels;
  for (const auto& q : queries) add_labels(labels, q.program);
  const bool ordered = mode_is_ordered(o);
  return {ordered, resolve_schema(o, resolve_alphabet(o, labels), ordered)};
}

void print_pointed(std::ostream& out, const std::string& what, const PointedTree& p) {
  out << what << ": " << to_text(p.tree) << "\n";
  out << "node: " << LabeledTree::node_name(p.node) << "\n";
}

int report(const Verdict& v, const std::string& yes, const std::string& no, std::ostream& out) {
  switch (v.answer) {
    case Answer::Yes:
      out << yes << "\n";
      if (v.counterexample) print_pointed(out, "witness", *v.counterexample);
      return kExitYes;
    case Answer::No:
      out << no << "\n";
      if (!v.note.empty()) out << "reason: " << v.note << "\n";
      if (v.counterexample) print_pointed(out, "counterexample", *v.counterexample);
      return kExitNo;
    case Answer::Unknown:
      out << "unknown: " << v.note << "\n";
      if (v.evidence) print_pointed(out, "evidence", *v.evidence);
      return kExitUnknown;
  }
  return kExitUnknown;
}

DecideOptions decide_options(const Options& o) {
  DecideOptions d;
  d.limits.state_budget = o.state_budget;
  d.oracle_nodes = o.max_nodes;
  return d;
}

int cmd_eval(const Options& o, std::ostream& out) {
  const bool ordered = mode_is_ordered(o);
  const LabeledTree tree = load_tree(o.tree_file, ordered);
  const DatalogQuery q = load_query(o.program_file);
  std::set<std::string> labels(tree.labels().begin(), tree.labels().end());
  add_labels(labels, q.program);
  const Structure s = build_structure(tree, resolve_schema(o, resolve_alphabet(o, labels), ordered));
  if (o.facts) {
    for (const Fact& f : fixpoint(q.program, s)) {
      if (q.program.is_idb(f.predicate)) out << to_string(f) << "\n";
    }
    return kExitYes;
  }
  for (const Tuple& t : evaluate_query(q, s)) {
    if (t.size() == 1) {
      out << LabeledTree::node_name(t[0]) << "\n";
      continue;
    }
    out << "(";
    for (std::size_t i = 0; i < t.size(); ++i) out << (i ? "," : "") << LabeledTree::node_name(t[i]);
    out << ")\n";
  }
  return kExitYes;
}

int cmd_eval_mso(const Options& o, std::ostream& out) {
  const bool ordered = mode_is_ordered(o);
  const LabeledTree tree = load_tree(o.tree_file, ordered);
  const Formula f = load_formula(o.formula_file);
  std::set<std::string> labels(tree.labels().begin(), tree.labels().end());
  for (const auto& r : relation_names(f)) {
    if (rel::is_label(r)) labels.insert(rel::label_symbol(r));
  }
  const Structure s = build_structure(tree, resolve_schema(o, resolve_alphabet(o, labels), ordered));
  const EvalOptions eo{o.eval_budget};
  if (free_vars(f).empty()) {
    out << (evaluate(f, s, {}, eo) ? "true" : "false") << "\n";
    return kExitYes;
  }
  for (Node v : evaluate_unary(f, s, eo)) out << LabeledTree::node_name(v) << "\n";
  return kExitYes;
}

int cmd_translate(const Options& o, std::ostream& out) {
  const DatalogQuery q = load_query(o.program_file);
  Formula f = datalog_to_mso(q);
  if (!o.schema.empty() || !o.with.empty() || !o.sigma.empty()) f = datalog_to_mso(q, resolve_mode(o, {q}).schema);
  if (o.prenex) f = to_prenex_pi1(f);
  out << to_text(f) << "\n";
  return kExitYes;
}

int cmd_axis_elim(const Options& o, std::ostream& out) {
  const Formula f = load_formula(o.formula_file);
  const bool ordered = mode_is_ordered(o);
  Formula g = ordered ? axis_elim_ordered(f) : axis_elim_unordered(f);
  if (!ordered && o.to_ordered) g = unordered_to_ordered(g);
  out << to_text(g) << "\n";
  return kExitYes;
}

std::pair<DatalogQuery, DatalogQuery> two_queries(const Options& o) {
  if (o.inputs.size() != 2) throw UsageError{"expected two program files"};
  return {load_query(o.inputs[0]), load_query(o.inputs[1])};
}

int cmd_contained(const Options& o, std::ostream& out) {
  auto [q1, q2] = two_queries(o);
  const TreeMode mode = resolve_mode(o, {q1, q2});
  return report(containment(q1, q2, mode, decide_options(o)), "contained", "not contained", out);
}

int cmd_equiv(const Options& o, std::ostream& out) {
  auto [q1, q2] = two_queries(o);
  const TreeMode mode = resolve_mode(o, {q1, q2});
  return report(equivalence(q1, q2, mode, decide_options(o)), "equivalent", "not equivalent", out);
}

int cmd_sat(const Options& o, std::ostream& out) {
  std::string file = o.program_file;
  if (file.empty() && o.inputs.size() == 1) file = o.inputs[0];
  if (file.empty() || o.inputs.size() > 1) throw UsageError{"expected one program file"};
  const DatalogQuery q = load_query(file);
  const TreeMode mode = resolve_mode(o, {q});
  return report(satisfiable(q, mode, decide_options(o)), "satisfiable", "unsatisfiable", out);
}

int cmd_search(const Options& o, std::ostream& out) {
  auto [q1, q2] = two_queries(o);
  const TreeMode mode = resolve_mode(o, {q1, q2});
  for (const auto* q : {&q1, &q2}) {
    if (auto v = validate(*q, mode.schema); !v.empty()) throw Error(ErrorCode::NotValidated, v.front().message);
  }
  if (auto p = bounded_counterexample_search(q1, q2, mode, o.max_nodes)) {
    print_pointed(out, "counterexample", *p);
    return kExitNo;
  }
  out << "no counterexample up to " << o.max_nodes << " nodes\n";
  return kExitYes;
}

int cmd_enumerate(const Options& o, std::ostream& out) {
  const bool ordered = mode_is_ordered(o);
  for_each_tree(resolve_alphabet(o, {}), o.max_nodes, ordered, [&](const LabeledTree& t) {
    out << to_text(t) << "\n";
    return true;
  });
  return kExitYes;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Monadic datalog and MSO on labeled trees", "treelog"};
  app.require_subcommand(1);
  Options o;
  std::function<int(const Options&, std::ostream&)> action;

  auto schema_flags = [&](CLI::App* sub) {
    sub->add_option("--schema", o.schema, "Schema variant")
        ->check(CLI::IsMember({"u", "u-prime", "o", "o-prime", "gk"}));
    sub->add_option("--with", o.with, "Extra relations for --schema u|o, e.g. desc,root");
    sub->add_option("--mode", o.mode, "Tree kind")->check(CLI::IsMember({"ordered", "unordered"}));
    sub->add_option("--sigma", o.sigma, "Alphabet, comma separated");
  };
  auto decide_flags = [&](CLI::App* sub) {
    schema_flags(sub);
    sub->add_option("--max-nodes", o.max_nodes, "Tree size for the bounded search")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    sub->add_option("--state-budget", o.state_budget, "Automaton state budget")->capture_default_str();
  };
  auto command = [&](const std::string& name, const std::string& help,
                     int (*fn)(const Options&, std::ostream&)) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->callback([&action, fn] { action = fn; });
    return sub;
  };

  CLI::App* eval = command("eval", "Evaluate a datalog query on a tree", cmd_eval);
  schema_flags(eval);
  eval->add_option("--tree", o.tree_file, "Tree file")->required();
  eval->add_option("--program", o.program_file, "Program file")->required();
  eval->add_flag("--facts", o.facts, "Print every derived fact");

  CLI::App* eval_mso = command("eval-mso", "Evaluate an MSO formula on a tree", cmd_eval_mso);
  schema_flags(eval_mso);
  eval_mso->add_option("--tree", o.tree_file, "Tree file")->required();
  eval_mso->add_option("--formula", o.formula_file, "Formula file")->required();
  eval_mso->add_option("--eval-budget", o.eval_budget, "Evaluator budget")->capture_default_str();

  CLI::App* translate = command("translate", "Translate a unary query into MSO", cmd_translate);
  schema_flags(translate);
  translate->add_option("--program", o.program_file, "Program file")->required();
  translate->add_flag("--prenex", o.prenex, "Print the prenex universal-existential form");

  CLI::App* elim = command("axis-elim", "Rewrite axis atoms into the base schema", cmd_axis_elim);
  elim->add_option("--formula", o.formula_file, "Formula file")->required();
  elim->add_option("--mode", o.mode, "Tree kind")->check(CLI::IsMember({"ordered", "unordered"}));
  elim->add_flag("--to-ordered", o.to_ordered, "Also rewrite Child for ordered trees");

  for (auto [name, help, fn] : {std::tuple{"check-contained", "Decide whether Q1 is contained in Q2", cmd_contained},
                                std::tuple{"check-equiv", "Decide whether Q1 and Q2 are equivalent", cmd_equiv},
                                std::tuple{"search-counterexample", "Search small trees for a node in Q1 but not Q2",
                                           cmd_search}}) {
    CLI::App* sub = command(name, help, fn);
    decide_flags(sub);
    sub->add_option("programs", o.inputs, "Q1 Q2")->expected(2)->required();
  }
  CLI::App* sat = command("check-sat", "Decide whether a query selects a node on some tree", cmd_sat);
  decide_flags(sat);
  sat->add_option("--program", o.program_file, "Program file");
  sat->add_option("programs", o.inputs, "Program file");

  CLI::App* enumerate = command("enumerate", "List trees up to isomorphism", cmd_enumerate);
  enumerate->add_option("--sigma", o.sigma, "Alphabet, comma separated");
  enumerate->add_option("--max-nodes", o.max_nodes, "Largest tree")->capture_default_str();
  enumerate->add_option("--mode", o.mode, "Tree kind")->check(CLI::IsMember({"ordered", "unordered"}));

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitYes : kExitUsage;
  }

  try {
    return action(o, out);
  } catch (const UsageError& e) {
    err << "treelog: " << e.message << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    err << "treelog: " << to_string(e.code()) << ": " << e.what() << "\n";
    return e.code() == ErrorCode::BudgetExceeded ? kExitUnknown : kExitUsage;
  }
}

}  // namespace treelog
