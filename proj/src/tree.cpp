#include "treelog/tree.hpp"

#include <algorithm>
#include <cctype>
#include <deque>
#include <map>

#include "treelog/error.hpp"

namespace treelog {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::OrderRequired: return "OrderRequired";
    case ErrorCode::UnknownLabel: return "UnknownLabel";
    case ErrorCode::UnknownSymbol: return "UnknownSymbol";
    case ErrorCode::NotASubschema: return "NotASubschema";
    case ErrorCode::SyntaxError: return "SyntaxError";
    case ErrorCode::SafetyError: return "SafetyError";
    case ErrorCode::DomainError: return "DomainError";
    case ErrorCode::UnboundVariable: return "UnboundVariable";
    case ErrorCode::WrongFreeVariableShape: return "WrongFreeVariableShape";
    case ErrorCode::BudgetExceeded: return "BudgetExceeded";
    case ErrorCode::NotUnary: return "NotUnary";
    case ErrorCode::NotValidated: return "NotValidated";
    case ErrorCode::WrongShape: return "WrongShape";
    case ErrorCode::NotASingleTree: return "NotASingleTree";
    case ErrorCode::UnsupportedAtom: return "UnsupportedAtom";
    case ErrorCode::StateBudgetExceeded: return "StateBudgetExceeded";
    case ErrorCode::AlphabetMismatch: return "AlphabetMismatch";
    case ErrorCode::InvalidTree: return "InvalidTree";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
  }
  return "Unknown";
}

Alphabet::Alphabet(std::vector<std::string> symbols) : symbols_(std::move(symbols)) {
  std::vector<std::string> sorted = symbols_;
  std::sort(sorted.begin(), sorted.end());
  if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
    throw Error(ErrorCode::InvalidArgument, "alphabet contains a duplicate symbol");
  }
}

bool Alphabet::contains(std::string_view symbol) const {
  return std::find(symbols_.begin(), symbols_.end(), symbol) != symbols_.end();
}

std::size_t Alphabet::index_of(std::string_view symbol) const {
  auto it = std::find(symbols_.begin(), symbols_.end(), symbol);
  if (it == symbols_.end()) {
    throw Error(ErrorCode::UnknownLabel, "label '" + std::string(symbol) + "' is not in the alphabet");
  }
  return static_cast<std::size_t>(it - symbols_.begin());
}

LabeledTree::LabeledTree(std::vector<std::string> labels, std::vector<std::int64_t> parent,
                         bool ordered) {
  const std::size_t n = labels.size();
  if (n == 0) throw Error(ErrorCode::InvalidTree, "a tree needs at least one node");
  if (parent.size() != n) throw Error(ErrorCode::InvalidTree, "parent array and labels differ in size");

  std::vector<std::vector<std::size_t>> kids(n);
  std::size_t root = n;
  for (std::size_t v = 0; v < n; ++v) {
    if (parent[v] == kNoParent) {
      if (root != n) throw Error(ErrorCode::InvalidTree, "more than one node has in-degree 0");
      root = v;
    } else if (parent[v] < 0 || static_cast<std::size_t>(parent[v]) >= n) {
      throw Error(ErrorCode::InvalidTree, "parent index out of range");
    } else {
      kids[static_cast<std::size_t>(parent[v])].push_back(v);
    }
  }
  if (root == n) throw Error(ErrorCode::InvalidTree, "no node has in-degree 0");

  // Breadth-first renumbering; also detects cycles (unreached nodes).
  std::vector<std::size_t> order;
  std::vector<std::int64_t> new_id(n, -1);
  order.reserve(n);
  order.push_back(root);
  new_id[root] = 0;
  for (std::size_t head = 0; head < order.size(); ++head) {
    for (std::size_t c : kids[order[head]]) {
      new_id[c] = static_cast<std::int64_t>(order.size());
      order.push_back(c);
    }
  }
  if (order.size() != n) throw Error(ErrorCode::InvalidTree, "edges do not form a single rooted tree");

  labels_.resize(n);
  parent_.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t old = order[i];
    labels_[i] = std::move(labels[old]);
    parent_[i] = parent[old] == kNoParent ? kNoParent : new_id[static_cast<std::size_t>(parent[old])];
  }
  ordered_ = ordered;
  rebuild_children();
}

void LabeledTree::rebuild_children() {
  children_.assign(labels_.size(), {});
  for (std::size_t v = 1; v < labels_.size(); ++v) {
    children_[static_cast<std::size_t>(parent_[v])].push_back(static_cast<Node>(v));
  }
}

LabeledTree LabeledTree::with_order(bool ordered) const {
  LabeledTree copy = *this;
  copy.ordered_ = ordered;
  return copy;
}

std::string LabeledTree::node_name(Node v) { return "v" + std::to_string(v); }

namespace {

std::string subtree_text(const LabeledTree& t, Node v, bool sort_children) {
  std::vector<std::string> parts;
  parts.reserve(t.children(v).size());
  for (Node c : t.children(v)) parts.push_back(subtree_text(t, c, sort_children));
  if (sort_children) std::sort(parts.begin(), parts.end());
  std::string out = "(" + t.label(v);
  for (const auto& p : parts) {
    out += ' ';
    out += p;
  }
  out += ')';
  return out;
}

class TreeParser {
 public:
  explicit TreeParser(std::string_view text) : text_(text) {}

  LabeledTree parse(bool ordered) {
    skip_space();
    parse_node(LabeledTree::kNoParent);
    skip_space();
    if (pos_ != text_.size()) fail("trailing input after tree");
    return LabeledTree(std::move(labels_), std::move(parent_), ordered);
  }

 private:
  void parse_node(std::int64_t parent) {
    expect('(');
    skip_space();
    std::size_t start = pos_;
    while (pos_ < text_.size() &&
           (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) {
      advance();
    }
    if (start == pos_) fail("expected a label");
    const auto self = static_cast<std::int64_t>(labels_.size());
    labels_.emplace_back(text_.substr(start, pos_ - start));
    parent_.push_back(parent);
    skip_space();
    while (pos_ < text_.size() && text_[pos_] == '(') {
      parse_node(self);
      skip_space();
    }
    expect(')');
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    advance();
  }

  void skip_space() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) advance();
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

  [[noreturn]] void fail(const std::string& what) const { throw SyntaxError(line_, col_, what); }

  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t line_ = 1;
  std::size_t col_ = 1;
  std::vector<std::string> labels_;
  std::vector<std::int64_t> parent_;
};

// One canonical text per isomorphism class, grouped by size.
class TreeCatalog {
 public:
  TreeCatalog(const Alphabet& sigma, std::size_t max_nodes, bool ordered)
      : sigma_(sigma), ordered_(ordered), by_size_(max_nodes + 1) {
    for (std::size_t n = 1; n <= max_nodes; ++n) {
      std::vector<std::string> trees;
      std::vector<std::string> forest;
      if (ordered_) {
        ordered_forests(n - 1, forest, trees);
      } else {
        unordered_forests(n - 1, 0, forest, trees);
      }
      std::sort(trees.begin(), trees.end());
      trees.erase(std::unique(trees.begin(), trees.end()), trees.end());
      for (const auto& t : trees) {
        all_.push_back(t);
        size_of_.push_back(n);
      }
      by_size_[n] = std::move(trees);
    }
  }

  const std::vector<std::string>& of_size(std::size_t n) const { return by_size_[n]; }

 private:
  void emit(const std::vector<std::string>& forest, std::vector<std::string>& out) const {
    std::vector<std::string> kids = forest;
    if (!ordered_) std::sort(kids.begin(), kids.end());
    std::string body;
    for (const auto& k : kids) {
      body += ' ';
      body += k;
    }
    for (const auto& a : sigma_.symbols()) out.push_back("(" + a + body + ")");
  }

  void ordered_forests(std::size_t remaining, std::vector<std::string>& forest,
                       std::vector<std::string>& out) const {
    if (remaining == 0) {
      emit(forest, out);
      return;
    }
    for (std::size_t k = 1; k <= remaining; ++k) {
      for (const auto& t : by_size_[k]) {
        forest.push_back(t);
        ordered_forests(remaining - k, forest, out);
        forest.pop_back();
      }
    }
  }

  // Multisets of smaller trees as non-decreasing index sequences into all_.
  void unordered_forests(std::size_t remaining, std::size_t min_index,
                         std::vector<std::string>& forest, std::vector<std::string>& out) const {
    if (remaining == 0) {
      emit(forest, out);
      return;
    }
    for (std::size_t i = min_index; i < all_.size(); ++i) {
      if (size_of_[i] > remaining) continue;
      forest.push_back(all_[i]);
      unordered_forests(remaining - size_of_[i], i, forest, out);
      forest.pop_back();
    }
  }

  const Alphabet& sigma_;
  bool ordered_;
  std::vector<std::vector<std::string>> by_size_;
  std::vector<std::string> all_;
  std::vector<std::size_t> size_of_;
};

}  // namespace

std::string LabeledTree::canonical_form() const { return subtree_text(*this, 0, !ordered_); }

LabeledTree parse_tree(std::string_view text, bool ordered) {
  return TreeParser(text).parse(ordered);
}

std::string to_text(const LabeledTree& tree) { return subtree_text(tree, 0, false); }

void for_each_tree(const Alphabet& sigma, std::size_t max_nodes, bool ordered,
                   const std::function<bool(const LabeledTree&)>& visit) {
  if (max_nodes == 0) throw Error(ErrorCode::InvalidArgument, "max_nodes must be at least 1");
  if (sigma.empty()) throw Error(ErrorCode::InvalidArgument, "alphabet must be non-empty");
  TreeCatalog catalog(sigma, max_nodes, ordered);
  for (std::size_t n = 1; n <= max_nodes; ++n) {
    for (const auto& text : catalog.of_size(n)) {
      if (!visit(parse_tree(text, ordered))) return;
    }
  }
}

std::vector<LabeledTree> enumerate_trees(const Alphabet& sigma, std::size_t max_nodes, bool ordered) {
  std::vector<LabeledTree> out;
  for_each_tree(sigma, max_nodes, ordered, [&](const LabeledTree& t) {
    out.push_back(t);
    return true;
  });
  return out;
}

}  // namespace treelog
