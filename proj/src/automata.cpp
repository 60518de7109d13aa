#include "treelog/automata.hpp"

#include <algorithm>
#include <bit>
#include <queue>
#include <sstream>

#include "explore.hpp"
#include "treelog/error.hpp"

namespace treelog {

// ---------------------------------------------------------------------------
// Encoding

BinaryTree fcns_encode(const LabeledTree& t) {
  BinaryTree b;
  b.nodes.resize(t.size());
  for (Node v = 0; v < t.size(); ++v) {
    b.nodes[v].label = t.label(v);
    const auto kids = t.children(v);
    if (!kids.empty()) b.nodes[v].left = static_cast<std::int32_t>(kids.front());
    for (std::size_t i = 0; i + 1 < kids.size(); ++i) b.nodes[kids[i]].right = static_cast<std::int32_t>(kids[i + 1]);
  }
  return b;
}

LabeledTree fcns_decode(const BinaryTree& b, std::vector<Node>* node_map) {
  const auto n = b.nodes.size();
  if (n == 0 || b.root < 0 || static_cast<std::size_t>(b.root) >= n) {
    throw Error(ErrorCode::InvalidTree, "binary tree has no root");
  }
  if (b.nodes[b.root].right >= 0) throw Error(ErrorCode::NotASingleTree, "root has a next sibling");
  std::vector<Node> id(n, 0);
  std::vector<bool> seen(n, false);
  std::vector<std::string> labels;
  std::vector<std::int64_t> parent;
  std::queue<std::int32_t> queue;
  auto visit = [&](std::int32_t v, std::int64_t p) {
    if (v < 0 || static_cast<std::size_t>(v) >= n || seen[v]) {
      throw Error(ErrorCode::InvalidTree, "binary tree edges do not form a tree");
    }
    seen[v] = true;
    id[v] = static_cast<Node>(labels.size());
    labels.push_back(b.nodes[v].label);
    parent.push_back(p);
    queue.push(v);
  };
  visit(b.root, LabeledTree::kNoParent);
  while (!queue.empty()) {
    const std::int32_t v = queue.front();
    queue.pop();
    for (std::int32_t c = b.nodes[v].left; c >= 0; c = b.nodes[c].right) visit(c, id[v]);
  }
  if (labels.size() != n) throw Error(ErrorCode::InvalidTree, "binary tree has unreachable nodes");
  if (node_map) *node_map = id;
  return LabeledTree(std::move(labels), std::move(parent), true);
}

BinaryTree annotate(const BinaryTree& b, const std::vector<Track>& tracks, const Assignment& asg) {
  BinaryTree out = b;
  for (auto& node : out.nodes) node.bits = 0;
  for (std::size_t i = 0; i < tracks.size(); ++i) {
    const std::uint32_t bit = std::uint32_t{1} << i;
    auto mark = [&](Node v) {
      if (v >= out.nodes.size()) throw Error(ErrorCode::DomainError, "assignment outside the tree");
      out.nodes[v].bits |= bit;
    };
    if (tracks[i].is_set) {
      auto it = asg.sets.find(tracks[i].name);
      if (it == asg.sets.end()) throw Error(ErrorCode::UnboundVariable, "set variable '" + tracks[i].name + "' is unbound");
      for (Node v : it->second) mark(v);
    } else {
      auto it = asg.nodes.find(tracks[i].name);
      if (it == asg.nodes.end()) throw Error(ErrorCode::UnboundVariable, "node variable '" + tracks[i].name + "' is unbound");
      mark(it->second);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Automaton

TreeAutomaton::TreeAutomaton(Alphabet sigma, std::vector<Track> tracks, std::size_t states,
                             std::vector<std::uint32_t> delta, std::vector<bool> accepting)
    : sigma_(std::move(sigma)),
      tracks_(std::move(tracks)),
      states_(states),
      symbols_(sigma_.size() << tracks_.size()),
      delta_(std::move(delta)),
      accepting_(std::move(accepting)) {
  if (sigma_.empty()) throw Error(ErrorCode::InvalidArgument, "automaton alphabet must be non-empty");
  if (tracks_.size() > 20) throw Error(ErrorCode::InvalidArgument, "too many tracks");
  if (states_ == 0) throw Error(ErrorCode::InvalidArgument, "automaton needs at least one state");
  if (delta_.size() != (states_ + 1) * (states_ + 1) * symbols_ || accepting_.size() != states_) {
    throw Error(ErrorCode::InvalidArgument, "transition table has the wrong size");
  }
  for (auto q : delta_) {
    if (q >= states_) throw Error(ErrorCode::InvalidArgument, "transition to an unknown state");
  }
}

TreeAutomaton TreeAutomaton::constant(Alphabet sigma, std::vector<Track> tracks, bool value) {
  const std::size_t syms = sigma.size() << tracks.size();
  return TreeAutomaton(std::move(sigma), std::move(tracks), 1, std::vector<std::uint32_t>(4 * syms, 0), {value});
}

int TreeAutomaton::track_index(std::string_view name) const {
  for (std::size_t i = 0; i < tracks_.size(); ++i) {
    if (tracks_[i].name == name) return static_cast<int>(i);
  }
  return -1;
}

TreeAutomaton TreeAutomaton::renamed(const std::vector<std::string>& names) const {
  if (names.size() != tracks_.size()) throw Error(ErrorCode::InvalidArgument, "track count mismatch");
  auto tracks = tracks_;
  for (std::size_t i = 0; i < names.size(); ++i) tracks[i].name = names[i];
  return TreeAutomaton(sigma_, std::move(tracks), states_, delta_, accepting_);
}

TreeAutomaton product(const TreeAutomaton& a, const TreeAutomaton& b, const std::function<bool(bool, bool)>& op,
                      const AutomatonLimits& limits) {
  if (!(a.alphabet() == b.alphabet()) || a.tracks() != b.tracks()) {
    throw Error(ErrorCode::AlphabetMismatch, "product needs equal alphabets and tracks");
  }
  detail::Explorer<std::uint64_t> ex(a.alphabet(), a.tracks(), limits);
  auto slot_a = [](const std::uint64_t* k) { return k ? static_cast<std::uint32_t>(*k >> 32) + 1 : 0u; };
  auto slot_b = [](const std::uint64_t* k) { return k ? static_cast<std::uint32_t>(*k & 0xffffffffu) + 1 : 0u; };
  return ex.build(
      [&](const std::uint64_t* l, const std::uint64_t* r, std::uint32_t s) {
        return (std::uint64_t{a.next(slot_a(l), slot_a(r), s)} << 32) | b.next(slot_b(l), slot_b(r), s);
      },
      [&](std::uint64_t k) {
        return op(a.accepting(static_cast<std::uint32_t>(k >> 32)), b.accepting(static_cast<std::uint32_t>(k)));
      });
}

TreeAutomaton complement(const TreeAutomaton& a) {
  std::vector<bool> acc(a.num_states());
  for (std::uint32_t q = 0; q < a.num_states(); ++q) acc[q] = !a.accepting(q);
  std::vector<std::uint32_t> delta;
  const std::size_t n = a.num_states();
  delta.reserve((n + 1) * (n + 1) * a.num_symbols());
  for (std::uint32_t l = 0; l <= n; ++l) {
    for (std::uint32_t r = 0; r <= n; ++r) {
      for (std::uint32_t s = 0; s < a.num_symbols(); ++s) delta.push_back(a.next(l, r, s));
    }
  }
  return TreeAutomaton(a.alphabet(), a.tracks(), n, std::move(delta), std::move(acc));
}

TreeAutomaton align(const TreeAutomaton& a, const std::vector<Track>& tracks, const AutomatonLimits& limits) {
  std::vector<std::size_t> pos;
  for (const auto& t : a.tracks()) {
    auto it = std::find(tracks.begin(), tracks.end(), t);
    if (it == tracks.end()) throw Error(ErrorCode::InvalidArgument, "align target lacks track '" + t.name + "'");
    pos.push_back(static_cast<std::size_t>(it - tracks.begin()));
  }
  const std::size_t n = a.num_states();
  const std::size_t syms = a.alphabet().size() << tracks.size();
  if ((n + 1) * (n + 1) * syms > limits.cell_budget) {
    throw Error(ErrorCode::StateBudgetExceeded, "aligned transition table exceeds the cell budget");
  }
  std::vector<std::uint32_t> old_sym(syms);
  const std::size_t k = tracks.size();
  for (std::size_t s = 0; s < syms; ++s) {
    const std::size_t label = s >> k;
    std::uint32_t bits = 0;
    for (std::size_t i = 0; i < pos.size(); ++i) {
      if ((s >> pos[i]) & 1) bits |= std::uint32_t{1} << i;
    }
    old_sym[s] = a.symbol(label, bits);
  }
  std::vector<std::uint32_t> delta;
  delta.reserve((n + 1) * (n + 1) * syms);
  for (std::uint32_t l = 0; l <= n; ++l) {
    for (std::uint32_t r = 0; r <= n; ++r) {
      for (std::size_t s = 0; s < syms; ++s) delta.push_back(a.next(l, r, old_sym[s]));
    }
  }
  return TreeAutomaton(a.alphabet(), tracks, n, std::move(delta), a.accepting_states());
}

TreeAutomaton project(const TreeAutomaton& a, std::string_view track, const AutomatonLimits& limits) {
  const int ti = a.track_index(track);
  if (ti < 0) throw Error(ErrorCode::InvalidArgument, "no track '" + std::string(track) + "' to project");
  std::vector<Track> rest = a.tracks();
  const bool counted = !rest[ti].is_set;
  rest.erase(rest.begin() + ti);

  // Subset elements are states, or for node tracks state*2 + marks seen (0/1).
  const std::size_t width = a.num_states() * (counted ? 2 : 1);
  const std::size_t words = (width + 63) / 64;
  using Set = std::vector<std::uint64_t>;
  const std::uint32_t low_mask = (std::uint32_t{1} << ti) - 1;
  const std::size_t k = rest.size();

  detail::Explorer<Set, detail::BitsetHash> ex(a.alphabet(), rest, limits);
  std::vector<std::uint32_t> absent{0};
  std::vector<std::uint32_t> elems_l, elems_r;
  auto elements = [&](const Set* set, std::vector<std::uint32_t>& out) {
    out.clear();
    if (!set) {
      out.push_back(~0u);
      return;
    }
    for (std::size_t w = 0; w < words; ++w) {
      for (std::uint64_t m = (*set)[w]; m; m &= m - 1) {
        out.push_back(static_cast<std::uint32_t>(w * 64 + std::countr_zero(m)));
      }
    }
  };
  return ex.build(
      [&](const Set* l, const Set* r, std::uint32_t s) {
        const std::uint32_t label = s >> k;
        const std::uint32_t bits = s & ((std::uint32_t{1} << k) - 1);
        const std::uint32_t spread = (bits & low_mask) | ((bits & ~low_mask) << 1);
        const std::uint32_t sym0 = a.symbol(label, spread);
        const std::uint32_t sym1 = a.symbol(label, spread | (std::uint32_t{1} << ti));
        Set out(words, 0);
        elements(l, elems_l);
        elements(r, elems_r);
        for (std::uint32_t el : elems_l) {
          const std::uint32_t ql = el == ~0u ? 0 : (counted ? el / 2 : el) + 1;
          const std::uint32_t cl = el == ~0u || !counted ? 0 : el % 2;
          for (std::uint32_t er : elems_r) {
            const std::uint32_t qr = er == ~0u ? 0 : (counted ? er / 2 : er) + 1;
            const std::uint32_t cr = er == ~0u || !counted ? 0 : er % 2;
            for (std::uint32_t b = 0; b < 2; ++b) {
              const std::uint32_t q = a.next(ql, qr, b ? sym1 : sym0);
              std::uint32_t e = q;
              if (counted) {
                const std::uint32_t c = cl + cr + b;
                if (c > 1) continue;
                e = q * 2 + c;
              }
              out[e / 64] |= std::uint64_t{1} << (e % 64);
            }
          }
        }
        return out;
      },
      [&](const Set& set) {
        for (std::size_t w = 0; w < words; ++w) {
          for (std::uint64_t m = set[w]; m; m &= m - 1) {
            const auto e = static_cast<std::uint32_t>(w * 64 + std::countr_zero(m));
            if (counted && e % 2 == 0) continue;
            if (a.accepting(counted ? e / 2 : e)) return true;
          }
        }
        return false;
      });
}

TreeAutomaton restrict_to_valid(const TreeAutomaton& a, const AutomatonLimits& limits) {
  TreeAutomaton out = a;
  const std::size_t k = a.tracks().size();
  for (std::size_t i = 0; i < k; ++i) {
    if (a.tracks()[i].is_set) continue;
    detail::Explorer<std::uint32_t> ex(a.alphabet(), a.tracks(), limits);
    TreeAutomaton single = ex.build(
        [&](const std::uint32_t* l, const std::uint32_t* r, std::uint32_t s) {
          const std::uint32_t c = (l ? *l : 0) + (r ? *r : 0) + ((s >> i) & 1);
          return std::min<std::uint32_t>(c, 2);
        },
        [](std::uint32_t c) { return c == 1; });
    out = minimize(product(out, single, [](bool x, bool y) { return x && y; }, limits));
  }
  return out;
}

TreeAutomaton minimize(const TreeAutomaton& a) {
  const std::size_t n = a.num_states();
  const std::size_t syms = a.num_symbols();
  std::vector<std::uint32_t> cls(n);
  for (std::uint32_t q = 0; q < n; ++q) cls[q] = a.accepting(q) ? 1 : 0;
  std::size_t count = 0;
  {
    std::vector<bool> present(2, false);
    for (auto c : cls) present[c] = true;
    count = present[0] + present[1];
    if (count == 1) std::fill(cls.begin(), cls.end(), 0);
  }
  // Signatures are hashed and compared on the fly; materializing them would
  // cost (states + 1) · symbols words per state.
  auto hash_of = [&](std::uint32_t q) {
    std::size_t h = 0xcbf29ce484222325ULL ^ cls[q];
    for (std::uint32_t j = 0; j <= n; ++j) {
      for (std::uint32_t s = 0; s < syms; ++s) {
        h = (h ^ cls[a.next(q + 1, j, s)]) * 0x100000001b3ULL;
        h = (h ^ cls[a.next(j, q + 1, s)]) * 0x100000001b3ULL;
      }
    }
    return h;
  };
  auto same = [&](std::uint32_t p, std::uint32_t q) {
    if (cls[p] != cls[q]) return false;
    for (std::uint32_t j = 0; j <= n; ++j) {
      for (std::uint32_t s = 0; s < syms; ++s) {
        if (cls[a.next(p + 1, j, s)] != cls[a.next(q + 1, j, s)]) return false;
        if (cls[a.next(j, p + 1, s)] != cls[a.next(j, q + 1, s)]) return false;
      }
    }
    return true;
  };
  while (true) {
    std::unordered_map<std::size_t, std::vector<std::pair<std::uint32_t, std::uint32_t>>> buckets;
    std::vector<std::uint32_t> next_cls(n);
    std::uint32_t next_count = 0;
    for (std::uint32_t q = 0; q < n; ++q) {
      auto& bucket = buckets[hash_of(q)];
      bool placed = false;
      for (const auto& [rep, c] : bucket) {
        if (same(rep, q)) {
          next_cls[q] = c;
          placed = true;
          break;
        }
      }
      if (!placed) {
        bucket.emplace_back(q, next_count);
        next_cls[q] = next_count++;
      }
    }
    const bool stable = next_count == count;
    cls = std::move(next_cls);
    count = next_count;
    if (stable) break;
  }

  std::vector<std::uint32_t> rep(count, 0);
  std::vector<bool> has(count, false);
  for (std::uint32_t q = 0; q < n; ++q) {
    if (!has[cls[q]]) {
      has[cls[q]] = true;
      rep[cls[q]] = q;
    }
  }
  const std::size_t m = count;
  std::vector<std::uint32_t> delta((m + 1) * (m + 1) * syms);
  for (std::uint32_t l = 0; l <= m; ++l) {
    const std::uint32_t ol = l ? rep[l - 1] + 1 : 0;
    for (std::uint32_t r = 0; r <= m; ++r) {
      const std::uint32_t orr = r ? rep[r - 1] + 1 : 0;
      for (std::uint32_t s = 0; s < syms; ++s) {
        delta[(static_cast<std::size_t>(l) * (m + 1) + r) * syms + s] = cls[a.next(ol, orr, s)];
      }
    }
  }
  std::vector<bool> acc(m);
  for (std::uint32_t c = 0; c < m; ++c) acc[c] = a.accepting(rep[c]);
  return TreeAutomaton(a.alphabet(), a.tracks(), m, std::move(delta), std::move(acc));
}

bool run(const TreeAutomaton& a, const BinaryTree& b) {
  const auto n = b.nodes.size();
  if (n == 0) throw Error(ErrorCode::InvalidTree, "empty binary tree");
  const std::uint32_t max_bits = std::uint32_t{1} << a.tracks().size();
  std::vector<std::uint32_t> order;
  std::vector<std::int32_t> stack{b.root};
  while (!stack.empty()) {
    const std::int32_t v = stack.back();
    stack.pop_back();
    if (v < 0 || static_cast<std::size_t>(v) >= n || order.size() >= n) {
      throw Error(ErrorCode::InvalidTree, "binary tree edges do not form a tree");
    }
    order.push_back(static_cast<std::uint32_t>(v));
    if (b.nodes[v].left >= 0) stack.push_back(b.nodes[v].left);
    if (b.nodes[v].right >= 0) stack.push_back(b.nodes[v].right);
  }
  std::vector<std::uint32_t> slot(n, 0);
  for (auto it = order.rbegin(); it != order.rend(); ++it) {
    const BinaryNode& node = b.nodes[*it];
    if (!a.alphabet().contains(node.label)) {
      throw Error(ErrorCode::AlphabetMismatch, "label '" + node.label + "' is not in the automaton's alphabet");
    }
    if (node.bits >= max_bits) throw Error(ErrorCode::AlphabetMismatch, "node carries bits beyond the tracks");
    const std::uint32_t l = node.left >= 0 ? slot[node.left] : TreeAutomaton::kAbsent;
    const std::uint32_t r = node.right >= 0 ? slot[node.right] : TreeAutomaton::kAbsent;
    slot[*it] = a.next(l, r, a.symbol(a.alphabet().index_of(node.label), node.bits)) + 1;
  }
  return a.accepting(slot[b.root] - 1);
}

std::optional<BinaryTree> witness(const TreeAutomaton& a) {
  const std::size_t n = a.num_states();
  const std::size_t syms = a.num_symbols();
  struct Back {
    std::uint32_t l, r, s;
  };
  std::vector<bool> reached(n + 1, false);
  std::vector<Back> back(n + 1);
  reached[0] = true;
  std::vector<std::uint32_t> all{0}, fresh{0};
  while (!fresh.empty()) {
    std::vector<std::uint32_t> found;
    std::vector<bool> is_fresh(n + 1, false);
    for (auto f : fresh) is_fresh[f] = true;
    for (std::uint32_t x : all) {
      for (std::uint32_t y : all) {
        if (!is_fresh[x] && !is_fresh[y]) continue;
        for (std::uint32_t s = 0; s < syms; ++s) {
          const std::uint32_t t = a.next(x, y, s) + 1;
          if (!reached[t]) {
            reached[t] = true;
            back[t] = {x, y, s};
            found.push_back(t);
          }
        }
      }
    }
    all.insert(all.end(), found.begin(), found.end());
    fresh = std::move(found);
  }
  // `all` is ordered by height, so the first accepting root is the lowest.
  for (std::uint32_t x : all) {
    for (std::uint32_t s = 0; s < syms; ++s) {
      if (!a.accepting(a.next(x, TreeAutomaton::kAbsent, s))) continue;
      BinaryTree out;
      const std::size_t k = a.tracks().size();
      std::function<std::int32_t(std::uint32_t, std::uint32_t, std::uint32_t)> build =
          [&](std::uint32_t l, std::uint32_t r, std::uint32_t sym) -> std::int32_t {
        const auto id = static_cast<std::int32_t>(out.nodes.size());
        out.nodes.push_back({a.alphabet()[sym >> k], sym & ((std::uint32_t{1} << k) - 1), -1, -1});
        if (l) {
          const std::int32_t c = build(back[l].l, back[l].r, back[l].s);
          out.nodes[id].left = c;
        }
        if (r) {
          const std::int32_t c = build(back[r].l, back[r].r, back[r].s);
          out.nodes[id].right = c;
        }
        return id;
      };
      out.root = build(x, TreeAutomaton::kAbsent, s);
      return out;
    }
  }
  return std::nullopt;
}

bool is_empty(const TreeAutomaton& a) { return !witness(a).has_value(); }

std::string dump(const TreeAutomaton& a) {
  std::ostringstream out;
  const std::size_t k = a.tracks().size();
  out << "states " << a.num_states() << "\n";
  out << "tracks";
  for (const auto& t : a.tracks()) out << ' ' << t.name;
  out << "\naccepting";
  for (std::uint32_t q = 0; q < a.num_states(); ++q) {
    if (a.accepting(q)) out << ' ' << q;
  }
  out << "\n";
  auto slot = [](std::uint32_t s) { return s == 0 ? std::string("_") : std::to_string(s - 1); };
  for (std::uint32_t l = 0; l <= a.num_states(); ++l) {
    for (std::uint32_t r = 0; r <= a.num_states(); ++r) {
      for (std::uint32_t s = 0; s < a.num_symbols(); ++s) {
        std::string sym = a.alphabet()[s >> k];
        if (k) {
          sym += ':';
          for (std::size_t i = 0; i < k; ++i) sym += ((s >> i) & 1) ? '1' : '0';
        }
        out << "(" << slot(l) << ", " << slot(r) << ", " << sym << ") -> " << a.next(l, r, s) << "\n";
      }
    }
  }
  return out.str();
}

}  // namespace treelog
