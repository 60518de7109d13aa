#include <algorithm>
#include <unordered_map>

#include "explore.hpp"
#include "treelog/automata.hpp"
#include "treelog/error.hpp"
#include "treelog/structure.hpp"

namespace treelog {

std::vector<Track> tracks_of(const Formula& f) {
  const FreeVariables fv = free_vars(f);
  std::vector<Track> out;
  for (const auto& v : fv.nodes) out.push_back({v, false});
  for (const auto& v : fv.sets) out.push_back({v, true});
  std::sort(out.begin(), out.end(), [](const Track& a, const Track& b) { return a.name < b.name; });
  return out;
}

namespace {

using Step = std::function<std::uint32_t(std::uint32_t, std::uint32_t, std::uint32_t, std::uint32_t)>;

// Atom automata read one node at a time: step(left, right, label, bits) with
// absent children as state 0.
TreeAutomaton atom_automaton(const Alphabet& sigma, std::vector<Track> tracks, const AutomatonLimits& limits,
                             const Step& step, std::uint32_t accepting_state) {
  const std::size_t k = tracks.size();
  detail::Explorer<std::uint32_t> ex(sigma, std::move(tracks), limits);
  return ex.build(
      [&](const std::uint32_t* l, const std::uint32_t* r, std::uint32_t s) {
        return step(l ? *l : 0, r ? *r : 0, s >> k, s & ((std::uint32_t{1} << k) - 1));
      },
      [&](std::uint32_t q) { return q == accepting_state; });
}

}  // namespace

struct MsoCompiler::Impl {
  Alphabet sigma;
  AutomatonLimits limits;
  std::unordered_map<std::string, TreeAutomaton> cache;

  // Tracks of the result follow the formula's free variables in order of
  // first occurrence.
  TreeAutomaton build(const Formula& f) {
    std::vector<std::string> order;
    const std::string key = canonical_key(f, &order);
    if (auto it = cache.find(key); it != cache.end()) return it->second.renamed(order);

    const FreeVariables fv = free_vars(f);
    std::vector<Track> tracks;
    for (const auto& v : order) tracks.push_back({v, fv.sets.count(v) != 0});
    TreeAutomaton a = align(compute(f), tracks, limits);
    cache.emplace(key, a);
    return a;
  }

  TreeAutomaton combine(const TreeAutomaton& a, const TreeAutomaton& b, const std::function<bool(bool, bool)>& op) {
    std::vector<Track> tracks = a.tracks();
    for (const auto& t : b.tracks()) {
      if (std::find(tracks.begin(), tracks.end(), t) == tracks.end()) tracks.push_back(t);
    }
    return minimize(product(align(a, tracks, limits), align(b, tracks, limits), op, limits));
  }

  TreeAutomaton quantify(const Formula& f) {
    const Formula& body = f.child();
    const FreeVariables fv = free_vars(body);
    const bool is_set = f.is_set_quantifier();
    if (!(is_set ? fv.sets : fv.nodes).count(f.name())) return build(body);
    const bool existential = f.kind() == FormulaKind::Exists || f.kind() == FormulaKind::ExistsSet;
    TreeAutomaton a = build(body);
    if (existential) return minimize(project(a, f.name(), limits));
    return complement(minimize(project(complement(a), f.name(), limits)));
  }

  TreeAutomaton compute(const Formula& f) {
    using K = FormulaKind;
    switch (f.kind()) {
      case K::Relation: return relation(f);
      case K::Equal: {
        const auto& x = f.args()[0];
        const auto& y = f.args()[1];
        if (x == y) return TreeAutomaton::constant(sigma, {{x, false}}, true);
        return atom_automaton(
            sigma, {{x, false}, {y, false}}, limits,
            [](std::uint32_t l, std::uint32_t r, std::uint32_t, std::uint32_t bits) {
              return (l == 1 || r == 1 || bits == 3) ? 1u : 0u;
            },
            1);
      }
      case K::Member:
        return atom_automaton(
            sigma, {{f.name(), true}, {f.args()[0], false}}, limits,
            [](std::uint32_t l, std::uint32_t r, std::uint32_t, std::uint32_t bits) {
              return (l == 1 || r == 1 || bits == 3) ? 1u : 0u;
            },
            1);
      case K::Not: return complement(build(f.child()));
      case K::And:
      case K::Or: {
        const bool conj = f.kind() == K::And;
        const std::function<bool(bool, bool)> op = [conj](bool a, bool b) { return conj ? a && b : a || b; };
        TreeAutomaton acc = build(f.children()[0]);
        for (std::size_t i = 1; i < f.children().size(); ++i) {
          acc = combine(acc, build(f.children()[i]), op);
        }
        return acc;
      }
      case K::Implies:
        return combine(build(f.child(0)), build(f.child(1)), [](bool a, bool b) { return !a || b; });
      case K::Iff: return combine(build(f.child(0)), build(f.child(1)), [](bool a, bool b) { return a == b; });
      default: return quantify(f);
    }
  }

  TreeAutomaton relation(const Formula& f) {
    const std::string& name = f.name();
    const auto& args = f.args();
    if (rel::is_label(name)) {
      const std::string symbol = rel::label_symbol(name);
      if (args.size() != 1 || !sigma.contains(symbol)) {
        throw Error(ErrorCode::UnsupportedAtom, "label atom '" + name + "' does not match the alphabet");
      }
      const auto wanted = static_cast<std::uint32_t>(sigma.index_of(symbol));
      return atom_automaton(
          sigma, {{args[0], false}}, limits,
          [wanted](std::uint32_t l, std::uint32_t r, std::uint32_t label, std::uint32_t bits) {
            return (l == 1 || r == 1 || (bits == 1 && label == wanted)) ? 1u : 0u;
          },
          1);
    }
    if ((name == rel::kFc || name == rel::kNs) && args.size() == 2) {
      // 0: nothing yet, 1: this node is y, 2: found x with y as its child.
      const bool left = name == rel::kFc;
      const bool same = args[0] == args[1];
      std::vector<Track> tracks{{args[0], false}};
      if (!same) tracks.push_back({args[1], false});
      const std::uint32_t xbit = 1, ybit = same ? 1 : 2;
      return atom_automaton(
          sigma, std::move(tracks), limits,
          [=](std::uint32_t l, std::uint32_t r, std::uint32_t, std::uint32_t bits) -> std::uint32_t {
            if (l == 2 || r == 2) return 2;
            if ((bits & xbit) && (left ? l : r) == 1) return 2;
            return (bits & ybit) ? 1 : 0;
          },
          2);
    }
    throw Error(ErrorCode::UnsupportedAtom, "atom '" + name + "/" + std::to_string(args.size()) +
                                                "' is not over Label, Fc and Ns; eliminate axes first");
  }
};

MsoCompiler::MsoCompiler(Alphabet sigma, AutomatonLimits limits) : impl_(std::make_unique<Impl>()) {
  if (sigma.empty()) throw Error(ErrorCode::InvalidArgument, "alphabet must be non-empty");
  impl_->sigma = std::move(sigma);
  impl_->limits = limits;
}

MsoCompiler::~MsoCompiler() = default;

TreeAutomaton MsoCompiler::compile(const Formula& f, const std::vector<Track>& tracks) {
  for (const auto& t : tracks_of(f)) {
    if (std::find(tracks.begin(), tracks.end(), t) == tracks.end()) {
      throw Error(ErrorCode::InvalidArgument, "free variable '" + t.name + "' has no track");
    }
  }
  return align(impl_->build(f), tracks, impl_->limits);
}

TreeAutomaton MsoCompiler::compile(const Formula& f) { return compile(f, tracks_of(f)); }

const Alphabet& MsoCompiler::alphabet() const noexcept { return impl_->sigma; }

std::size_t MsoCompiler::cache_size() const noexcept { return impl_->cache.size(); }

}  // namespace treelog
