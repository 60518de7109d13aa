#pragma once

// Builds a complete deterministic automaton from a transition function on
// arbitrary hashable keys, visiting only reachable states.

#include <algorithm>
#include <deque>
#include <string>
#include <unordered_map>
#include <vector>

#include "treelog/automata.hpp"
#include "treelog/error.hpp"

namespace treelog::detail {

template <class Key, class Hash = std::hash<Key>>
class Explorer {
 public:
  Explorer(Alphabet sigma, std::vector<Track> tracks, const AutomatonLimits& limits)
      : sigma_(std::move(sigma)),
        tracks_(std::move(tracks)),
        symbols_(sigma_.size() << tracks_.size()),
        limits_(limits) {}

  // step(left, right, sym) gets nullptr for an absent child.
  template <class Step, class Accept>
  TreeAutomaton build(Step&& step, Accept&& accept) {
    std::vector<std::vector<std::uint32_t>> blocks;
    auto fill = [&](std::vector<std::uint32_t>& block, std::uint32_t a, std::uint32_t b) {
      const Key* ka = a ? &keys_[a - 1] : nullptr;
      const Key* kb = b ? &keys_[b - 1] : nullptr;
      for (std::uint32_t s = 0; s < symbols_; ++s) block.push_back(intern(step(ka, kb, s)));
    };
    blocks.emplace_back();
    fill(blocks[0], 0, 0);
    for (std::uint32_t k = 1; k <= keys_.size(); ++k) {
      std::vector<std::uint32_t> block;
      block.reserve((2 * k + 1) * symbols_);
      for (std::uint32_t j = 0; j <= k; ++j) fill(block, j, k);
      for (std::uint32_t j = 0; j < k; ++j) fill(block, k, j);
      blocks.push_back(std::move(block));
    }

    const std::size_t n = keys_.size();
    std::vector<std::uint32_t> delta((n + 1) * (n + 1) * symbols_);
    for (std::uint32_t a = 0; a <= n; ++a) {
      for (std::uint32_t b = 0; b <= n; ++b) {
        const std::uint32_t k = std::max(a, b);
        const std::size_t idx = b == k ? a : k + 1 + b;
        std::copy_n(blocks[k].begin() + idx * symbols_, symbols_,
                    delta.begin() + (static_cast<std::size_t>(a) * (n + 1) + b) * symbols_);
      }
    }
    std::vector<bool> acc(n);
    for (std::size_t q = 0; q < n; ++q) acc[q] = accept(keys_[q]);
    return TreeAutomaton(sigma_, tracks_, n, std::move(delta), std::move(acc));
  }

  std::uint32_t symbols() const { return symbols_; }

 private:
  std::uint32_t intern(Key key) {
    auto it = index_.find(key);
    if (it != index_.end()) return it->second;
    const std::size_t n = keys_.size() + 1;
    if (n > limits_.state_budget) {
      throw Error(ErrorCode::StateBudgetExceeded,
                  "automaton exceeds the state budget of " + std::to_string(limits_.state_budget));
    }
    if ((n + 1) * (n + 1) * symbols_ > limits_.cell_budget) {
      throw Error(ErrorCode::StateBudgetExceeded, "transition table exceeds the cell budget at " +
                                                      std::to_string(n) + " states");
    }
    const auto id = static_cast<std::uint32_t>(keys_.size());
    keys_.push_back(key);
    index_.emplace(std::move(key), id);
    return id;
  }

  Alphabet sigma_;
  std::vector<Track> tracks_;
  std::uint32_t symbols_;
  AutomatonLimits limits_;
  std::deque<Key> keys_;
  std::unordered_map<Key, std::uint32_t, Hash> index_;
};

struct BitsetHash {
  std::size_t operator()(const std::vector<std::uint64_t>& v) const noexcept {
    std::size_t h = 0x9e3779b97f4a7c15ULL;
    for (auto w : v) h = (h ^ std::hash<std::uint64_t>{}(w)) * 0x100000001b3ULL;
    return h;
  }
};

}  // namespace treelog::detail
