// SPDX-License-Identifier: Apache-2.0
//
// Prefix-merged automaton over token strings. Strings sharing a prefix
// traverse the same states; the state reached at the end of a string is
// final for that string's owner.

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <vector>

namespace smr {

template <typename Token>
class PrefixTrie {
 public:
  using StateId = std::size_t;
  static constexpr StateId kStart = 0;

  PrefixTrie() : states_(1) {}

  /// Adds `tokens`, returning the state it ends in.
  StateId insert(std::span<const Token> tokens) {
    StateId s = kStart;
    for (const Token& t : tokens) {
      auto [it, fresh] = states_[s].next.try_emplace(t, states_.size());
      if (fresh) states_.emplace_back();
      s = it->second;
    }
    return s;
  }

  std::optional<StateId> step(StateId from, const Token& t) const {
    const auto& next = states_[from].next;
    auto it = next.find(t);
    if (it == next.end()) return std::nullopt;
    return it->second;
  }

  std::optional<StateId> run(std::span<const Token> tokens) const {
    StateId s = kStart;
    for (const Token& t : tokens) {
      auto n = step(s, t);
      if (!n) return std::nullopt;
      s = *n;
    }
    return s;
  }

  std::size_t size() const { return states_.size(); }
  const std::map<Token, StateId>& transitions(StateId s) const {
    return states_[s].next;
  }

 private:
  struct State {
    std::map<Token, StateId> next;
  };
  std::vector<State> states_;
};

}  // namespace smr
