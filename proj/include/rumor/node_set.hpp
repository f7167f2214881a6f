#pragma once

#include <algorithm>
#include <bit>
#include <cstddef>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "rumor/error.hpp"

namespace rumor {

using node_id = std::uint32_t;

/// Subset of the node universe [0, n), stored as a bitset with a cached size.
class NodeSet {
 public:
  NodeSet() = default;
  explicit NodeSet(std::size_t universe) : universe_(universe), words_((universe + 63) / 64, 0) {}

  static NodeSet of(std::size_t universe, std::initializer_list<node_id> members) {
    return from(universe, std::span<const node_id>(members.begin(), members.size()));
  }

  static NodeSet from(std::size_t universe, std::span<const node_id> members) {
    NodeSet s(universe);
    for (node_id v : members) {
      if (v >= universe) {
        throw InvalidArgument("node " + std::to_string(v) + " outside universe of size " +
                              std::to_string(universe));
      }
      s.insert(v);
    }
    return s;
  }

  static NodeSet full(std::size_t universe) {
    NodeSet s(universe);
    for (auto& w : s.words_) w = ~std::uint64_t{0};
    s.trim();
    s.count_ = universe;
    return s;
  }

  std::size_t universe() const noexcept { return universe_; }
  std::size_t size() const noexcept { return count_; }
  bool empty() const noexcept { return count_ == 0; }

  bool contains(node_id v) const noexcept {
    return v < universe_ && ((words_[v >> 6] >> (v & 63)) & 1U) != 0;
  }

  /// Returns true if v was newly added.
  bool insert(node_id v) noexcept {
    auto& w = words_[v >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (v & 63);
    if ((w & bit) != 0) return false;
    w |= bit;
    ++count_;
    return true;
  }

  bool erase(node_id v) noexcept {
    auto& w = words_[v >> 6];
    const std::uint64_t bit = std::uint64_t{1} << (v & 63);
    if ((w & bit) == 0) return false;
    w &= ~bit;
    --count_;
    return true;
  }

  void clear() noexcept {
    std::fill(words_.begin(), words_.end(), 0);
    count_ = 0;
  }

  /// Calls f(v) for every member in increasing order.
  template <class F>
  void for_each(F&& f) const {
    for (std::size_t wi = 0; wi < words_.size(); ++wi) {
      std::uint64_t w = words_[wi];
      while (w != 0) {
        const auto bit = static_cast<unsigned>(std::countr_zero(w));
        f(static_cast<node_id>(wi * 64 + bit));
        w &= w - 1;
      }
    }
  }

  std::vector<node_id> members() const {
    std::vector<node_id> out;
    out.reserve(count_);
    for_each([&](node_id v) { out.push_back(v); });
    return out;
  }

  NodeSet complement() const {
    NodeSet s(universe_);
    for (std::size_t i = 0; i < words_.size(); ++i) s.words_[i] = ~words_[i];
    s.trim();
    s.count_ = universe_ - count_;
    return s;
  }

  bool intersects(const NodeSet& other) const noexcept {
    const std::size_t nw = std::min(words_.size(), other.words_.size());
    for (std::size_t i = 0; i < nw; ++i)
      if ((words_[i] & other.words_[i]) != 0) return true;
    return false;
  }

  NodeSet& operator|=(const NodeSet& other) {
    check_same_universe(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] |= other.words_[i];
    recount();
    return *this;
  }
  NodeSet& operator&=(const NodeSet& other) {
    check_same_universe(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= other.words_[i];
    recount();
    return *this;
  }
  /// Set difference.
  NodeSet& operator-=(const NodeSet& other) {
    check_same_universe(other);
    for (std::size_t i = 0; i < words_.size(); ++i) words_[i] &= ~other.words_[i];
    recount();
    return *this;
  }

  friend NodeSet operator|(NodeSet a, const NodeSet& b) { return a |= b; }
  friend NodeSet operator&(NodeSet a, const NodeSet& b) { return a &= b; }
  friend NodeSet operator-(NodeSet a, const NodeSet& b) { return a -= b; }

  friend bool operator==(const NodeSet& a, const NodeSet& b) noexcept {
    return a.universe_ == b.universe_ && a.words_ == b.words_;
  }

  std::span<const std::uint64_t> words() const noexcept { return words_; }

 private:
  void trim() noexcept {
    if (universe_ % 64 != 0 && !words_.empty()) {
      words_.back() &= (std::uint64_t{1} << (universe_ % 64)) - 1;
    }
  }

  void recount() noexcept {
    std::size_t c = 0;
    for (auto w : words_) c += static_cast<std::size_t>(std::popcount(w));
    count_ = c;
  }

  void check_same_universe(const NodeSet& other) const {
    if (other.universe_ != universe_) throw InvalidArgument("node sets over different universes");
  }

  std::size_t universe_ = 0;
  std::vector<std::uint64_t> words_;
  std::size_t count_ = 0;
};

}  // namespace rumor
