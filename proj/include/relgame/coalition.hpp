#pragma once

#include <bit>
#include <cstdint>
#include <initializer_list>
#include <string>
#include <vector>

#include "relgame/caps.hpp"
#include "relgame/errors.hpp"

namespace relgame {

using Mask = std::uint64_t;

/// Set of agents drawn from 0..n-1, stored as a 64-bit mask.
class Coalition {
 public:
  Coalition() = default;

  /// Empty coalition over n agents.
  explicit Coalition(int n) : n_(check_n(n)) {}

  Coalition(int n, Mask bits) : n_(check_n(n)), bits_(bits) {
    if ((bits_ & ~full_mask(n_)) != 0) {
      throw UsageError("coalition has members outside 0.." + std::to_string(n_ - 1));
    }
  }

  Coalition(int n, std::initializer_list<int> members) : Coalition(n) {
    for (int i : members) insert(i);
  }

  static Coalition from_members(int n, const std::vector<int>& members) {
    Coalition c(n);
    for (int i : members) c.insert(i);
    return c;
  }

  static Coalition grand(int n) { return Coalition(n, full_mask(check_n(n))); }

  static constexpr Mask full_mask(int n) {
    return n >= 64 ? ~Mask{0} : (Mask{1} << n) - 1;
  }

  int capacity() const { return n_; }
  Mask bits() const { return bits_; }
  int size() const { return std::popcount(bits_); }
  bool empty() const { return bits_ == 0; }

  bool contains(int i) const { return i >= 0 && i < n_ && ((bits_ >> i) & 1U) != 0; }

  void insert(int i) {
    check_index(i);
    bits_ |= Mask{1} << i;
  }
  void erase(int i) {
    check_index(i);
    bits_ &= ~(Mask{1} << i);
  }

  Coalition with(int i) const {
    Coalition c = *this;
    c.insert(i);
    return c;
  }
  Coalition without(int i) const {
    Coalition c = *this;
    c.erase(i);
    return c;
  }

  bool subset_of(const Coalition& other) const { return (bits_ & ~other.bits_) == 0; }

  /// Members in increasing index order.
  std::vector<int> members() const {
    std::vector<int> out;
    out.reserve(size());
    for (Mask m = bits_; m != 0; m &= m - 1) out.push_back(std::countr_zero(m));
    return out;
  }

  friend bool operator==(const Coalition&, const Coalition&) = default;

 private:
  static int check_n(int n) {
    if (n < 0 || n > kMaxAgents) {
      throw UsageError("agent count " + std::to_string(n) + " outside 0.." +
                       std::to_string(kMaxAgents));
    }
    return n;
  }
  void check_index(int i) const {
    if (i < 0 || i >= n_) {
      throw UsageError("agent index " + std::to_string(i) + " outside 0.." +
                       std::to_string(n_ - 1));
    }
  }

  int n_ = 0;
  Mask bits_ = 0;
};

inline void require_same_capacity(int game_n, const Coalition& c) {
  if (c.capacity() != game_n) {
    throw UsageError("coalition capacity " + std::to_string(c.capacity()) +
                     " does not match game with " + std::to_string(game_n) + " agents");
  }
}

/// Calls fn(sub) for every sub-mask of `set`, including 0 and `set` itself,
/// in decreasing numeric order.
template <typename Fn>
void for_each_submask(Mask set, Fn&& fn) {
  Mask sub = set;
  while (true) {
    fn(sub);
    if (sub == 0) break;
    sub = (sub - 1) & set;
  }
}

}  // namespace relgame
