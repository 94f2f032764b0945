#pragma once

#include <cstddef>
#include <string>

#include "relgame/errors.hpp"

namespace relgame {

/// Hard ceiling imposed by the 64-bit coalition mask.
inline constexpr int kMaxAgents = 63;

/// Size limits for the exhaustive algorithms. Each default keeps the
/// corresponding computation in the range of seconds.
struct Caps {
  int monotone = 20;          // is_monotone, equivalent_agents
  int convex = 14;            // is_convex (pairs of coalitions: 4^n)
  int enumeration = 20;       // exact_value sub-coalition sums
  int exact_shapley = 12;
  int membership = 16;        // check_core_membership
  int brute_core = 16;        // core_brute_force
  int convex_construction = 12;
  int typed_expansion = 20;
  std::size_t typed_profiles = 1'000'000;
};

inline void require_cap(long long size, long long cap, const std::string& what,
                        const std::string& hint = {}) {
  if (size > cap) {
    std::string msg = what + ": size " + std::to_string(size) + " exceeds cap " +
                      std::to_string(cap) + ", exhaustive check infeasible";
    if (!hint.empty()) msg += " (" + hint + ")";
    throw Refusal(msg);
  }
}

}  // namespace relgame
