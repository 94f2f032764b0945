#pragma once

#include <string>
#include <vector>

#include "relgame/relgame.hpp"

namespace relgame::fixtures {

// Agent indices of the five-edge example network.
inline constexpr int A = 0, B = 1, C = 2, D = 3, E = 4;

/// s -a-> x -b-> t, s -c-> y -d-> t, and the bridge x -e-> y. Minimal
/// winning sets: {a,b}, {c,d}, {a,e,d}.
inline Network bridge_network(bool with_e = true) {
  std::vector<Edge> edges{{"a", "s", "x"}, {"b", "x", "t"}, {"c", "s", "y"}, {"d", "y", "t"}};
  if (with_e) edges.push_back({"e", "x", "y"});
  return Network({"s", "x", "y", "t"}, edges, "s", "t");
}

inline std::vector<double> bridge_survival(bool with_e = true) {
  std::vector<double> r{0.5, 0.1, 0.1, 0.5};
  if (with_e) r.push_back(0.5);
  return r;
}

inline ReliabilityGame bridge_game(bool with_e = true) {
  return ReliabilityGame(bridge_network(with_e), bridge_survival(with_e));
}

/// Three serial edges s-u-w-t plus a direct edge s-t (index 3).
inline Network serial_network() {
  return Network({"s", "u", "w", "t"},
                 {{"c1", "s", "u"}, {"c2", "u", "w"}, {"c3", "w", "t"}, {"e", "s", "t"}}, "s", "t");
}

inline Network single_edge() { return Network({"s", "t"}, {{"e", "s", "t"}}, "s", "t"); }

inline Network parallel_edges() {
  return Network({"s", "t"}, {{"p", "s", "t"}, {"q", "s", "t"}}, "s", "t");
}

}  // namespace relgame::fixtures
