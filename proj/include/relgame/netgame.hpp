#pragma once

#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "relgame/coalition.hpp"
#include "relgame/errors.hpp"
#include "relgame/games.hpp"

namespace relgame {

struct Edge {
  std::string id;
  std::string from;
  std::string to;
};

/// Directed graph with a designated source and target. Each edge is one
/// agent; the position in the edge list is the agent index.
///
/// The base game is s-t connectivity: a set of edges wins iff the subgraph
/// made of those edges alone has a directed path from source to target.
class Network {
 public:
  static constexpr GameKind kind = GameKind::network;

  Network(std::vector<std::string> vertices, std::vector<Edge> edges, std::string source,
          std::string target)
      : vertices_(std::move(vertices)),
        edges_(std::move(edges)),
        source_label_(std::move(source)),
        target_label_(std::move(target)) {
    if (edges_.size() > static_cast<std::size_t>(kMaxAgents)) {
      throw UsageError("network has " + std::to_string(edges_.size()) + " edges; at most " +
                       std::to_string(kMaxAgents) + " agents are supported");
    }
    std::unordered_map<std::string, int> index;
    for (std::size_t v = 0; v < vertices_.size(); ++v) {
      if (!index.emplace(vertices_[v], static_cast<int>(v)).second) {
        throw UsageError("duplicate vertex '" + vertices_[v] + "'");
      }
    }
    auto lookup = [&](const std::string& label, const char* role) {
      auto it = index.find(label);
      if (it == index.end()) {
        throw UsageError(std::string(role) + " '" + label + "' is not a declared vertex");
      }
      return it->second;
    };
    source_ = lookup(source_label_, "source");
    target_ = lookup(target_label_, "target");
    if (source_ == target_) throw UsageError("source and target must differ");

    out_.assign(vertices_.size(), {});
    for (std::size_t e = 0; e < edges_.size(); ++e) {
      const int from = lookup(edges_[e].from, "edge endpoint");
      const int to = lookup(edges_[e].to, "edge endpoint");
      if (from != to) out_[from].push_back({static_cast<int>(e), to});
    }
  }

  int num_agents() const { return static_cast<int>(edges_.size()); }
  int num_vertices() const { return static_cast<int>(vertices_.size()); }
  bool known_monotone() const { return true; }

  const std::vector<std::string>& vertices() const { return vertices_; }
  const std::vector<Edge>& edges() const { return edges_; }
  const std::string& source() const { return source_label_; }
  const std::string& target() const { return target_label_; }

  /// 1 iff the edges in `edges` connect source to target.
  bool wins(Mask edges) const {
    std::vector<char> visited(vertices_.size(), 0);
    std::vector<int> stack{source_};
    visited[source_] = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (const auto& arc : out_[v]) {
        if (((edges >> arc.edge) & 1U) == 0 || visited[arc.to]) continue;
        if (arc.to == target_) return true;
        visited[arc.to] = 1;
        stack.push_back(arc.to);
      }
    }
    return false;
  }

  /// Whether the full edge set connects source to target at all.
  bool target_reachable() const { return wins(Coalition::full_mask(num_agents())); }

 private:
  struct Arc {
    int edge;
    int to;
  };

  std::vector<std::string> vertices_;
  std::vector<Edge> edges_;
  std::string source_label_;
  std::string target_label_;
  int source_ = 0;
  int target_ = 0;
  std::vector<std::vector<Arc>> out_;
};

/// s-t connectivity of the surviving edge set S.
inline int delta(const Network& net, const Coalition& s) { return value(net, s); }

inline BaseGame as_base_game(Network net) { return BaseGame(std::move(net)); }

}  // namespace relgame
