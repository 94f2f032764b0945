#pragma once

// JSON game description files.
//
//   {
//     "format_version": 1,
//     "game": "network" | "explicit" | "weighted_voting" | "typed",
//     ...kind-specific fields...
//   }
//
// network:          "network": {"vertices", "source", "target", "edges": [{"id","from","to"}]},
//                   "survival": [per edge]; agent labels are the edge ids.
// explicit:         "agents" and/or "labels", "minimal_winning": [[member, ...], ...],
//                   "survival"; members are labels or integer indices.
// weighted_voting:  "weights", "quota", optional "labels", "survival".
// typed:            "types": [{"name","count","survival"}] and exactly one of
//                   "values" (row-major 0/1 table, last type fastest) or
//                   "threshold": {"weights", "quota"}. Agents are labelled
//                   name1..nameK per type.
//
// Unknown keys are rejected at every level.

#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <type_traits>
#include <utility>
#include <variant>
#include <vector>

#include "json.hpp"
#include "relgame/caps.hpp"
#include "relgame/coalition.hpp"
#include "relgame/errors.hpp"
#include "relgame/games.hpp"
#include "relgame/netgame.hpp"
#include "relgame/reliability.hpp"

namespace relgame::io {

using nlohmann::json;

inline constexpr int kFormatVersion = 1;

struct GameSpec {
  std::variant<Network, ExplicitGame, WeightedVotingGame, TypedGame> payload;
  std::vector<std::string> labels;  // one per agent (typed: expanded agents)
  std::vector<double> survival;     // one per agent; empty for typed (per type instead)
  std::vector<std::string> type_names;  // typed games only

  const char* kind_name() const {
    switch (payload.index()) {
      case 0: return "network";
      case 1: return "explicit";
      case 2: return "weighted_voting";
      default: return "typed";
    }
  }
  int num_agents() const { return static_cast<int>(labels.size()); }
  bool is_typed() const { return std::holds_alternative<TypedGame>(payload); }
  const TypedGame* typed() const { return std::get_if<TypedGame>(&payload); }
  const Network* network() const { return std::get_if<Network>(&payload); }

  /// The base game with its per-agent survival vector. Typed games are
  /// expanded to individual agents, subject to the expansion cap.
  ReliabilityGame reliability_game(const Caps& caps = {}) const {
    if (const auto* tg = typed()) {
      auto expanded = expand_typed(*tg, caps.typed_expansion);
      return ReliabilityGame(std::move(expanded.game), std::move(expanded.survival));
    }
    return std::visit(
        [&](const auto& g) -> ReliabilityGame {
          using G = std::decay_t<decltype(g)>;
          if constexpr (std::is_same_v<G, TypedGame>) {
            throw std::logic_error("unreachable");
          } else {
            return ReliabilityGame(BaseGame(g), survival);
          }
        },
        payload);
  }
};

namespace detail {

inline void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                                const std::string& where) {
  if (!obj.is_object()) throw UsageError(where + " must be a JSON object");
  for (const auto& [key, _] : obj.items()) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || key == a;
    if (!ok) throw UsageError("unknown field '" + key + "' in " + where);
  }
}

inline const json& require(const json& obj, const char* key, const std::string& where) {
  auto it = obj.find(key);
  if (it == obj.end()) throw UsageError("missing field '" + std::string(key) + "' in " + where);
  return *it;
}

template <typename T>
T get_as(const json& j, const std::string& what) {
  try {
    return j.get<T>();
  } catch (const json::exception& e) {
    throw UsageError(what + ": " + e.what());
  }
}

inline std::vector<double> read_survival(const json& j, int n) {
  auto r = get_as<std::vector<double>>(j, "survival");
  validate_survival(r, n);
  return r;
}

inline void check_unique(const std::vector<std::string>& labels) {
  std::set<std::string> seen;
  for (const auto& l : labels) {
    if (l.empty()) throw UsageError("agent labels must be nonempty");
    if (l.find(',') != std::string::npos) throw UsageError("agent label '" + l + "' contains a comma");
    if (!seen.insert(l).second) throw UsageError("duplicate agent label '" + l + "'");
  }
}

/// Labels from "labels" and/or "agents"; defaults to "0".."n-1".
inline std::vector<std::string> read_labels(const json& doc, int fallback_n = -1) {
  std::vector<std::string> labels;
  const bool has_labels = doc.contains("labels");
  const bool has_agents = doc.contains("agents");
  if (has_labels) labels = get_as<std::vector<std::string>>(doc["labels"], "labels");
  int n = fallback_n;
  if (has_agents) n = get_as<int>(doc["agents"], "agents");
  if (has_labels && (has_agents || fallback_n >= 0) && static_cast<int>(labels.size()) != n) {
    throw UsageError("label count " + std::to_string(labels.size()) +
                     " does not match agent count " + std::to_string(n));
  }
  if (!has_labels) {
    if (n < 0) throw UsageError("game needs 'agents' or 'labels'");
    for (int i = 0; i < n; ++i) labels.push_back(std::to_string(i));
  }
  (void)Coalition(static_cast<int>(labels.size()));
  check_unique(labels);
  return labels;
}

inline int resolve_member(const json& m, const std::vector<std::string>& labels) {
  if (m.is_number_integer()) {
    const int i = m.get<int>();
    if (i < 0 || i >= static_cast<int>(labels.size())) {
      throw UsageError("member index " + std::to_string(i) + " out of range");
    }
    return i;
  }
  if (m.is_string()) {
    const auto s = m.get<std::string>();
    for (std::size_t i = 0; i < labels.size(); ++i) {
      if (labels[i] == s) return static_cast<int>(i);
    }
    throw UsageError("unknown agent label '" + s + "'");
  }
  throw UsageError("coalition members must be labels or integer indices");
}

}  // namespace detail

inline GameSpec parse_game_spec(const json& doc) {
  using namespace detail;
  if (!doc.is_object()) throw UsageError("game file must contain a JSON object");
  const int version = get_as<int>(require(doc, "format_version", "game file"), "format_version");
  if (version != kFormatVersion) {
    throw UsageError("unsupported format_version " + std::to_string(version));
  }
  const auto kind = get_as<std::string>(require(doc, "game", "game file"), "game");

  if (kind == "network") {
    reject_unknown_keys(doc, {"format_version", "game", "network", "survival"}, "network game");
    const json& net = require(doc, "network", "network game");
    reject_unknown_keys(net, {"vertices", "source", "target", "edges"}, "network");
    auto vertices = get_as<std::vector<std::string>>(require(net, "vertices", "network"), "vertices");
    auto source = get_as<std::string>(require(net, "source", "network"), "source");
    auto target = get_as<std::string>(require(net, "target", "network"), "target");
    std::vector<Edge> edges;
    std::vector<std::string> labels;
    const json& jedges = require(net, "edges", "network");
    if (!jedges.is_array()) throw UsageError("network edges must be an array");
    for (const auto& je : jedges) {
      reject_unknown_keys(je, {"id", "from", "to"}, "edge");
      Edge e{get_as<std::string>(require(je, "id", "edge"), "edge id"),
             get_as<std::string>(require(je, "from", "edge"), "edge from"),
             get_as<std::string>(require(je, "to", "edge"), "edge to")};
      labels.push_back(e.id);
      edges.push_back(std::move(e));
    }
    check_unique(labels);
    Network network(std::move(vertices), std::move(edges), std::move(source), std::move(target));
    auto r = read_survival(require(doc, "survival", "network game"), network.num_agents());
    return GameSpec{std::move(network), std::move(labels), std::move(r), {}};
  }

  if (kind == "explicit") {
    reject_unknown_keys(doc, {"format_version", "game", "agents", "labels", "minimal_winning", "survival"},
                        "explicit game");
    auto labels = read_labels(doc);
    const int n = static_cast<int>(labels.size());
    std::vector<Coalition> sets;
    const json& mw = require(doc, "minimal_winning", "explicit game");
    if (!mw.is_array()) throw UsageError("minimal_winning must be an array of coalitions");
    for (const auto& js : mw) {
      if (!js.is_array()) throw UsageError("each minimal winning coalition must be an array");
      Coalition c(n);
      for (const auto& m : js) c.insert(resolve_member(m, labels));
      sets.push_back(c);
    }
    ExplicitGame game(n, std::move(sets));
    auto r = read_survival(require(doc, "survival", "explicit game"), n);
    return GameSpec{std::move(game), std::move(labels), std::move(r), {}};
  }

  if (kind == "weighted_voting") {
    reject_unknown_keys(doc, {"format_version", "game", "labels", "weights", "quota", "survival"},
                        "weighted voting game");
    auto weights = get_as<std::vector<double>>(require(doc, "weights", "weighted voting game"), "weights");
    const double quota = get_as<double>(require(doc, "quota", "weighted voting game"), "quota");
    auto labels = read_labels(doc, static_cast<int>(weights.size()));
    WeightedVotingGame game(std::move(weights), quota);
    auto r = read_survival(require(doc, "survival", "weighted voting game"), game.num_agents());
    return GameSpec{std::move(game), std::move(labels), std::move(r), {}};
  }

  if (kind == "typed") {
    reject_unknown_keys(doc, {"format_version", "game", "types", "values", "threshold"}, "typed game");
    const json& jtypes = require(doc, "types", "typed game");
    if (!jtypes.is_array() || jtypes.empty()) throw UsageError("types must be a nonempty array");
    std::vector<std::string> names;
    std::vector<int> counts;
    std::vector<double> survival;
    for (const auto& jt : jtypes) {
      reject_unknown_keys(jt, {"name", "count", "survival"}, "type");
      names.push_back(get_as<std::string>(require(jt, "name", "type"), "type name"));
      counts.push_back(get_as<int>(require(jt, "count", "type"), "type count"));
      survival.push_back(get_as<double>(require(jt, "survival", "type"), "type survival"));
    }
    long long total_agents = 0;
    for (int c : counts) total_agents += c;
    if (total_agents > kMaxAgents) throw UsageError("typed game has more than 63 agents");
    const bool has_values = doc.contains("values");
    const bool has_threshold = doc.contains("threshold");
    if (has_values == has_threshold) {
      throw UsageError("typed game needs exactly one of 'values' or 'threshold'");
    }
    std::optional<TypedGame> tg;
    if (has_values) {
      auto raw = get_as<std::vector<int>>(doc["values"], "values");
      std::vector<std::uint8_t> values;
      for (int v : raw) {
        if (v != 0 && v != 1) throw UsageError("typed values must be 0 or 1");
        values.push_back(static_cast<std::uint8_t>(v));
      }
      tg.emplace(counts, survival, std::move(values));
    } else {
      const json& th = doc["threshold"];
      reject_unknown_keys(th, {"weights", "quota"}, "threshold");
      tg.emplace(TypedGame::threshold(
          counts, survival, get_as<std::vector<double>>(require(th, "weights", "threshold"), "weights"),
          get_as<double>(require(th, "quota", "threshold"), "quota")));
    }
    std::vector<std::string> labels;
    for (std::size_t j = 0; j < names.size(); ++j) {
      for (int c = 1; c <= counts[j]; ++c) labels.push_back(names[j] + std::to_string(c));
    }
    check_unique(labels);
    return GameSpec{std::move(*tg), std::move(labels), {}, std::move(names)};
  }

  throw UsageError("unknown game kind '" + kind + "'");
}

inline json to_json(const GameSpec& spec) {
  json doc;
  doc["format_version"] = kFormatVersion;
  doc["game"] = spec.kind_name();
  std::visit(
      [&](const auto& g) {
        using G = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<G, Network>) {
          json edges = json::array();
          for (const auto& e : g.edges()) edges.push_back({{"id", e.id}, {"from", e.from}, {"to", e.to}});
          doc["network"] = {{"vertices", g.vertices()},
                            {"source", g.source()},
                            {"target", g.target()},
                            {"edges", edges}};
          doc["survival"] = spec.survival;
        } else if constexpr (std::is_same_v<G, ExplicitGame>) {
          doc["labels"] = spec.labels;
          json sets = json::array();
          for (const auto& c : g.minimal_winning()) {
            json members = json::array();
            for (int i : c.members()) members.push_back(spec.labels[i]);
            sets.push_back(members);
          }
          doc["minimal_winning"] = sets;
          doc["survival"] = spec.survival;
        } else if constexpr (std::is_same_v<G, WeightedVotingGame>) {
          doc["labels"] = spec.labels;
          doc["weights"] = g.weights();
          doc["quota"] = g.quota();
          doc["survival"] = spec.survival;
        } else {
          json types = json::array();
          for (int j = 0; j < g.num_types(); ++j) {
            types.push_back({{"name", spec.type_names.at(j)},
                             {"count", g.counts()[j]},
                             {"survival", g.survival()[j]}});
          }
          doc["types"] = types;
          std::vector<int> values(g.values().begin(), g.values().end());
          doc["values"] = values;
        }
      },
      spec.payload);
  return doc;
}

inline GameSpec load_game_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open game file '" + path + "'");
  json doc;
  try {
    doc = json::parse(in);
  } catch (const json::exception& e) {
    throw UsageError("cannot parse '" + path + "': " + e.what());
  }
  return parse_game_spec(doc);
}

/// Comma-separated labels to a coalition. Blank input is the empty coalition.
inline Coalition resolve_coalition(const GameSpec& spec, const std::string& text) {
  Coalition c(spec.num_agents());
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    const auto b = item.find_first_not_of(" \t");
    if (b == std::string::npos) continue;
    const auto e = item.find_last_not_of(" \t");
    const std::string label = item.substr(b, e - b + 1);
    int found = -1;
    for (int i = 0; i < spec.num_agents(); ++i) {
      if (spec.labels[i] == label) found = i;
    }
    if (found < 0) throw UsageError("unknown agent label '" + label + "'");
    if (c.contains(found)) throw UsageError("agent '" + label + "' listed twice");
    c.insert(found);
  }
  return c;
}

inline std::string format_coalition(const GameSpec& spec, const Coalition& c) {
  std::string out = "{";
  bool first = true;
  for (int i : c.members()) {
    if (!first) out += ", ";
    out += spec.labels[i];
    first = false;
  }
  return out + "}";
}

}  // namespace relgame::io
