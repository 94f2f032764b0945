#pragma once

#include <algorithm>
#include <bit>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relgame/caps.hpp"
#include "relgame/coalition.hpp"
#include "relgame/errors.hpp"

namespace relgame {

enum class GameKind { network, explicit_sets, weighted_voting, typed_expanded, value_table };

inline const char* to_string(GameKind kind) {
  switch (kind) {
    case GameKind::network: return "network";
    case GameKind::explicit_sets: return "explicit";
    case GameKind::weighted_voting: return "weighted_voting";
    case GameKind::typed_expanded: return "typed";
    case GameKind::value_table: return "value_table";
  }
  return "?";
}

/// Anything with an agent count and a real-valued characteristic function.
template <typename G>
concept Game = requires(const G& g, Mask m) {
  { g.num_agents() } -> std::convertible_to<int>;
  { g.worth(m) } -> std::convertible_to<double>;
};

/// A {0,1}-valued game. `wins` is the hot-path oracle over raw masks; the
/// mask is assumed to fit the agent count.
template <typename G>
concept SimpleGame = requires(const G& g, Mask m) {
  { g.num_agents() } -> std::convertible_to<int>;
  { g.wins(m) } -> std::convertible_to<bool>;
};

/// Adapter so simple games can be used wherever a Game is expected.
template <SimpleGame G>
struct AsWorth {
  const G& game;
  int num_agents() const { return game.num_agents(); }
  double worth(Mask m) const { return game.wins(m) ? 1.0 : 0.0; }
};

template <typename G>
double worth_of(const G& g, Mask m) {
  if constexpr (SimpleGame<G>) {
    return g.wins(m) ? 1.0 : 0.0;
  } else {
    return g.worth(m);
  }
}

/// v(C) of a simple game, with the capacity check.
template <SimpleGame G>
int value(const G& game, const Coalition& c) {
  require_same_capacity(game.num_agents(), c);
  return game.wins(c.bits()) ? 1 : 0;
}

// ---------------------------------------------------------------------------
// Concrete simple games.

/// Monotone simple game given by its minimal winning coalitions.
class ExplicitGame {
 public:
  static constexpr GameKind kind = GameKind::explicit_sets;

  ExplicitGame(int n, std::vector<Coalition> minimal_winning)
      : n_(n), minimal_(std::move(minimal_winning)) {
    (void)Coalition(n);
    for (const auto& c : minimal_) {
      require_same_capacity(n_, c);
      if (c.empty()) throw UsageError("empty coalition cannot be minimal winning (v(empty) = 0)");
    }
    for (std::size_t a = 0; a < minimal_.size(); ++a) {
      for (std::size_t b = 0; b < minimal_.size(); ++b) {
        if (a != b && minimal_[a].subset_of(minimal_[b])) {
          throw UsageError("minimal winning sets are not an antichain: set #" +
                           std::to_string(a) + " is contained in set #" + std::to_string(b));
        }
      }
    }
  }

  int num_agents() const { return n_; }
  bool known_monotone() const { return true; }
  const std::vector<Coalition>& minimal_winning() const { return minimal_; }

  bool wins(Mask m) const {
    for (const auto& c : minimal_) {
      if ((c.bits() & ~m) == 0) return true;
    }
    return false;
  }

 private:
  int n_;
  std::vector<Coalition> minimal_;
};

class WeightedVotingGame {
 public:
  static constexpr GameKind kind = GameKind::weighted_voting;

  WeightedVotingGame(std::vector<double> weights, double quota)
      : weights_(std::move(weights)), quota_(quota) {
    (void)Coalition(static_cast<int>(weights_.size()));
    if (!(quota_ > 0.0)) throw UsageError("weighted voting quota must be positive");
    for (double w : weights_) {
      if (!(w >= 0.0)) throw UsageError("weighted voting weights must be nonnegative");
    }
  }

  int num_agents() const { return static_cast<int>(weights_.size()); }
  bool known_monotone() const { return true; }
  const std::vector<double>& weights() const { return weights_; }
  double quota() const { return quota_; }

  bool wins(Mask m) const {
    double total = 0.0;
    for (; m != 0; m &= m - 1) total += weights_[std::countr_zero(m)];
    return total >= quota_;
  }

 private:
  std::vector<double> weights_;
  double quota_;
};

/// Simple game given by its full truth table (indexed by mask). Need not be
/// monotone; used for fixtures and randomized property checks.
class ValueTableGame {
 public:
  static constexpr GameKind kind = GameKind::value_table;

  ValueTableGame(int n, std::vector<std::uint8_t> table) : n_(n), table_(std::move(table)) {
    if (n < 0 || n > 24) throw UsageError("value table games support at most 24 agents");
    if (table_.size() != (std::size_t{1} << n)) {
      throw UsageError("value table must have 2^n entries");
    }
    if (table_[0] != 0) throw UsageError("value table must satisfy v(empty) = 0");
    for (auto v : table_) {
      if (v > 1) throw UsageError("value table entries must be 0 or 1");
    }
  }

  template <SimpleGame G>
  static ValueTableGame tabulate(const G& game) {
    const int n = game.num_agents();
    std::vector<std::uint8_t> t(std::size_t{1} << n);
    for (Mask m = 0; m < t.size(); ++m) t[m] = game.wins(m) ? 1 : 0;
    return ValueTableGame(n, std::move(t));
  }

  int num_agents() const { return n_; }
  bool known_monotone() const { return false; }
  bool wins(Mask m) const { return table_[m] != 0; }

 private:
  int n_;
  std::vector<std::uint8_t> table_;
};

/// Unanimity game over `carrier`: a coalition wins iff it contains every
/// carrier member. Every carrier member is a veto agent.
inline ExplicitGame unanimity_game(int n, Coalition carrier) {
  return ExplicitGame(n, {carrier});
}

// ---------------------------------------------------------------------------
// Typed games.

/// Game whose value depends only on how many agents of each type a coalition
/// holds. Profiles are stored row-major: the last type varies fastest.
class TypedGame {
 public:
  TypedGame(std::vector<int> counts, std::vector<double> survival, std::vector<std::uint8_t> values)
      : counts_(std::move(counts)), survival_(std::move(survival)), values_(std::move(values)) {
    if (counts_.empty()) throw UsageError("typed game needs at least one type");
    if (survival_.size() != counts_.size()) {
      throw UsageError("typed game needs one survival probability per type");
    }
    for (int c : counts_) {
      if (c < 0) throw UsageError("type counts must be nonnegative");
    }
    for (double r : survival_) {
      if (!(r >= 0.0 && r <= 1.0)) throw UsageError("survival probabilities must lie in [0,1]");
    }
    strides_.assign(counts_.size(), 1);
    std::size_t total = 1;
    for (std::size_t j = counts_.size(); j-- > 0;) {
      strides_[j] = total;
      total *= static_cast<std::size_t>(counts_[j]) + 1;
    }
    if (values_.size() != total) {
      throw UsageError("typed value table has " + std::to_string(values_.size()) +
                       " entries, expected " + std::to_string(total));
    }
    if (values_[0] != 0) throw UsageError("typed game must assign 0 to the empty profile");
    for (auto v : values_) {
      if (v > 1) throw UsageError("typed values must be 0 or 1");
    }
  }

  /// Builds the value table by evaluating `rule` on every profile.
  static TypedGame from_rule(std::vector<int> counts, std::vector<double> survival,
                             const std::function<bool(std::span<const int>)>& rule) {
    std::size_t total = 1;
    for (int c : counts) total *= static_cast<std::size_t>(std::max(c, 0)) + 1;
    std::vector<std::uint8_t> values(total);
    std::vector<int> q(counts.size(), 0);
    for (std::size_t idx = 0; idx < total; ++idx) {
      values[idx] = rule(q) ? 1 : 0;
      for (std::size_t j = q.size(); j-- > 0;) {
        if (++q[j] <= counts[j]) break;
        q[j] = 0;
      }
    }
    return TypedGame(std::move(counts), std::move(survival), std::move(values));
  }

  /// Rule: wins iff sum_j type_weights[j] * q_j >= quota.
  static TypedGame threshold(std::vector<int> counts, std::vector<double> survival,
                             std::vector<double> type_weights, double quota) {
    if (type_weights.size() != counts.size()) {
      throw UsageError("threshold rule needs one weight per type");
    }
    if (!(quota > 0.0)) throw UsageError("threshold quota must be positive");
    auto rule = [&](std::span<const int> q) {
      double s = 0.0;
      for (std::size_t j = 0; j < q.size(); ++j) s += type_weights[j] * q[j];
      return s >= quota;
    };
    return from_rule(std::move(counts), std::move(survival), rule);
  }

  int num_types() const { return static_cast<int>(counts_.size()); }
  int num_agents() const { return std::accumulate(counts_.begin(), counts_.end(), 0); }
  const std::vector<int>& counts() const { return counts_; }
  const std::vector<double>& survival() const { return survival_; }
  const std::vector<std::uint8_t>& values() const { return values_; }
  std::size_t num_profiles() const { return values_.size(); }

  std::size_t profile_index(std::span<const int> q) const {
    if (q.size() != counts_.size()) throw UsageError("profile length does not match type count");
    std::size_t idx = 0;
    for (std::size_t j = 0; j < q.size(); ++j) {
      if (q[j] < 0 || q[j] > counts_[j]) {
        throw UsageError("profile entry " + std::to_string(q[j]) + " for type " +
                         std::to_string(j) + " outside 0.." + std::to_string(counts_[j]));
      }
      idx += static_cast<std::size_t>(q[j]) * strides_[j];
    }
    return idx;
  }

  std::vector<int> profile_at(std::size_t idx) const {
    std::vector<int> q(counts_.size());
    for (std::size_t j = 0; j < q.size(); ++j) {
      q[j] = static_cast<int>(idx / strides_[j]);
      idx %= strides_[j];
    }
    return q;
  }

  const std::vector<std::size_t>& strides() const { return strides_; }

  bool wins(std::span<const int> q) const { return values_[profile_index(q)] != 0; }

 private:
  std::vector<int> counts_;
  std::vector<double> survival_;
  std::vector<std::uint8_t> values_;
  std::vector<std::size_t> strides_;
};

/// A typed game unrolled to individual agents. Agents of type 0 come first,
/// then type 1, and so on.
class ExpandedTypedGame {
 public:
  static constexpr GameKind kind = GameKind::typed_expanded;

  explicit ExpandedTypedGame(std::shared_ptr<const TypedGame> tg) : tg_(std::move(tg)) {
    type_masks_.assign(tg_->num_types(), 0);
    int agent = 0;
    for (int j = 0; j < tg_->num_types(); ++j) {
      for (int c = 0; c < tg_->counts()[j]; ++c, ++agent) {
        type_of_.push_back(j);
        type_masks_[j] |= Mask{1} << agent;
      }
    }
  }

  int num_agents() const { return static_cast<int>(type_of_.size()); }
  bool known_monotone() const { return false; }
  int type_of(int agent) const { return type_of_.at(agent); }
  const TypedGame& typed() const { return *tg_; }

  std::vector<int> profile_of(Mask m) const {
    std::vector<int> q(type_masks_.size());
    for (std::size_t j = 0; j < q.size(); ++j) q[j] = std::popcount(m & type_masks_[j]);
    return q;
  }

  bool wins(Mask m) const {
    std::size_t idx = 0;
    const auto& strides = tg_->strides();
    for (std::size_t j = 0; j < type_masks_.size(); ++j) {
      idx += static_cast<std::size_t>(std::popcount(m & type_masks_[j])) * strides[j];
    }
    return tg_->values()[idx] != 0;
  }

 private:
  std::shared_ptr<const TypedGame> tg_;
  std::vector<int> type_of_;
  std::vector<Mask> type_masks_;
};

// ---------------------------------------------------------------------------
// Type-erased base game.

/// Immutable, cheaply copyable handle to any simple game.
class BaseGame {
 public:
  template <SimpleGame G>
    requires(!std::same_as<std::remove_cvref_t<G>, BaseGame>)
  BaseGame(G game)  // NOLINT(google-explicit-constructor)
      : impl_(std::make_shared<Model<G>>(std::move(game))) {}

  int num_agents() const { return impl_->num_agents(); }
  bool wins(Mask m) const { return impl_->wins(m); }
  GameKind kind() const { return impl_->kind(); }
  /// True when monotonicity holds by construction of the game kind.
  bool known_monotone() const { return impl_->known_monotone(); }

  /// Access to the concrete game, or nullptr if it is of another type.
  template <typename G>
  const G* as() const {
    auto* model = dynamic_cast<const Model<G>*>(impl_.get());
    return model ? &model->game : nullptr;
  }

 private:
  struct Concept {
    virtual ~Concept() = default;
    virtual int num_agents() const = 0;
    virtual bool wins(Mask m) const = 0;
    virtual GameKind kind() const = 0;
    virtual bool known_monotone() const = 0;
  };
  template <typename G>
  struct Model final : Concept {
    explicit Model(G g) : game(std::move(g)) {}
    int num_agents() const override { return game.num_agents(); }
    bool wins(Mask m) const override { return game.wins(m); }
    GameKind kind() const override { return G::kind; }
    bool known_monotone() const override { return game.known_monotone(); }
    G game;
  };

  std::shared_ptr<const Concept> impl_;
};

// ---------------------------------------------------------------------------
// Structural predicates. All are exhaustive and refuse above their caps.

template <typename G>
bool is_monotone(const G& game, int cap = Caps{}.monotone) {
  const int n = game.num_agents();
  require_cap(n, cap, "is_monotone");
  const Mask end = Mask{1} << n;
  for (Mask c = 1; c < end; ++c) {
    const double vc = worth_of(game, c);
    for (Mask rest = c; rest != 0; rest &= rest - 1) {
      const Mask smaller = c & ~(rest & (~rest + 1));
      if (worth_of(game, smaller) > vc) return false;
    }
  }
  return true;
}

/// Supermodularity check through the local form
/// v(S+i+j) - v(S+j) >= v(S+i) - v(S) for all S and i, j outside S,
/// which is equivalent to the pairwise inequality over all A, B.
template <typename G>
bool is_convex(const G& game, int cap = Caps{}.convex, double tol = 1e-12) {
  const int n = game.num_agents();
  require_cap(n, cap, "is_convex");
  const Mask end = Mask{1} << n;
  std::vector<double> v(end);
  for (Mask m = 0; m < end; ++m) v[m] = worth_of(game, m);
  for (Mask s = 0; s < end; ++s) {
    for (int i = 0; i < n; ++i) {
      const Mask bi = Mask{1} << i;
      if (s & bi) continue;
      for (int j = i + 1; j < n; ++j) {
        const Mask bj = Mask{1} << j;
        if (s & bj) continue;
        if (v[s | bi | bj] - v[s | bj] < v[s | bi] - v[s] - tol) return false;
      }
    }
  }
  return true;
}

template <typename G>
bool equivalent_agents(const G& game, int i, int j, int cap = Caps{}.monotone,
                       double tol = 1e-12) {
  const int n = game.num_agents();
  if (i == j) throw UsageError("equivalent_agents needs two distinct agents");
  if (i < 0 || j < 0 || i >= n || j >= n) throw UsageError("agent index out of range");
  require_cap(n, cap, "equivalent_agents");
  const Mask bi = Mask{1} << i;
  const Mask bj = Mask{1} << j;
  const Mask others = Coalition::full_mask(n) & ~(bi | bj);
  bool same = true;
  for_each_submask(others, [&](Mask c) {
    if (!same) return;
    const double a = worth_of(game, c | bi);
    const double b = worth_of(game, c | bj);
    if (a - b > tol || b - a > tol) same = false;
  });
  return same;
}

struct ExpandedGame {
  BaseGame game;
  std::vector<double> survival;
};

inline ExpandedGame expand_typed(const TypedGame& tg, int cap = Caps{}.typed_expansion) {
  require_cap(tg.num_agents(), cap, "expand_typed");
  auto shared = std::make_shared<const TypedGame>(tg);
  ExpandedTypedGame expanded(shared);
  std::vector<double> r;
  r.reserve(expanded.num_agents());
  for (int a = 0; a < expanded.num_agents(); ++a) r.push_back(tg.survival()[expanded.type_of(a)]);
  return {BaseGame(std::move(expanded)), std::move(r)};
}

}  // namespace relgame
