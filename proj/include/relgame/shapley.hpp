#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "relgame/caps.hpp"
#include "relgame/coalition.hpp"
#include "relgame/errors.hpp"
#include "relgame/random.hpp"
#include "relgame/reliability.hpp"

namespace relgame {

using PayoffVector = std::vector<double>;

struct ShapleyEstimate {
  int agent = 0;
  double point = 0.0;
  std::uint64_t samples = 0;
  double epsilon = 0.0;  // Hoeffding half-width for `delta`
  double delta = 0.0;
  std::uint64_t seed = 0;

  // Not clipped to [0,1].
  double lo() const { return point - epsilon; }
  double hi() const { return point + epsilon; }
};

/// How the all-agents estimator draws its samples.
enum class SamplingMode {
  /// Every agent gets its own permutation and survival stream.
  independent,
  /// One permutation and one survival draw per sample serve every agent.
  shared,
};

// ---------------------------------------------------------------------------
// Exact computation.

/// Shapley values of the reliability extension via
/// phi_i = sum_{S not containing i} |S|!(n-1-|S|)!/n! (v(S+i) - v(S)).
inline PayoffVector exact_shapley(const ReliabilityGame& g, int cap = Caps{}.exact_shapley) {
  const int n = g.num_agents();
  require_cap(n, cap, "exact_shapley", "use --epsilon/--samples to estimate instead");
  if (n == 0) return {};
  const std::vector<double> v = reliability_table(g, n);

  // weight[s] = s!(n-1-s)!/n! = 1 / (n * C(n-1, s))
  std::vector<double> weight(n);
  double choose = 1.0;
  for (int s = 0; s < n; ++s) {
    if (s > 0) choose = choose * (n - s) / s;
    weight[s] = 1.0 / (n * choose);
  }

  PayoffVector phi(n);
  const Mask end = Mask{1} << n;
  for (int i = 0; i < n; ++i) {
    const Mask bit = Mask{1} << i;
    CompensatedSum acc;
    for (Mask s = 0; s < end; ++s) {
      if (s & bit) continue;
      const double marginal = v[s | bit] - v[s];
      if (marginal != 0.0) acc.add(weight[std::popcount(s)] * marginal);
    }
    phi[i] = acc.value();
  }
  return phi;
}

// ---------------------------------------------------------------------------
// Sampling.

template <typename Rng>
void shuffle_agents(std::vector<int>& order, Rng& rng) {
  for (std::size_t k = order.size(); k > 1; --k) {
    const auto j = static_cast<std::size_t>(uniform_index(rng, k));
    std::swap(order[k - 1], order[j]);
  }
}

/// One draw of the permutation estimator for agent i:
/// random order, survival of i, survival of i's predecessors, and whether i
/// turns the surviving predecessors from losing into winning.
template <typename Rng>
int sample_once(const ReliabilityGame& g, int i, Rng& rng) {
  const int n = g.num_agents();
  if (i < 0 || i >= n) throw UsageError("agent index out of range");

  std::vector<int> order(n);
  std::iota(order.begin(), order.end(), 0);
  shuffle_agents(order, rng);

  const auto pos = std::find(order.begin(), order.end(), i);

  if (!bernoulli(rng, g.r[i])) return 0;

  Mask survivors = 0;
  for (auto it = order.begin(); it != pos; ++it) {
    if (bernoulli(rng, g.r[*it])) survivors |= Mask{1} << *it;
  }
  const int gain = static_cast<int>(g.base.wins(survivors | (Mask{1} << i))) -
                   static_cast<int>(g.base.wins(survivors));
  return gain == 1 ? 1 : 0;
}

inline double hoeffding_half_width(std::uint64_t k, double delta) {
  if (k < 1) throw UsageError("sample count must be at least 1");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("delta must lie in (0,1)");
  return std::sqrt(std::log(2.0 / delta) / (2.0 * static_cast<double>(k)));
}

/// Smallest k with k >= ln(2/delta) / (2 epsilon^2).
inline std::uint64_t plan_samples(double epsilon, double delta) {
  if (!(epsilon > 0.0)) throw UsageError("epsilon must be positive");
  if (!(delta > 0.0 && delta < 1.0)) throw UsageError("delta must lie in (0,1)");
  const double k = std::ceil(std::log(2.0 / delta) / (2.0 * epsilon * epsilon));
  if (!(k <= 4.0e18)) throw UsageError("epsilon too small: sample count overflows");
  return static_cast<std::uint64_t>(std::max(k, 1.0));
}

inline std::pair<double, double> confidence_interval(double z, std::uint64_t k, double delta) {
  const double h = hoeffding_half_width(k, delta);
  return {z - h, z + h};
}

namespace detail {

/// Runs body(begin, end, counts) over [0, k) split into contiguous chunks,
/// one per worker, and sums the per-worker integer counts.
template <typename Body>
std::vector<std::uint64_t> parallel_count(std::uint64_t k, int workers, std::size_t width,
                                          Body body) {
  workers = std::max(1, workers);
  if (static_cast<std::uint64_t>(workers) > k) workers = static_cast<int>(std::max<std::uint64_t>(k, 1));
  std::vector<std::vector<std::uint64_t>> partial(workers, std::vector<std::uint64_t>(width, 0));
  auto run = [&](int w) {
    const std::uint64_t begin = k * w / workers;
    const std::uint64_t end = k * (w + 1) / workers;
    body(begin, end, partial[w]);
  };
  if (workers == 1) {
    run(0);
  } else {
    std::vector<std::jthread> threads;
    threads.reserve(workers);
    for (int w = 0; w < workers; ++w) threads.emplace_back(run, w);
  }
  std::vector<std::uint64_t> total(width, 0);
  for (const auto& p : partial) {
    for (std::size_t a = 0; a < width; ++a) total[a] += p[a];
  }
  return total;
}

}  // namespace detail

/// Mean of k independent sample_once draws for agent i. Sample t uses the
/// stream keyed by (seed, t, i), so the result does not depend on `workers`.
inline ShapleyEstimate estimate_shapley(const ReliabilityGame& g, int i, std::uint64_t k,
                                        std::uint64_t seed, double delta = 0.05,
                                        int workers = 1) {
  if (k < 1) throw UsageError("sample count must be at least 1");
  if (i < 0 || i >= g.num_agents()) throw UsageError("agent index out of range");
  const double half = hoeffding_half_width(k, delta);
  auto counts = detail::parallel_count(
      k, workers, 1, [&](std::uint64_t begin, std::uint64_t end, std::vector<std::uint64_t>& out) {
        for (std::uint64_t t = begin; t < end; ++t) {
          auto rng = sample_stream(seed, t, static_cast<std::uint64_t>(i) + 1);
          out[0] += static_cast<std::uint64_t>(sample_once(g, i, rng));
        }
      });
  return {i, static_cast<double>(counts[0]) / static_cast<double>(k), k, half, delta, seed};
}

/// Estimates for every agent.
///
/// In shared mode each sample draws one order and one survival outcome for all
/// agents and walks the order once, so an agent's marginal is the gain it adds
/// to the surviving agents ahead of it. Per agent the draws are still i.i.d.
/// with the right mean; across agents they are correlated.
inline std::vector<ShapleyEstimate> estimate_all(const ReliabilityGame& g, std::uint64_t k,
                                                 std::uint64_t seed, double delta = 0.05,
                                                 SamplingMode mode = SamplingMode::independent,
                                                 int workers = 1) {
  const int n = g.num_agents();
  if (k < 1) throw UsageError("sample count must be at least 1");
  std::vector<ShapleyEstimate> out;
  out.reserve(n);
  if (mode == SamplingMode::independent) {
    for (int i = 0; i < n; ++i) out.push_back(estimate_shapley(g, i, k, seed, delta, workers));
    return out;
  }

  const double half = hoeffding_half_width(k, delta);
  auto counts = detail::parallel_count(
      k, workers, static_cast<std::size_t>(n),
      [&](std::uint64_t begin, std::uint64_t end, std::vector<std::uint64_t>& acc) {
        std::vector<int> order(n);
        for (std::uint64_t t = begin; t < end; ++t) {
          auto rng = sample_stream(seed, t, 0);
          std::iota(order.begin(), order.end(), 0);
          shuffle_agents(order, rng);
          Mask survivors = 0;
          bool current = g.base.wins(0);
          for (int a : order) {
            if (!bernoulli(rng, g.r[a])) continue;
            const Mask next_set = survivors | (Mask{1} << a);
            const bool next = g.base.wins(next_set);
            if (next && !current) ++acc[a];
            survivors = next_set;
            current = next;
          }
        }
      });
  for (int i = 0; i < n; ++i) {
    out.push_back({i, static_cast<double>(counts[i]) / static_cast<double>(k), k, half, delta, seed});
  }
  return out;
}

}  // namespace relgame
