#pragma once

#include <cmath>
#include <cstddef>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relgame/caps.hpp"
#include "relgame/coalition.hpp"
#include "relgame/errors.hpp"
#include "relgame/games.hpp"

namespace relgame {

/// Neumaier-compensated running sum.
class CompensatedSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::fabs(sum_) >= std::fabs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }
  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline void validate_survival(std::span<const double> r, int n) {
  if (static_cast<int>(r.size()) != n) {
    throw UsageError("survival vector has " + std::to_string(r.size()) + " entries for " +
                     std::to_string(n) + " agents");
  }
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] >= 0.0 && r[i] <= 1.0)) {
      throw UsageError("survival probability of agent " + std::to_string(i) + " is " +
                       std::to_string(r[i]) + ", outside [0,1]");
    }
  }
}

/// A base game together with per-agent survival probabilities. The value of
/// a coalition is the probability that its surviving members win.
struct ReliabilityGame {
  ReliabilityGame(BaseGame base_game, std::vector<double> survival)
      : base(std::move(base_game)), r(std::move(survival)) {
    validate_survival(r, base.num_agents());
  }

  int num_agents() const { return base.num_agents(); }

  /// Extension value over a raw mask, no cap check.
  double worth(Mask c) const;

  BaseGame base;
  std::vector<double> r;
};

/// Probability that exactly `survivors` remain when `coalition` forms.
inline double alpha(std::span<const double> r, const Coalition& survivors,
                    const Coalition& coalition) {
  if (survivors.capacity() != coalition.capacity()) {
    throw UsageError("alpha: coalitions have different capacities");
  }
  if (!survivors.subset_of(coalition)) throw UsageError("alpha: survivors must be a subset of the coalition");
  validate_survival(r, coalition.capacity());
  double p = 1.0;
  for (int i : coalition.members()) p *= survivors.contains(i) ? r[i] : 1.0 - r[i];
  return p;
}

namespace detail {

/// Sum over all sub-masks S of the members of C of alpha(S|C) * v(S). The
/// product is carried down a depth-first walk over members so that each
/// term costs O(1) amortized.
template <SimpleGame G>
double sum_over_survivors(const G& base, std::span<const double> r, Mask c) {
  int members[64];
  int m = 0;
  for (Mask rest = c; rest != 0; rest &= rest - 1) members[m++] = std::countr_zero(rest);

  CompensatedSum total;
  // Explicit stack: depth d decides members[d]; prob[d] is the product of
  // factors chosen so far, chosen[d] the survivor mask so far.
  double prob[65];
  Mask chosen[65];
  int state[65];  // 0: try survive, 1: try fail, 2: done
  int depth = 0;
  prob[0] = 1.0;
  chosen[0] = 0;
  state[0] = 0;
  while (depth >= 0) {
    if (depth == m) {
      if (prob[depth] != 0.0 && base.wins(chosen[depth])) total.add(prob[depth]);
      --depth;
      continue;
    }
    const int agent = members[depth];
    if (state[depth] == 0) {
      state[depth] = 1;
      prob[depth + 1] = prob[depth] * r[agent];
      chosen[depth + 1] = chosen[depth] | (Mask{1} << agent);
    } else if (state[depth] == 1) {
      state[depth] = 2;
      prob[depth + 1] = prob[depth] * (1.0 - r[agent]);
      chosen[depth + 1] = chosen[depth];
    } else {
      --depth;
      continue;
    }
    // Zero-probability branches contribute nothing.
    if (prob[depth + 1] == 0.0) continue;
    ++depth;
    state[depth] = 0;
  }
  return total.value();
}

}  // namespace detail

inline double ReliabilityGame::worth(Mask c) const {
  return detail::sum_over_survivors(base, r, c);
}

/// v^r(C) by summing over every surviving sub-coalition.
inline double exact_value(const ReliabilityGame& g, const Coalition& c,
                          int cap = Caps{}.enumeration) {
  require_same_capacity(g.num_agents(), c);
  require_cap(c.size(), cap, "exact_value", "use sampling for larger coalitions");
  return detail::sum_over_survivors(g.base, g.r, c.bits());
}

/// v^r for all 2^n coalitions at once, indexed by mask.
///
/// Starts from the base table and folds in one agent at a time:
/// f(C) <- r_i f(C) + (1 - r_i) f(C \ {i}) for every C containing i.
/// After all agents are folded in, f(C) equals the sub-coalition sum.
inline std::vector<double> reliability_table(const ReliabilityGame& g,
                                             int cap = Caps{}.enumeration) {
  const int n = g.num_agents();
  require_cap(n, cap, "reliability_table", "use sampling for larger games");
  const Mask end = Mask{1} << n;
  std::vector<double> f(end);
  for (Mask m = 0; m < end; ++m) f[m] = g.base.wins(m) ? 1.0 : 0.0;
  for (int i = 0; i < n; ++i) {
    const Mask bit = Mask{1} << i;
    const double ri = g.r[i];
    for (Mask m = 0; m < end; ++m) {
      if (m & bit) f[m] = ri * f[m] + (1.0 - ri) * f[m ^ bit];
    }
  }
  return f;
}

// ---------------------------------------------------------------------------
// Typed games.

/// Binomial(q, r) probability mass over 0..q: the distribution of the number
/// of survivors among q agents of one type.
inline std::vector<double> survivor_pmf(int q, double r) {
  if (q < 0) throw UsageError("survivor_pmf: count must be nonnegative");
  if (!(r >= 0.0 && r <= 1.0)) throw UsageError("survivor_pmf: probability outside [0,1]");
  std::vector<double> pmf(static_cast<std::size_t>(q) + 1);
  double choose = 1.0;
  for (int w = 0; w <= q; ++w) {
    if (w > 0) choose = choose * (q - w + 1) / w;
    pmf[w] = choose * std::pow(r, w) * std::pow(1.0 - r, q - w);
  }
  return pmf;
}

/// v^r of any coalition with count profile `profile`, summing over every
/// survivor profile w <= profile.
inline double typed_value(const TypedGame& tg, std::span<const int> profile) {
  (void)tg.profile_index(profile);  // range check
  const std::size_t k = profile.size();
  std::vector<std::vector<double>> pmfs(k);
  for (std::size_t j = 0; j < k; ++j) pmfs[j] = survivor_pmf(profile[j], tg.survival()[j]);

  CompensatedSum total;
  std::vector<int> w(k, 0);
  while (true) {
    double p = 1.0;
    for (std::size_t j = 0; j < k && p != 0.0; ++j) p *= pmfs[j][w[j]];
    if (p != 0.0 && tg.wins(w)) total.add(p);
    std::size_t j = k;
    while (j-- > 0) {
      if (++w[j] <= profile[j]) break;
      w[j] = 0;
    }
    if (j == static_cast<std::size_t>(-1)) break;
  }
  return total.value();
}

/// typed_value for every profile, indexed like TypedGame::values(). One
/// binomial smoothing pass per type dimension.
inline std::vector<double> typed_value_table(const TypedGame& tg,
                                             std::size_t cap = Caps{}.typed_profiles) {
  const std::size_t total = tg.num_profiles();
  if (total > cap) {
    throw Refusal("typed game has " + std::to_string(total) + " profiles, cap is " +
                  std::to_string(cap));
  }
  std::vector<double> f(tg.values().begin(), tg.values().end());
  std::vector<double> next(total);
  const auto& counts = tg.counts();
  const auto& strides = tg.strides();
  for (int j = 0; j < tg.num_types(); ++j) {
    std::vector<std::vector<double>> pmf(counts[j] + 1);
    for (int q = 0; q <= counts[j]; ++q) pmf[q] = survivor_pmf(q, tg.survival()[j]);
    const std::size_t stride = strides[j];
    for (std::size_t idx = 0; idx < total; ++idx) {
      const int q = static_cast<int>((idx / stride) % (counts[j] + 1));
      const std::size_t base = idx - static_cast<std::size_t>(q) * stride;
      CompensatedSum s;
      for (int w = 0; w <= q; ++w) s.add(pmf[q][w] * f[base + w * stride]);
      next[idx] = s.value();
    }
    f.swap(next);
  }
  return f;
}

}  // namespace relgame
