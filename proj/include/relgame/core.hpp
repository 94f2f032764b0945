#pragma once

#include <cmath>
#include <cstddef>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "relgame/caps.hpp"
#include "relgame/coalition.hpp"
#include "relgame/errors.hpp"
#include "relgame/games.hpp"
#include "relgame/lp.hpp"
#include "relgame/reliability.hpp"
#include "relgame/shapley.hpp"

namespace relgame {

/// Tolerance shared by membership checks and the LP, so imputations built
/// by the solver always pass their own check.
inline constexpr double kCoreTol = 1e-9;

enum class CoreVerdict { non_empty, empty, unknown };
enum class CoreMethod { veto, typed_lp, brute_lp, convex_construction };

inline const char* to_string(CoreVerdict v) {
  switch (v) {
    case CoreVerdict::non_empty: return "NonEmpty";
    case CoreVerdict::empty: return "Empty";
    case CoreVerdict::unknown: return "Unknown";
  }
  return "?";
}

inline const char* to_string(CoreMethod m) {
  switch (m) {
    case CoreMethod::veto: return "veto";
    case CoreMethod::typed_lp: return "typed";
    case CoreMethod::brute_lp: return "brute";
    case CoreMethod::convex_construction: return "convex";
  }
  return "?";
}

struct CoreResult {
  CoreVerdict verdict = CoreVerdict::unknown;
  CoreMethod method = CoreMethod::brute_lp;
  PayoffVector imputation;  // set iff verdict is non_empty
  std::string reason;       // set iff verdict is unknown
};

struct MembershipResult {
  bool in_core = false;
  std::optional<Coalition> blocking;  // lowest-mask coalition with p(C) < v(C)
  double shortfall = 0.0;             // v(B) - p(B) for the blocking coalition
};

/// Whether p is in the core of the extension. Refuses payoff vectors that
/// are not imputations.
inline MembershipResult check_core_membership(const ReliabilityGame& g, const PayoffVector& p,
                                              int cap = Caps{}.membership,
                                              double tol = kCoreTol) {
  const int n = g.num_agents();
  require_cap(n, cap, "check_core_membership");
  if (static_cast<int>(p.size()) != n) {
    throw UsageError("payoff vector has " + std::to_string(p.size()) + " entries for " +
                     std::to_string(n) + " agents");
  }
  for (int i = 0; i < n; ++i) {
    if (!(p[i] >= 0.0)) {
      throw UsageError("payoff of agent " + std::to_string(i) + " is negative; imputations need p_i >= 0");
    }
  }
  const std::vector<double> v = reliability_table(g, n);
  const Mask end = Mask{1} << n;
  double total = 0.0;
  for (double x : p) total += x;
  if (std::fabs(total - v[end - 1]) > tol) {
    throw UsageError("payoffs sum to " + std::to_string(total) +
                     " but an imputation must satisfy sum p_i = v(N) = " + std::to_string(v[end - 1]));
  }
  std::vector<double> pay(end, 0.0);
  MembershipResult out;
  out.in_core = true;
  for (Mask c = 1; c < end; ++c) {
    const Mask low = c & (~c + 1);
    pay[c] = pay[c ^ low] + p[std::countr_zero(low)];
    if (pay[c] < v[c] - tol) {
      out.in_core = false;
      out.blocking = Coalition(n, c);
      out.shortfall = v[c] - pay[c];
      break;
    }
  }
  return out;
}

/// Veto agents of a monotone simple game: i with v(N \ {i}) = 0.
template <SimpleGame G>
std::vector<int> find_veto_agents(const G& game, const Caps& caps = {}) {
  const int n = game.num_agents();
  bool monotone_by_kind = false;
  if constexpr (requires { game.known_monotone(); }) monotone_by_kind = game.known_monotone();
  if (!monotone_by_kind) {
    require_cap(n, caps.monotone, "find_veto_agents (monotonicity check)");
    if (!is_monotone(game, caps.monotone)) {
      throw Refusal("find_veto_agents: game is not monotone, the v(N \\ {i}) test is unsound");
    }
  }
  const Mask all = Coalition::full_mask(n);
  std::vector<int> veto;
  for (int i = 0; i < n; ++i) {
    if (!game.wins(all & ~(Mask{1} << i))) veto.push_back(i);
  }
  return veto;
}

/// Veto agents of the extension: i with v^r(N \ {i}) = 0. Assumes a monotone
/// base, under which the extension is monotone too.
inline std::vector<int> find_extension_veto_agents(const ReliabilityGame& g,
                                                   const Caps& caps = {}) {
  const int n = g.num_agents();
  (void)find_veto_agents(g.base, caps);  // monotonicity precondition
  require_cap(n - 1, caps.enumeration, "find_extension_veto_agents");
  std::vector<int> veto;
  const Coalition all = Coalition::grand(n);
  for (int i = 0; i < n; ++i) {
    if (exact_value(g, all.without(i), caps.enumeration) == 0.0) veto.push_back(i);
  }
  return veto;
}

/// Splits v^r(N) equally among the base game's veto agents. Without base
/// veto agents the extension's core may still be non-empty, so the verdict
/// is Unknown rather than Empty.
inline CoreResult core_via_veto(const ReliabilityGame& g, const Caps& caps = {}) {
  const int n = g.num_agents();
  CoreResult out;
  out.method = CoreMethod::veto;
  const std::vector<int> veto = find_veto_agents(g.base, caps);
  if (veto.empty()) {
    out.verdict = CoreVerdict::unknown;
    out.reason = "no base veto agents";
    return out;
  }
  const double total = exact_value(g, Coalition::grand(n), caps.enumeration);
  out.verdict = CoreVerdict::non_empty;
  out.imputation.assign(n, 0.0);
  for (int i : veto) out.imputation[i] = total / static_cast<double>(veto.size());
  return out;
}

namespace detail {

inline constexpr std::size_t kDenseRowLimit = 256;

/// Solves sum_j a_j x_j >= b over the given rows with the equality and x >= 0,
/// building the full dense LP when it is small and generating rows lazily
/// otherwise.
inline lp::FeasibilityResult solve_covering(int num_vars, std::size_t num_rows,
                                            const lp::RowGenerator& row, lp::LinearRow equality,
                                            double tol) {
  if (num_rows <= kDenseRowLimit) {
    lp::FeasibilityProblem prob;
    prob.num_vars = num_vars;
    prob.equality = std::move(equality);
    prob.at_least.resize(num_rows);
    for (std::size_t i = 0; i < num_rows; ++i) {
      prob.at_least[i].coeffs.assign(num_vars, 0.0);
      prob.at_least[i].rhs = row(i, prob.at_least[i].coeffs);
    }
    return lp::solve_feasibility(prob, tol);
  }
  return lp::solve_feasibility_lazy(num_vars, num_rows, row, std::move(equality), tol);
}

}  // namespace detail

/// Full core LP: one constraint per nonempty coalition.
inline CoreResult core_brute_force(const ReliabilityGame& g, const Caps& caps = {},
                                   double tol = kCoreTol) {
  const int n = g.num_agents();
  require_cap(n, caps.brute_core, "core_brute_force");
  CoreResult out;
  out.method = CoreMethod::brute_lp;
  if (n == 0) {
    out.verdict = CoreVerdict::non_empty;
    return out;
  }
  const std::vector<double> v = reliability_table(g, n);
  const Mask end = Mask{1} << n;
  lp::RowGenerator row = [&](std::size_t idx, std::span<double> coeffs) {
    const Mask c = static_cast<Mask>(idx) + 1;
    for (int j = 0; j < n; ++j) coeffs[j] = ((c >> j) & 1U) ? 1.0 : 0.0;
    return v[c];
  };
  lp::LinearRow eq{std::vector<double>(n, 1.0), v[end - 1]};
  const auto res = detail::solve_covering(n, static_cast<std::size_t>(end - 1), row, eq, tol);
  if (res.feasible()) {
    out.verdict = CoreVerdict::non_empty;
    out.imputation = res.x;
  } else {
    out.verdict = CoreVerdict::empty;
  }
  return out;
}

/// Core of a typed extension with equal payoff per type: k variables and one
/// constraint per coalition profile. A non-empty result is expanded to one
/// payoff per agent, in expand_typed's agent order.
inline CoreResult core_typed(const TypedGame& tg, const Caps& caps = {}, double tol = kCoreTol) {
  const std::vector<double> v = typed_value_table(tg, caps.typed_profiles);
  const int k = tg.num_types();
  const auto& counts = tg.counts();
  lp::RowGenerator row = [&](std::size_t idx, std::span<double> coeffs) {
    const auto q = tg.profile_at(idx);
    for (int j = 0; j < k; ++j) coeffs[j] = q[j];
    return v[idx];
  };
  lp::LinearRow eq;
  for (int c : counts) eq.coeffs.push_back(c);
  eq.rhs = v.back();
  const auto res = detail::solve_covering(k, v.size(), row, eq, tol);

  CoreResult out;
  out.method = CoreMethod::typed_lp;
  if (!res.feasible()) {
    out.verdict = CoreVerdict::empty;
    return out;
  }
  out.verdict = CoreVerdict::non_empty;
  for (int j = 0; j < k; ++j) {
    for (int c = 0; c < counts[j]; ++c) out.imputation.push_back(res.x[j]);
  }
  return out;
}

/// The subgame of `game` on `members`, re-indexed densely in member order.
template <SimpleGame G>
ValueTableGame restrict_game(const G& game, const Coalition& members) {
  const std::vector<int> idx = members.members();
  const int m = static_cast<int>(idx.size());
  std::vector<std::uint8_t> table(std::size_t{1} << m);
  for (Mask local = 0; local < table.size(); ++local) {
    Mask global = 0;
    for (int b = 0; b < m; ++b) {
      if ((local >> b) & 1U) global |= Mask{1} << idx[b];
    }
    table[local] = game.wins(global) ? 1 : 0;
  }
  return ValueTableGame(m, std::move(table));
}

/// Core imputation of a convex base game's extension, mixing core elements
/// of the base subgames: p = sum over nonempty C of alpha(C|N) p_C, where
/// p_C is a core element of v restricted to C, padded with zeros.
inline CoreResult convex_core_construction(const ReliabilityGame& g, const Caps& caps = {},
                                           double tol = kCoreTol) {
  const int n = g.num_agents();
  require_cap(n, caps.convex_construction, "convex_core_construction");
  if (!is_convex(g.base, caps.convex)) {
    throw Refusal("convex_core_construction: base game is not convex");
  }
  CoreResult out;
  out.method = CoreMethod::convex_construction;
  out.verdict = CoreVerdict::non_empty;
  std::vector<CompensatedSum> acc(n);
  const Mask end = Mask{1} << n;
  for (Mask c = 1; c < end; ++c) {
    double weight = 1.0;
    for (int i = 0; i < n && weight != 0.0; ++i) weight *= ((c >> i) & 1U) ? g.r[i] : 1.0 - g.r[i];
    // Zero subgames have the zero vector as their only core element.
    if (weight == 0.0 || !g.base.wins(c)) continue;

    const Coalition members(n, c);
    const ValueTableGame sub = restrict_game(g.base, members);
    const ReliabilityGame sub_game(sub, std::vector<double>(sub.num_agents(), 1.0));
    const CoreResult sub_core = core_brute_force(sub_game, caps, tol);
    if (sub_core.verdict != CoreVerdict::non_empty) {
      throw SolverFailure("convex_core_construction: subgame core came back empty");
    }
    const auto idx = members.members();
    for (std::size_t b = 0; b < idx.size(); ++b) acc[idx[b]].add(weight * sub_core.imputation[b]);
  }
  out.imputation.resize(n);
  for (int i = 0; i < n; ++i) out.imputation[i] = std::max(0.0, acc[i].value());
  return out;
}

}  // namespace relgame
