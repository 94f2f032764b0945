#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "relgame/errors.hpp"

namespace relgame::lp {

struct LinearRow {
  std::vector<double> coeffs;
  double rhs = 0.0;
};

/// Find x >= 0 with row.coeffs . x >= row.rhs for every row in `at_least`
/// and equality.coeffs . x == equality.rhs.
struct FeasibilityProblem {
  int num_vars = 0;
  std::vector<LinearRow> at_least;
  LinearRow equality;
};

enum class Status { feasible, infeasible };

struct FeasibilityResult {
  Status status = Status::infeasible;
  std::vector<double> x;         // only meaningful when feasible
  double phase1_residual = 0.0;  // sum of artificials at the phase-1 optimum
  long pivots = 0;

  bool feasible() const { return status == Status::feasible; }
};

inline constexpr double kDefaultTol = 1e-9;

inline double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

/// Largest constraint violation of x (0 when x satisfies everything).
inline double max_violation(const FeasibilityProblem& p, std::span<const double> x) {
  double worst = 0.0;
  for (double xi : x) worst = std::max(worst, -xi);
  for (const auto& row : p.at_least) worst = std::max(worst, row.rhs - dot(row.coeffs, x));
  worst = std::max(worst, std::fabs(dot(p.equality.coeffs, x) - p.equality.rhs));
  return worst;
}

namespace detail {

inline void validate(const FeasibilityProblem& p) {
  if (p.num_vars < 0) throw UsageError("negative variable count");
  auto check = [&](const LinearRow& row, const char* what) {
    if (static_cast<int>(row.coeffs.size()) != p.num_vars) {
      throw UsageError(std::string(what) + " row has " + std::to_string(row.coeffs.size()) +
                       " coefficients, expected " + std::to_string(p.num_vars));
    }
    if (!std::isfinite(row.rhs)) throw UsageError(std::string(what) + " row has non-finite rhs");
    for (double c : row.coeffs) {
      if (!std::isfinite(c)) throw UsageError(std::string(what) + " row has non-finite coefficient");
    }
  };
  for (const auto& row : p.at_least) check(row, "inequality");
  check(p.equality, "equality");
}

/// Dense simplex tableau for the phase-1 problem
///   min sum(artificials)  s.t.  rows,  all variables >= 0.
class Phase1Tableau {
 public:
  explicit Phase1Tableau(const FeasibilityProblem& p) : n_(p.num_vars) {
    const int ineq = static_cast<int>(p.at_least.size());
    rows_ = ineq + 1;
    // Inequalities with positive rhs and the equality need an artificial.
    int artificials = 1;
    for (const auto& row : p.at_least) artificials += row.rhs > 0.0 ? 1 : 0;
    first_art_ = n_ + ineq;
    cols_ = first_art_ + artificials;
    width_ = cols_ + 1;
    a_.assign(static_cast<std::size_t>(rows_) * width_, 0.0);
    basis_.assign(rows_, -1);

    int art = first_art_;
    for (int r = 0; r < ineq; ++r) {
      const auto& row = p.at_least[r];
      const int slack = n_ + r;
      if (row.rhs > 0.0) {
        // a.x - s + art = b
        for (int j = 0; j < n_; ++j) at(r, j) = row.coeffs[j];
        at(r, slack) = -1.0;
        at(r, art) = 1.0;
        rhs(r) = row.rhs;
        basis_[r] = art++;
      } else {
        // -a.x + s = -b >= 0
        for (int j = 0; j < n_; ++j) at(r, j) = -row.coeffs[j];
        at(r, slack) = 1.0;
        rhs(r) = -row.rhs;
        basis_[r] = slack;
      }
    }
    const int er = ineq;
    const double sign = p.equality.rhs < 0.0 ? -1.0 : 1.0;
    for (int j = 0; j < n_; ++j) at(er, j) = sign * p.equality.coeffs[j];
    at(er, art) = 1.0;
    rhs(er) = sign * p.equality.rhs;
    basis_[er] = art;

    // Reduced costs of the phase-1 objective: minus the column sums over rows
    // whose basic variable is artificial.
    cost_.assign(width_, 0.0);
    for (int r = 0; r < rows_; ++r) {
      if (basis_[r] < first_art_) continue;
      for (int j = 0; j < width_; ++j) {
        if (j < first_art_ || j == cols_) cost_[j] -= at(r, j);
      }
    }
  }

  /// Runs Bland's rule to optimality. Returns the number of pivots.
  long solve(long max_pivots) {
    long pivots = 0;
    while (true) {
      int enter = -1;
      for (int j = 0; j < cols_; ++j) {
        if (cost_[j] < -kCostEps) {
          enter = j;
          break;
        }
      }
      if (enter < 0) return pivots;

      int leave = -1;
      double best = std::numeric_limits<double>::infinity();
      for (int r = 0; r < rows_; ++r) {
        const double a = at(r, enter);
        if (a <= kPivotEps) continue;
        const double ratio = rhs(r) / a;
        if (leave < 0 || ratio < best - kRatioEps) {
          best = ratio;
          leave = r;
        } else if (ratio <= best + kRatioEps && basis_[r] < basis_[leave]) {
          leave = r;  // Bland: lowest basic index among ties
        }
      }
      // The phase-1 objective is bounded below by 0, so a column with no
      // positive entry can only appear through numerical breakdown.
      if (leave < 0) throw SolverFailure("simplex: no leaving row for entering column");
      if (++pivots > max_pivots) {
        throw SolverFailure("simplex: pivot budget of " + std::to_string(max_pivots) +
                            " exhausted");
      }
      pivot(leave, enter);
    }
  }

  double objective() const { return -cost_[cols_]; }

  std::vector<double> primal() const {
    std::vector<double> x(n_, 0.0);
    for (int r = 0; r < rows_; ++r) {
      if (basis_[r] < n_) x[basis_[r]] = std::max(0.0, rhs(r));
    }
    return x;
  }

 private:
  static constexpr double kCostEps = 1e-12;
  static constexpr double kPivotEps = 1e-11;
  static constexpr double kRatioEps = 1e-13;

  double& at(int r, int c) { return a_[static_cast<std::size_t>(r) * width_ + c]; }
  double at(int r, int c) const { return a_[static_cast<std::size_t>(r) * width_ + c]; }
  double& rhs(int r) { return at(r, cols_); }
  double rhs(int r) const { return at(r, cols_); }

  void pivot(int pr, int pc) {
    double* prow = &a_[static_cast<std::size_t>(pr) * width_];
    const double inv = 1.0 / prow[pc];
    for (int j = 0; j < width_; ++j) prow[j] *= inv;
    prow[pc] = 1.0;
    for (int r = 0; r < rows_; ++r) {
      if (r == pr) continue;
      double* row = &a_[static_cast<std::size_t>(r) * width_];
      const double f = row[pc];
      if (f == 0.0) continue;
      for (int j = 0; j < width_; ++j) row[j] -= f * prow[j];
      row[pc] = 0.0;
    }
    const double f = cost_[pc];
    if (f != 0.0) {
      for (int j = 0; j < width_; ++j) cost_[j] -= f * prow[j];
      cost_[pc] = 0.0;
    }
    basis_[pr] = pc;
  }

  int n_;
  int rows_ = 0;
  int cols_ = 0;
  int width_ = 0;
  int first_art_ = 0;
  std::vector<double> a_;
  std::vector<double> cost_;
  std::vector<int> basis_;
};

}  // namespace detail

/// Feasibility by phase 1 of the two-phase simplex method with Bland's
/// anti-cycling rule. There is no objective, so the phase-1 basis is the
/// answer: the problem is feasible iff the artificial sum reaches <= tol.
inline FeasibilityResult solve_feasibility(const FeasibilityProblem& p, double tol = kDefaultTol) {
  if (!(tol > 0.0)) throw UsageError("tolerance must be positive");
  detail::validate(p);
  detail::Phase1Tableau tableau(p);
  const long budget = 20000 + 200L * static_cast<long>(p.at_least.size() + p.num_vars);
  FeasibilityResult result;
  result.pivots = tableau.solve(budget);
  result.phase1_residual = tableau.objective();
  if (result.phase1_residual > tol) {
    result.status = Status::infeasible;
    return result;
  }
  result.status = Status::feasible;
  result.x = tableau.primal();
  const double drift = max_violation(p, result.x);
  if (drift > tol) {
    throw SolverFailure("simplex: solution violates constraints by " + std::to_string(drift) +
                        " after pivoting");
  }
  return result;
}

/// Fills `coeffs` (length num_vars) with row `index` and returns its rhs.
using RowGenerator = std::function<double(std::size_t index, std::span<double> coeffs)>;

/// Feasibility for problems with many inequality rows given implicitly.
/// Solves on a working subset, then adds the rows the current solution
/// violates (most violated first) until none remain. Infeasible on a subset
/// implies infeasible on the whole system.
inline FeasibilityResult solve_feasibility_lazy(int num_vars, std::size_t num_rows,
                                                const RowGenerator& row, LinearRow equality,
                                                double tol = kDefaultTol,
                                                std::size_t batch = 0) {
  if (batch == 0) batch = static_cast<std::size_t>(std::max(4, 2 * num_vars));
  FeasibilityProblem working;
  working.num_vars = num_vars;
  working.equality = std::move(equality);
  std::vector<double> coeffs(num_vars);
  long total_pivots = 0;
  while (true) {
    FeasibilityResult res = solve_feasibility(working, tol);
    total_pivots += res.pivots;
    if (!res.feasible()) {
      res.pivots = total_pivots;
      return res;
    }
    std::vector<std::pair<double, std::size_t>> violated;
    for (std::size_t i = 0; i < num_rows; ++i) {
      const double b = row(i, coeffs);
      const double gap = b - dot(coeffs, res.x);
      if (gap > tol) violated.emplace_back(gap, i);
    }
    if (violated.empty()) {
      res.pivots = total_pivots;
      return res;
    }
    const std::size_t take = std::min(batch, violated.size());
    std::partial_sort(violated.begin(), violated.begin() + static_cast<std::ptrdiff_t>(take),
                      violated.end(), [](const auto& a, const auto& b) {
                        return a.first > b.first || (a.first == b.first && a.second < b.second);
                      });
    for (std::size_t t = 0; t < take; ++t) {
      LinearRow r;
      r.coeffs.assign(num_vars, 0.0);
      r.rhs = row(violated[t].second, r.coeffs);
      working.at_least.push_back(std::move(r));
    }
  }
}

}  // namespace relgame::lp
