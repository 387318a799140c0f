#pragma once

// LP relaxation of an IlpModel solved by a dense bounded dual simplex. Used
// by the exact solver for a root bound and reduced-cost bounds at nodes.

#include "rollstock/ilp.hpp"

#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <vector>

namespace rollstock {

struct LpRelaxation {
  double value = 0;
  std::vector<double> primal;   // per column: x variables, then row activities
  std::vector<double> reduced;  // reduced cost per column (0 for basic)
  std::vector<bool> basic;
  std::size_t iterations = 0;

  /// Valid lower bound on the objective of any integer point whose column
  /// k lies in [lo[k], hi[k]]: value + sum_k min d_k (z_k - z*_k).
  double bound(const std::vector<double>& lo, const std::vector<double>& hi) const {
    double b = value;
    for (std::size_t k = 0; k < primal.size(); ++k) {
      if (basic[k] || reduced[k] == 0) continue;
      double a = reduced[k] * (lo[k] - primal[k]);
      double c = reduced[k] * (hi[k] - primal[k]);
      b += std::min(a, c);
    }
    return b;
  }
};

namespace detail {

/// min c.x s.t. lo_r <= A_r x <= hi_r, xlo <= x <= xhi, with columns
/// z = (x, w), [A -I] z = 0 and the slack basis w as the (dual feasible)
/// starting point.
class DualSimplex {
 public:
  DualSimplex(const IlpModel& model, const std::vector<double>& xlo, const std::vector<double>& xhi)
      : n_(model.num_vars), m_(model.constraints.size()), cols_(n_ + m_) {
    cost_.assign(cols_, 0);
    lo_.assign(cols_, 0);
    hi_.assign(cols_, 0);
    for (std::size_t j = 0; j < n_; ++j) {
      cost_[j] = to_double(model.objective[j]);
      lo_[j] = xlo[j];
      hi_[j] = xhi[j];
    }
    tab_.assign(m_ * cols_, 0);
    for (std::size_t r = 0; r < m_; ++r) {
      const ConstraintRow& row = model.constraints[r];
      lo_[n_ + r] = static_cast<double>(row.lower());
      hi_[n_ + r] = static_cast<double>(row.upper());
      for (const Term& t : row.coeffs) at(r, t.var) = -static_cast<double>(t.coef);
      at(r, n_ + r) = 1;
    }
    basis_.resize(m_);
    is_basic_.assign(cols_, false);
    for (std::size_t r = 0; r < m_; ++r) {
      basis_[r] = n_ + r;
      is_basic_[n_ + r] = true;
    }
    z_.assign(cols_, 0);
    d_ = cost_;
    for (std::size_t j = 0; j < n_; ++j) z_[j] = d_[j] >= 0 ? lo_[j] : hi_[j];
  }

  std::optional<LpRelaxation> solve(std::size_t max_iterations) {
    std::size_t it = 0;
    for (; it < max_iterations; ++it) {
      recompute_basics();
      std::size_t leave = m_;
      double worst = kPrimalTol;
      for (std::size_t i = 0; i < m_; ++i) {
        std::size_t k = basis_[i];
        double viol = std::max(lo_[k] - z_[k], z_[k] - hi_[k]);
        if (viol > worst) {
          worst = viol;
          leave = i;
        }
      }
      if (leave == m_) return result(it);
      std::size_t k_leave = basis_[leave];
      bool to_lower = z_[k_leave] < lo_[k_leave];
      // Basic value = -sum alpha_k z_k; pick the entering column keeping
      // reduced costs dual feasible.
      std::size_t enter = cols_;
      double best_ratio = std::numeric_limits<double>::infinity();
      double best_pivot = 0;
      for (std::size_t k = 0; k < cols_; ++k) {
        if (is_basic_[k] || lo_[k] == hi_[k]) continue;
        double a = at(leave, k);
        if (std::abs(a) < kPivotTol) continue;
        bool at_lower = z_[k] == lo_[k];
        // Increasing z_k changes the basic value by -a.
        bool helps = to_lower ? (at_lower ? a < 0 : a > 0) : (at_lower ? a > 0 : a < 0);
        if (!helps) continue;
        double ratio = std::abs(d_[k]) / std::abs(a);
        if (ratio < best_ratio - 1e-12 || (ratio <= best_ratio + 1e-12 && std::abs(a) > best_pivot)) {
          best_ratio = ratio;
          best_pivot = std::abs(a);
          enter = k;
        }
      }
      if (enter == cols_) return std::nullopt;  // primal infeasible
      pivot(leave, enter);
      z_[k_leave] = to_lower ? lo_[k_leave] : hi_[k_leave];
    }
    return std::nullopt;
  }

 private:
  static constexpr double kPrimalTol = 1e-9;
  static constexpr double kPivotTol = 1e-9;

  std::size_t n_, m_, cols_;
  std::vector<double> cost_, lo_, hi_, z_, d_, tab_;
  std::vector<std::size_t> basis_;
  std::vector<bool> is_basic_;

  double& at(std::size_t r, std::size_t k) { return tab_[r * cols_ + k]; }

  void recompute_basics() {
    for (std::size_t i = 0; i < m_; ++i) {
      double v = 0;
      const double* row = &tab_[i * cols_];
      for (std::size_t k = 0; k < cols_; ++k)
        if (!is_basic_[k] && z_[k] != 0) v -= row[k] * z_[k];
      z_[basis_[i]] = v;
    }
  }

  void pivot(std::size_t r, std::size_t q) {
    double* prow = &tab_[r * cols_];
    double p = prow[q];
    for (std::size_t k = 0; k < cols_; ++k) prow[k] /= p;
    prow[q] = 1;
    for (std::size_t i = 0; i < m_; ++i) {
      if (i == r) continue;
      double* row = &tab_[i * cols_];
      double f = row[q];
      if (f == 0) continue;
      for (std::size_t k = 0; k < cols_; ++k) row[k] -= f * prow[k];
      row[q] = 0;
    }
    double f = d_[q];
    if (f != 0) {
      for (std::size_t k = 0; k < cols_; ++k) d_[k] -= f * prow[k];
      d_[q] = 0;
    }
    is_basic_[basis_[r]] = false;
    is_basic_[q] = true;
    basis_[r] = q;
  }

  LpRelaxation result(std::size_t iterations) const {
    LpRelaxation lp;
    lp.iterations = iterations;
    lp.primal = z_;
    lp.basic = is_basic_;
    lp.reduced.assign(cols_, 0);
    for (std::size_t k = 0; k < cols_; ++k) {
      if (!is_basic_[k]) lp.reduced[k] = d_[k];
      lp.value += cost_[k] * z_[k];
    }
    return lp;
  }
};

}  // namespace detail

/// Solves the LP relaxation with per-variable bounds (e.g. 0/1 or fixed);
/// nullopt if infeasible or the iteration cap is reached.
inline std::optional<LpRelaxation> solve_lp_relaxation(const IlpModel& model, const std::vector<double>& xlo,
                                                       const std::vector<double>& xhi,
                                                       std::size_t max_iterations = 0) {
  if (max_iterations == 0) max_iterations = 20 * (model.num_vars + model.constraints.size()) + 100;
  detail::DualSimplex lp(model, xlo, xhi);
  return lp.solve(max_iterations);
}

}  // namespace rollstock
