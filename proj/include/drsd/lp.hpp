#pragma once

// Dense bounded-variable revised simplex.
//
// Problems are stated as
//
//   min  cᵀx   s.t.  a_iᵀx (≤ | = | ≥) b_i,   l ≤ x ≤ u
//
// and solved with a two-phase primal simplex on the computational form
// A x + s = b, where the slack s_i carries the row sense through its bounds.
// Dual multipliers follow the sensitivity convention y_i = ∂obj/∂b_i, so for
// a minimization ≥-rows have y ≥ 0, ≤-rows have y ≤ 0 and =-rows are free.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "drsd/dense.hpp"

namespace drsd {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

enum class RowSense { LessEqual, Equal, GreaterEqual };

struct LpProblem {
  std::vector<double> cost;
  DenseMatrix matrix;
  std::vector<RowSense> senses;
  std::vector<double> rhs;
  std::vector<double> lower;
  std::vector<double> upper;

  // n variables with zero cost and bounds [0, +inf).
  static LpProblem with_variables(std::size_t n) {
    LpProblem p;
    p.cost.assign(n, 0.0);
    p.matrix = DenseMatrix(0, n);
    p.lower.assign(n, 0.0);
    p.upper.assign(n, kInfinity);
    return p;
  }

  void add_row(std::span<const double> coefficients, RowSense sense, double value) {
    matrix.append_row(coefficients);
    senses.push_back(sense);
    rhs.push_back(value);
  }

  std::size_t num_rows() const noexcept { return senses.size(); }
  std::size_t num_cols() const noexcept { return cost.size(); }
};

enum class LpStatus { Optimal, Infeasible, Unbounded, IterationLimit };

inline std::string to_string(LpStatus status) {
  switch (status) {
    case LpStatus::Optimal: return "optimal";
    case LpStatus::Infeasible: return "infeasible";
    case LpStatus::Unbounded: return "unbounded";
    case LpStatus::IterationLimit: return "iteration-limit";
  }
  return "unknown";
}

struct LpSolution {
  LpStatus status = LpStatus::Infeasible;
  std::vector<double> primal;
  double objective = 0.0;
  std::vector<double> duals;          // one per row
  std::vector<double> reduced_costs;  // one per structural column
  std::size_t iterations = 0;

  bool optimal() const noexcept { return status == LpStatus::Optimal; }
};

struct LpTolerances {
  double feasibility = 1e-8;
  double optimality = 1e-9;
  double pivot = 1e-9;
  double duality_gap = 1e-7;
  std::size_t refactor_interval = 64;
};

namespace detail {

class BoundedSimplex {
 public:
  BoundedSimplex(const LpProblem& problem, const LpTolerances& tol)
      : p_(problem), tol_(tol), m_(problem.num_rows()), n_(problem.num_cols()) {}

  LpSolution solve() {
    LpSolution out;
    setup();

    cap_ = 50 * (m_ + n_);
    std::vector<double> phase_cost(total_, 0.0);
    bool need_phase1 = false;
    for (std::size_t i = 0; i < m_; ++i) {
      phase_cost[n_ + m_ + i] = 1.0;
      if (position_[n_ + m_ + i] >= 0) need_phase1 = true;
    }

    if (need_phase1) {
      const Outcome r = iterate(phase_cost);
      if (r == Outcome::IterationLimit) return finish(out, LpStatus::IterationLimit);
      refactor();
      recompute_basic();
      double infeasibility = 0.0;
      for (std::size_t i = 0; i < m_; ++i) infeasibility += std::max(0.0, x_[n_ + m_ + i]);
      double scale = 1.0;
      for (double b : p_.rhs) scale = std::max(scale, std::abs(b));
      if (infeasibility > tol_.feasibility * scale) return finish(out, LpStatus::Infeasible);
    }
    for (std::size_t i = 0; i < m_; ++i) upper_[n_ + m_ + i] = 0.0;

    std::fill(phase_cost.begin(), phase_cost.end(), 0.0);
    std::copy(p_.cost.begin(), p_.cost.end(), phase_cost.begin());
    const Outcome r = iterate(phase_cost);
    if (r == Outcome::IterationLimit) return finish(out, LpStatus::IterationLimit);
    if (r == Outcome::Unbounded) return finish(out, LpStatus::Unbounded);

    refactor();
    recompute_basic();
    out.primal.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    for (std::size_t j = 0; j < n_; ++j) {
      out.primal[j] = std::clamp(out.primal[j], lower_[j], upper_[j]);
    }
    out.objective = dot(p_.cost, out.primal);
    out.duals = dual_prices(phase_cost);
    out.reduced_costs.resize(n_);
    for (std::size_t j = 0; j < n_; ++j) {
      out.reduced_costs[j] = p_.cost[j] - column_dot(out.duals, j);
    }
    return finish(out, LpStatus::Optimal);
  }

 private:
  enum class Outcome { Optimal, Unbounded, IterationLimit };

  LpSolution& finish(LpSolution& out, LpStatus status) {
    out.status = status;
    out.iterations = iterations_;
    if (status != LpStatus::Optimal) {
      out.primal.assign(x_.begin(), x_.begin() + static_cast<std::ptrdiff_t>(n_));
    }
    return out;
  }

  void setup() {
    total_ = n_ + 2 * m_;
    lower_.assign(total_, 0.0);
    upper_.assign(total_, 0.0);
    x_.assign(total_, 0.0);
    position_.assign(total_, -1);
    basis_.assign(m_, 0);
    art_sign_.assign(m_, 1.0);

    for (std::size_t j = 0; j < n_; ++j) {
      lower_[j] = p_.lower[j];
      upper_[j] = p_.upper[j];
      if (std::isfinite(lower_[j])) {
        x_[j] = lower_[j];
      } else if (std::isfinite(upper_[j])) {
        x_[j] = upper_[j];
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      const std::size_t s = n_ + i;
      switch (p_.senses[i]) {
        case RowSense::LessEqual: lower_[s] = 0.0; upper_[s] = kInfinity; break;
        case RowSense::GreaterEqual: lower_[s] = -kInfinity; upper_[s] = 0.0; break;
        case RowSense::Equal: lower_[s] = 0.0; upper_[s] = 0.0; break;
      }
      lower_[n_ + m_ + i] = 0.0;
      upper_[n_ + m_ + i] = kInfinity;
    }

    // Residual of the rows with every structural column at its start value.
    for (std::size_t i = 0; i < m_; ++i) {
      double residual = p_.rhs[i];
      const auto row = p_.matrix.row(i);
      for (std::size_t j = 0; j < n_; ++j) residual -= row[j] * x_[j];
      const std::size_t s = n_ + i;
      const std::size_t a = n_ + m_ + i;
      if (residual >= lower_[s] && residual <= upper_[s]) {
        basis_[i] = s;
        x_[s] = residual;
        upper_[a] = 0.0;
      } else {
        art_sign_[i] = residual >= 0.0 ? 1.0 : -1.0;
        basis_[i] = a;
        x_[a] = std::abs(residual);
      }
      position_[basis_[i]] = static_cast<int>(i);
    }
    binv_.assign(m_ * m_, 0.0);
    for (std::size_t i = 0; i < m_; ++i) {
      binv_[i * m_ + i] = basis_[i] >= n_ + m_ ? art_sign_[i] : 1.0;
    }
  }

  double entry(std::size_t i, std::size_t j) const {
    if (j < n_) return p_.matrix(i, j);
    if (j < n_ + m_) return (j - n_ == i) ? 1.0 : 0.0;
    return (j - n_ - m_ == i) ? art_sign_[i] : 0.0;
  }

  double column_dot(std::span<const double> y, std::size_t j) const {
    if (j < n_) {
      double s = 0.0;
      for (std::size_t i = 0; i < m_; ++i) s += y[i] * p_.matrix(i, j);
      return s;
    }
    if (j < n_ + m_) return y[j - n_];
    return y[j - n_ - m_] * art_sign_[j - n_ - m_];
  }

  void ftran(std::size_t j, std::vector<double>& alpha) const {
    alpha.assign(m_, 0.0);
    if (j < n_) {
      for (std::size_t i = 0; i < m_; ++i) {
        const double a = p_.matrix(i, j);
        if (a == 0.0) continue;
        for (std::size_t k = 0; k < m_; ++k) alpha[k] += binv_[k * m_ + i] * a;
      }
      return;
    }
    const std::size_t i = j < n_ + m_ ? j - n_ : j - n_ - m_;
    const double s = j < n_ + m_ ? 1.0 : art_sign_[i];
    for (std::size_t k = 0; k < m_; ++k) alpha[k] = binv_[k * m_ + i] * s;
  }

  std::vector<double> dual_prices(std::span<const double> cost) const {
    std::vector<double> y(m_, 0.0);
    for (std::size_t k = 0; k < m_; ++k) {
      const double cb = cost[basis_[k]];
      if (cb == 0.0) continue;
      for (std::size_t i = 0; i < m_; ++i) y[i] += cb * binv_[k * m_ + i];
    }
    return y;
  }

  // Gauss-Jordan inversion of the current basis with partial pivoting.
  bool refactor() {
    since_refactor_ = 0;
    if (m_ == 0) return true;
    std::vector<double> work(m_ * 2 * m_, 0.0);
    const std::size_t w = 2 * m_;
    for (std::size_t k = 0; k < m_; ++k) {
      for (std::size_t i = 0; i < m_; ++i) work[i * w + k] = entry(i, basis_[k]);
    }
    for (std::size_t i = 0; i < m_; ++i) work[i * w + m_ + i] = 1.0;
    for (std::size_t col = 0; col < m_; ++col) {
      std::size_t best = col;
      for (std::size_t r = col + 1; r < m_; ++r) {
        if (std::abs(work[r * w + col]) > std::abs(work[best * w + col])) best = r;
      }
      const double piv = work[best * w + col];
      if (std::abs(piv) < 1e-13) return false;
      if (best != col) {
        for (std::size_t c = 0; c < w; ++c) std::swap(work[best * w + c], work[col * w + c]);
      }
      for (std::size_t c = 0; c < w; ++c) work[col * w + c] /= piv;
      for (std::size_t r = 0; r < m_; ++r) {
        if (r == col) continue;
        const double f = work[r * w + col];
        if (f == 0.0) continue;
        for (std::size_t c = 0; c < w; ++c) work[r * w + c] -= f * work[col * w + c];
      }
    }
    for (std::size_t i = 0; i < m_; ++i) {
      for (std::size_t c = 0; c < m_; ++c) binv_[i * m_ + c] = work[i * w + m_ + c];
    }
    return true;
  }

  void recompute_basic() {
    std::vector<double> residual(p_.rhs.begin(), p_.rhs.end());
    for (std::size_t j = 0; j < total_; ++j) {
      if (position_[j] >= 0 || x_[j] == 0.0) continue;
      for (std::size_t i = 0; i < m_; ++i) residual[i] -= entry(i, j) * x_[j];
    }
    for (std::size_t k = 0; k < m_; ++k) {
      double v = 0.0;
      for (std::size_t i = 0; i < m_; ++i) v += binv_[k * m_ + i] * residual[i];
      x_[basis_[k]] = v;
    }
  }

  Outcome iterate(const std::vector<double>& cost) {
    std::vector<double> alpha;
    std::size_t degenerate_run = 0;
    const std::size_t bland_threshold = 10 * std::max<std::size_t>(m_, 1);

    while (true) {
      if (iterations_ >= cap_) return Outcome::IterationLimit;
      if (since_refactor_ >= tol_.refactor_interval) {
        if (!refactor()) return Outcome::IterationLimit;
        recompute_basic();
      }
      const bool bland = degenerate_run >= bland_threshold;
      const std::vector<double> y = dual_prices(cost);

      // Pricing.
      std::size_t entering = total_;
      double direction = 0.0;
      double best = 0.0;
      for (std::size_t j = 0; j < total_; ++j) {
        if (position_[j] >= 0 || upper_[j] - lower_[j] <= 0.0) continue;
        const double d = cost[j] - column_dot(y, j);
        const bool can_increase = x_[j] < upper_[j] - tol_.feasibility;
        const bool can_decrease = x_[j] > lower_[j] + tol_.feasibility;
        double dir = 0.0;
        if (d < -tol_.optimality && can_increase) dir = 1.0;
        else if (d > tol_.optimality && can_decrease) dir = -1.0;
        if (dir == 0.0) continue;
        if (bland) {
          entering = j;
          direction = dir;
          break;
        }
        if (std::abs(d) > best) {
          best = std::abs(d);
          entering = j;
          direction = dir;
        }
      }
      if (entering == total_) return Outcome::Optimal;

      ftran(entering, alpha);

      // Ratio test (Harris two-pass outside Bland mode).
      const double flip = upper_[entering] - lower_[entering];
      auto exact_ratio = [&](std::size_t k, double slack) {
        const double rate = -direction * alpha[k];
        const std::size_t j = basis_[k];
        if (rate < 0.0) {
          if (!std::isfinite(lower_[j])) return kInfinity;
          return std::max(0.0, (x_[j] - lower_[j] + slack) / -rate);
        }
        if (!std::isfinite(upper_[j])) return kInfinity;
        return std::max(0.0, (upper_[j] - x_[j] + slack) / rate);
      };

      std::size_t leave = m_;
      double step = kInfinity;
      if (bland) {
        for (std::size_t k = 0; k < m_; ++k) {
          if (std::abs(alpha[k]) <= tol_.pivot) continue;
          const double t = exact_ratio(k, 0.0);
          if (t < step - 1e-12 ||
              (t <= step + 1e-12 && leave < m_ && basis_[k] < basis_[leave])) {
            step = std::min(step, t);
            leave = k;
          }
        }
      } else {
        double relaxed = kInfinity;
        for (std::size_t k = 0; k < m_; ++k) {
          if (std::abs(alpha[k]) <= tol_.pivot) continue;
          relaxed = std::min(relaxed, exact_ratio(k, tol_.feasibility));
        }
        double pivot_size = 0.0;
        for (std::size_t k = 0; k < m_; ++k) {
          if (std::abs(alpha[k]) <= tol_.pivot) continue;
          const double t = exact_ratio(k, 0.0);
          if (t <= relaxed && std::abs(alpha[k]) > pivot_size) {
            pivot_size = std::abs(alpha[k]);
            leave = k;
            step = t;
          }
        }
      }

      if (flip <= step) {
        if (!std::isfinite(flip)) return Outcome::Unbounded;
        step = flip;
        leave = m_;
      }
      if (!std::isfinite(step)) return Outcome::Unbounded;

      ++iterations_;
      degenerate_run = step <= 1e-12 ? degenerate_run + 1 : 0;

      x_[entering] += direction * step;
      for (std::size_t k = 0; k < m_; ++k) x_[basis_[k]] -= direction * step * alpha[k];

      if (leave == m_) {
        x_[entering] = direction > 0.0 ? upper_[entering] : lower_[entering];
        continue;
      }

      const std::size_t leaving = basis_[leave];
      const double rate = -direction * alpha[leave];
      x_[leaving] = rate < 0.0 ? lower_[leaving] : upper_[leaving];
      position_[leaving] = -1;
      basis_[leave] = entering;
      position_[entering] = static_cast<int>(leave);

      const double piv = alpha[leave];
      for (std::size_t c = 0; c < m_; ++c) binv_[leave * m_ + c] /= piv;
      for (std::size_t k = 0; k < m_; ++k) {
        if (k == leave || alpha[k] == 0.0) continue;
        const double f = alpha[k];
        for (std::size_t c = 0; c < m_; ++c) binv_[k * m_ + c] -= f * binv_[leave * m_ + c];
      }
      ++since_refactor_;
    }
  }

  const LpProblem& p_;
  const LpTolerances& tol_;
  std::size_t m_;
  std::size_t n_;
  std::size_t total_ = 0;
  std::size_t cap_ = 0;
  std::size_t iterations_ = 0;
  std::size_t since_refactor_ = 0;
  std::vector<double> lower_, upper_, x_;
  std::vector<int> position_;
  std::vector<std::size_t> basis_;
  std::vector<double> art_sign_;
  std::vector<double> binv_;
};

inline void check_well_formed(const LpProblem& p) {
  const std::size_t n = p.num_cols();
  const std::size_t m = p.num_rows();
  if (p.lower.size() != n || p.upper.size() != n) {
    throw std::invalid_argument("solve_lp: bound vectors do not match the cost vector");
  }
  if (p.rhs.size() != m) throw std::invalid_argument("solve_lp: rhs/sense length mismatch");
  if (m > 0 && (p.matrix.rows() != m || p.matrix.cols() != n)) {
    throw std::invalid_argument("solve_lp: constraint matrix has the wrong shape");
  }
  for (double b : p.rhs) {
    if (!std::isfinite(b)) throw std::invalid_argument("solve_lp: non-finite right-hand side");
  }
  for (std::size_t j = 0; j < n; ++j) {
    if (p.lower[j] > p.upper[j]) throw std::invalid_argument("solve_lp: crossed bounds");
    if (!std::isfinite(p.cost[j])) throw std::invalid_argument("solve_lp: non-finite cost");
  }
}

}  // namespace detail

inline LpSolution solve_lp(const LpProblem& problem, const LpTolerances& tolerances = {}) {
  detail::check_well_formed(problem);
  detail::BoundedSimplex simplex(problem, tolerances);
  return simplex.solve();
}

// ∞-norm of the row and bound violations of x, scaled by 1 + |b_i|.
inline double primal_residual(const LpProblem& p, std::span<const double> x) {
  double worst = 0.0;
  for (std::size_t i = 0; i < p.num_rows(); ++i) {
    const double lhs = dot(p.matrix.row(i), x);
    const double scale = 1.0 + std::abs(p.rhs[i]);
    double v = 0.0;
    switch (p.senses[i]) {
      case RowSense::LessEqual: v = std::max(0.0, lhs - p.rhs[i]); break;
      case RowSense::GreaterEqual: v = std::max(0.0, p.rhs[i] - lhs); break;
      case RowSense::Equal: v = std::abs(lhs - p.rhs[i]); break;
    }
    worst = std::max(worst, v / scale);
  }
  for (std::size_t j = 0; j < p.num_cols(); ++j) {
    worst = std::max(worst, std::max(0.0, p.lower[j] - x[j]));
    worst = std::max(worst, std::max(0.0, x[j] - p.upper[j]));
  }
  return worst;
}

// Objective of the dual implied by (y, reduced costs): bᵀy plus the bound
// terms of the columns whose reduced cost is nonzero.
inline double dual_objective(const LpProblem& p, const LpSolution& s) {
  double value = dot(p.rhs, s.duals);
  for (std::size_t j = 0; j < p.num_cols(); ++j) {
    const double d = s.reduced_costs[j];
    if (d > 0.0 && std::isfinite(p.lower[j])) value += d * p.lower[j];
    else if (d < 0.0 && std::isfinite(p.upper[j])) value += d * p.upper[j];
    else if (d != 0.0) value += d * s.primal[j];
  }
  return value;
}

}  // namespace drsd
