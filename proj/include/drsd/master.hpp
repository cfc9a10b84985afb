#pragma once

// Affine minorants of the worst-case recourse approximation and the master
// problem  min { cᵀx + η : η ≥ α_j + β_jᵀx  ∀j,  x ∈ X }.

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

#include "drsd/ambiguity.hpp"
#include "drsd/error.hpp"
#include "drsd/lp.hpp"
#include "drsd/model.hpp"

namespace drsd {

enum class CutOrigin { Seed, Candidate, Incumbent };

struct Minorant {
  double intercept = 0.0;      // α
  std::vector<double> slope;   // β
  CutOrigin origin = CutOrigin::Seed;
  std::size_t birth = 0;
  std::size_t rescale_count = 0;
  double scale = 1.0;  // product of every θ applied since birth

  double evaluate(std::span<const double> x) const { return intercept + dot(slope, x); }
};

// Cut collection. Index 0 always holds the seed cut η ≥ 0, which is valid
// because the recourse approximation is non-negative.
class CutPool {
 public:
  explicit CutPool(std::size_t dim) : dim_(dim) {
    cuts_.push_back(Minorant{0.0, std::vector<double>(dim, 0.0), CutOrigin::Seed, 0, 0, 1.0});
  }

  void add(Minorant cut) {
    if (cut.slope.size() != dim_) throw std::invalid_argument("CutPool::add: slope dimension");
    cuts_.push_back(std::move(cut));
  }

  double max_value(std::span<const double> x) const {
    double best = cuts_.front().evaluate(x);
    for (std::size_t j = 1; j < cuts_.size(); ++j) best = std::max(best, cuts_[j].evaluate(x));
    return best;
  }

  // Drops non-seed cuts whose cumulative scale fell below `threshold`.
  std::size_t prune(double threshold) {
    const auto before = cuts_.size();
    std::erase_if(cuts_, [threshold](const Minorant& c) {
      return c.origin != CutOrigin::Seed && c.scale < threshold;
    });
    return before - cuts_.size();
  }

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return cuts_.size(); }
  const Minorant& operator[](std::size_t i) const { return cuts_[i]; }
  std::vector<Minorant>& cuts() noexcept { return cuts_; }
  const std::vector<Minorant>& cuts() const noexcept { return cuts_; }

 private:
  std::size_t dim_;
  std::vector<Minorant> cuts_;
};

// f(x) = cᵀx + max_j (α_j + β_jᵀx)
inline double objective_estimate(const ProblemInstance& instance, const CutPool& pool,
                                 std::span<const double> x) {
  return dot(instance.c, x) + pool.max_value(x);
}

// Multiplies every non-seed cut by θ. Call before appending the cuts of the
// current iteration so that those stay unscaled.
inline void rescale_cuts(CutPool& pool, double theta_value) {
  if (!(theta_value >= 0.0 && theta_value <= 1.0)) {
    throw std::invalid_argument("rescale_cuts: theta must lie in [0, 1]");
  }
  for (Minorant& cut : pool.cuts()) {
    if (cut.origin == CutOrigin::Seed) continue;
    cut.intercept *= theta_value;
    for (double& b : cut.slope) b *= theta_value;
    cut.scale *= theta_value;
    ++cut.rescale_count;
  }
}

// α = Σ p(ω) πωᵀ r(ω),  β = −Σ p(ω) T(ω)ᵀ πω
inline Minorant build_cut(const ExtremalDistribution& distribution,
                          std::span<const std::vector<double>> duals,
                          std::span<const RealizedScenario> scenarios, CutOrigin origin,
                          std::size_t birth) {
  const std::size_t n = distribution.weights.size();
  if (duals.size() != n || scenarios.size() != n) {
    throw std::invalid_argument("build_cut: distribution, duals and scenarios differ in length");
  }
  if (n == 0) throw std::invalid_argument("build_cut: empty distribution");
  Minorant cut;
  cut.origin = origin;
  cut.birth = birth;
  cut.slope.assign(scenarios.front().T.cols(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double p = distribution.weights[i];
    if (p == 0.0) continue;
    cut.intercept += p * dot(duals[i], scenarios[i].r);
    const std::vector<double> t_pi = multiply_transposed(scenarios[i].T, duals[i]);
    for (std::size_t j = 0; j < cut.slope.size(); ++j) cut.slope[j] -= p * t_pi[j];
  }
  return cut;
}

inline Minorant build_cut(const ExtremalDistribution& distribution,
                          std::span<const std::vector<double>> duals, const Sample& sample,
                          const ProblemInstance& instance, CutOrigin origin = CutOrigin::Candidate,
                          std::size_t birth = 0) {
  std::vector<RealizedScenario> scenarios;
  for (const Observation& omega : sample.unique()) scenarios.push_back(realize(instance, omega));
  return build_cut(distribution, duals, scenarios, origin, birth);
}

// Replace the incumbent iff f^k(x^k) − f^k(x̂) < γ [f^{k−1}(x^k) − f^{k−1}(x̂)].
inline bool incumbent_test(double new_at_candidate, double new_at_incumbent,
                           double old_at_candidate, double old_at_incumbent, double gamma) {
  return new_at_candidate - new_at_incumbent < gamma * (old_at_candidate - old_at_incumbent);
}

inline bool incumbent_test(const CutPool& after, const CutPool& before,
                           const ProblemInstance& instance, std::span<const double> candidate,
                           std::span<const double> incumbent, double gamma) {
  return incumbent_test(objective_estimate(instance, after, candidate),
                        objective_estimate(instance, after, incumbent),
                        objective_estimate(instance, before, candidate),
                        objective_estimate(instance, before, incumbent), gamma);
}

struct MasterSolution {
  std::vector<double> x;
  double value = 0.0;
};

namespace detail {

inline std::vector<double> clamp_to_bounds(std::vector<double> x, const ProblemInstance& in) {
  for (std::size_t j = 0; j < x.size(); ++j) x[j] = std::clamp(x[j], in.x_lower[j], in.x_upper[j]);
  return x;
}

}  // namespace detail

// Master LP in its natural form: variables (x, η), one row per cut.
inline MasterSolution solve_master_direct(const CutPool& pool, const ProblemInstance& instance) {
  const std::size_t dx = instance.first_stage_dim();
  LpProblem lp = LpProblem::with_variables(dx + 1);
  std::copy(instance.c.begin(), instance.c.end(), lp.cost.begin());
  lp.cost[dx] = 1.0;
  std::copy(instance.x_lower.begin(), instance.x_lower.end(), lp.lower.begin());
  std::copy(instance.x_upper.begin(), instance.x_upper.end(), lp.upper.begin());
  lp.lower[dx] = -kInfinity;
  std::vector<double> row(dx + 1, 0.0);
  for (std::size_t i = 0; i < instance.first_stage_rows(); ++i) {
    std::copy(instance.A.row(i).begin(), instance.A.row(i).end(), row.begin());
    row[dx] = 0.0;
    lp.add_row(row, instance.senses[i], instance.b[i]);
  }
  for (const Minorant& cut : pool.cuts()) {
    for (std::size_t j = 0; j < dx; ++j) row[j] = -cut.slope[j];
    row[dx] = 1.0;
    lp.add_row(row, RowSense::GreaterEqual, cut.intercept);
  }
  const LpSolution s = solve_lp(lp);
  if (s.status == LpStatus::Infeasible) throw InstanceError("master problem infeasible: X is empty");
  if (!s.optimal()) throw LpFailure("master LP failed: " + to_string(s.status));
  MasterSolution out;
  out.x = detail::clamp_to_bounds({s.primal.begin(), s.primal.begin() + static_cast<std::ptrdiff_t>(dx)},
                                  instance);
  out.value = objective_estimate(instance, pool, out.x);
  return out;
}

// Same problem solved through its LP dual, whose basis has only d_x + 1 rows
// however many cuts the pool holds. The primal point is read off the dual
// multipliers of the dual's equality rows.
inline MasterSolution solve_master(const CutPool& pool, const ProblemInstance& instance) {
  const std::size_t dx = instance.first_stage_dim();
  const std::size_t m1 = instance.first_stage_rows();
  const std::size_t nc = pool.size();

  std::vector<std::size_t> lower_idx, upper_idx;
  for (std::size_t t = 0; t < dx; ++t) {
    if (std::isfinite(instance.x_lower[t])) lower_idx.push_back(t);
    if (std::isfinite(instance.x_upper[t])) upper_idx.push_back(t);
  }
  const std::size_t nv = m1 + nc + lower_idx.size() + upper_idx.size();

  LpProblem lp = LpProblem::with_variables(nv);
  lp.matrix = DenseMatrix(dx + 1, nv);
  lp.senses.assign(dx + 1, RowSense::Equal);
  lp.rhs.assign(dx + 1, 0.0);
  for (std::size_t t = 0; t < dx; ++t) lp.rhs[t] = instance.c[t];
  lp.rhs[dx] = 1.0;

  std::size_t col = 0;
  for (std::size_t i = 0; i < m1; ++i, ++col) {
    for (std::size_t t = 0; t < dx; ++t) lp.matrix(t, col) = instance.A(i, t);
    lp.cost[col] = -instance.b[i];
    switch (instance.senses[i]) {
      case RowSense::GreaterEqual: lp.lower[col] = 0.0; lp.upper[col] = kInfinity; break;
      case RowSense::LessEqual: lp.lower[col] = -kInfinity; lp.upper[col] = 0.0; break;
      case RowSense::Equal: lp.lower[col] = -kInfinity; lp.upper[col] = kInfinity; break;
    }
  }
  for (std::size_t j = 0; j < nc; ++j, ++col) {
    const Minorant& cut = pool[j];
    for (std::size_t t = 0; t < dx; ++t) lp.matrix(t, col) = -cut.slope[t];
    lp.matrix(dx, col) = 1.0;
    lp.cost[col] = -cut.intercept;
  }
  for (std::size_t t : lower_idx) {
    lp.matrix(t, col) = 1.0;
    lp.cost[col] = -instance.x_lower[t];
    ++col;
  }
  for (std::size_t t : upper_idx) {
    lp.matrix(t, col) = 1.0;
    lp.cost[col] = -instance.x_upper[t];
    lp.lower[col] = -kInfinity;
    lp.upper[col] = 0.0;
    ++col;
  }

  const LpSolution s = solve_lp(lp);
  if (s.status == LpStatus::Unbounded) throw InstanceError("master problem infeasible: X is empty");
  if (s.status == LpStatus::Infeasible) {
    throw LpFailure("master problem unbounded: the first-stage set is not compact");
  }
  if (!s.optimal()) throw LpFailure("master LP failed: " + to_string(s.status));

  MasterSolution out;
  out.x.resize(dx);
  for (std::size_t t = 0; t < dx; ++t) out.x[t] = -s.duals[t];
  out.x = detail::clamp_to_bounds(std::move(out.x), instance);
  out.value = objective_estimate(instance, pool, out.x);
  return out;
}

}  // namespace drsd
