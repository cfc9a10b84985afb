#pragma once

// Exact second-stage solves and the argmax approximation
//
//   Q^k(x, ω) = max { πᵀ(r(ω) − T(ω)x) : π ∈ Π^k }
//
// over a growing set Π^k of dual vertices of {π : Wᵀπ ≤ g}.

#include <cmath>
#include <span>
#include <sstream>
#include <stdexcept>
#include <vector>

#include "drsd/ambiguity.hpp"
#include "drsd/error.hpp"
#include "drsd/lp.hpp"
#include "drsd/model.hpp"

namespace drsd {

struct SubproblemResult {
  double value = 0.0;
  std::vector<double> dual;  // π, one entry per second-stage row
};

// Reuses one LP skeleton (W, g, y ≥ 0) across right-hand sides.
class SubproblemSolver {
 public:
  explicit SubproblemSolver(const ProblemInstance& instance) : instance_(&instance) {
    lp_ = LpProblem::with_variables(instance.second_stage_dim());
    lp_.cost = instance.g;
    lp_.matrix = instance.W;
    lp_.senses.assign(instance.second_stage_rows(), RowSense::Equal);
    lp_.rhs.assign(instance.second_stage_rows(), 0.0);
  }

  SubproblemResult solve(const RealizedScenario& scenario, std::span<const double> x,
                         const Observation& omega) {
    lp_.rhs = recourse_rhs(scenario, x);
    const LpSolution s = solve_lp(lp_);
    if (s.status == LpStatus::Infeasible) {
      std::ostringstream os;
      os << "second-stage problem is infeasible at x = " << format(x)
         << ", omega = " << format(omega.values)
         << "; the instance violates relatively complete recourse";
      throw RecourseInfeasibleError(os.str());
    }
    if (!s.optimal()) {
      std::ostringstream os;
      os << "second-stage LP failed (" << to_string(s.status) << ") at x = " << format(x)
         << ", omega = " << format(omega.values);
      throw LpFailure(os.str());
    }
    return {s.objective, s.duals};
  }

  SubproblemResult solve(std::span<const double> x, const Observation& omega) {
    return solve(realize(*instance_, omega), x, omega);
  }

 private:
  static std::string format(std::span<const double> v) {
    std::ostringstream os;
    os << '(';
    for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
    os << ')';
    return os.str();
  }

  const ProblemInstance* instance_;
  LpProblem lp_;
};

inline SubproblemResult solve_subproblem(const ProblemInstance& instance,
                                         std::span<const double> x, const Observation& omega) {
  return SubproblemSolver(instance).solve(x, omega);
}

inline bool is_dual_feasible(const ProblemInstance& instance, std::span<const double> pi,
                             double tolerance = 1e-8) {
  const std::vector<double> wt_pi = multiply_transposed(instance.W, pi);
  for (std::size_t j = 0; j < wt_pi.size(); ++j) {
    if (wt_pi[j] > instance.g[j] + tolerance * std::max(1.0, std::abs(instance.g[j]))) return false;
  }
  return true;
}

// Π^k. Starts as {0}, which is dual feasible because g ≥ 0.
class DualVertexSet {
 public:
  explicit DualVertexSet(std::size_t rows, double tolerance = 1e-9)
      : rows_(rows), tolerance_(tolerance) {
    vertices_.emplace_back(rows, 0.0);
  }

  // Appends π unless a member lies within the tolerance in ∞-norm.
  bool insert(std::span<const double> pi) {
    if (pi.size() != rows_) throw std::invalid_argument("DualVertexSet: dimension mismatch");
    for (const auto& v : vertices_) {
      double dist = 0.0;
      for (std::size_t i = 0; i < rows_ && dist <= tolerance_; ++i) {
        dist = std::max(dist, std::abs(v[i] - pi[i]));
      }
      if (dist <= tolerance_) return false;
    }
    vertices_.emplace_back(pi.begin(), pi.end());
    return true;
  }

  std::size_t size() const noexcept { return vertices_.size(); }
  std::size_t rows() const noexcept { return rows_; }
  double tolerance() const noexcept { return tolerance_; }
  const std::vector<double>& operator[](std::size_t i) const { return vertices_[i]; }
  const std::vector<std::vector<double>>& vertices() const noexcept { return vertices_; }

 private:
  std::size_t rows_;
  double tolerance_;
  std::vector<std::vector<double>> vertices_;
};

inline DualVertexSet add_vertex(DualVertexSet set, std::span<const double> pi,
                                const ProblemInstance& instance) {
  if (!is_dual_feasible(instance, pi)) {
    throw std::logic_error("add_vertex: vector violates Wᵀπ <= g");
  }
  set.insert(pi);
  return set;
}

struct ArgmaxResult {
  std::size_t index = 0;
  double value = 0.0;
};

// Best member of Π for right-hand side h = r(ω) − T(ω)x; ties go to the
// earliest inserted vertex.
inline ArgmaxResult argmax_dual(const DualVertexSet& set, std::span<const double> h) {
  ArgmaxResult best{0, dot(set[0], h)};
  for (std::size_t i = 1; i < set.size(); ++i) {
    const double v = dot(set[i], h);
    if (v > best.value) best = {i, v};
  }
  return best;
}

inline ArgmaxResult argmax_dual(const DualVertexSet& set, std::span<const double> x,
                                const Observation& omega, const ProblemInstance& instance) {
  return argmax_dual(set, recourse_rhs(realize(instance, omega), x));
}

struct RecourseEvaluation {
  std::vector<double> values;       // Q^k(x, ω) per unique observation
  std::vector<std::size_t> vertex;  // index into Π of the selecting vertex
};

// Argmax pass over pre-realized scenarios; no LP is solved.
inline RecourseEvaluation eval_recourse_approx(const DualVertexSet& set, std::span<const double> x,
                                               std::span<const RealizedScenario> scenarios) {
  RecourseEvaluation out;
  out.values.reserve(scenarios.size());
  out.vertex.reserve(scenarios.size());
  for (const RealizedScenario& s : scenarios) {
    const ArgmaxResult a = argmax_dual(set, recourse_rhs(s, x));
    out.values.push_back(a.value);
    out.vertex.push_back(a.index);
  }
  return out;
}

inline RecourseEvaluation eval_recourse_approx(const DualVertexSet& set, std::span<const double> x,
                                               const Sample& sample,
                                               const ProblemInstance& instance) {
  std::vector<RealizedScenario> scenarios;
  scenarios.reserve(sample.unique_count());
  for (const Observation& omega : sample.unique()) scenarios.push_back(realize(instance, omega));
  return eval_recourse_approx(set, x, scenarios);
}

}  // namespace drsd
