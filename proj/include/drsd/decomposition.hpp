#pragma once

// Sequential-sampling decomposition for two-stage distributionally robust
// LPs. Each iteration adds one observation, solves two second-stage LPs
// (candidate and incumbent), approximates the remaining recourse values with
// the argmax over collected dual vertices, solves two distribution separation
// problems and appends two cuts after shrinking the older ones by θ^k.

#include <cmath>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "drsd/ambiguity.hpp"
#include "drsd/master.hpp"
#include "drsd/model.hpp"
#include "drsd/recourse.hpp"
#include "drsd/report.hpp"

namespace drsd {

struct DrsdParams {
  double tau = 1e-3;     // relative stopping tolerance
  double gamma = 0.2;    // incumbent acceptance fraction, in (0, 1]
  std::size_t k_min = 256;
  std::size_t k_max = 5000;
  std::uint64_t seed = 0;
  double prune_threshold = 1e-6;  // drop cuts scaled below this factor
  double vertex_tolerance = 1e-9;

  void validate() const {
    if (!(tau > 0.0)) throw std::invalid_argument("tau must be > 0");
    if (!(gamma > 0.0 && gamma <= 1.0)) throw std::invalid_argument("gamma must lie in (0, 1]");
    if (k_max < 1) throw std::invalid_argument("k_max must be >= 1");
    if (k_min > k_max) throw std::invalid_argument("k_min must not exceed k_max");
  }
};

// State exposed to an observer after iteration k completes.
struct DrsdIterate {
  std::size_t k = 0;
  std::span<const double> candidate;
  std::span<const double> previous_incumbent;
  std::span<const double> incumbent;
  double delta = 0.0;  // f^{k−1}(x^k) − f^{k−1}(x̂^{k−1})
  double candidate_separation_value = 0.0;
  const Minorant* candidate_cut = nullptr;
  const CutPool* pool = nullptr;
  const DualVertexSet* vertices = nullptr;
  const Sample* sample = nullptr;
  std::span<const RealizedScenario> scenarios;
  std::size_t observation_index = 0;  // ω^k in sample->unique()
};

using DrsdObserver = std::function<void(const DrsdIterate&)>;

namespace detail {

struct ApproximationPass {
  std::vector<double> values;
  std::vector<std::vector<double>> duals;
};

// Q^k at x over every unique observation; the one just observed takes its
// exact LP value and dual.
inline ApproximationPass approximate_recourse(const DualVertexSet& vertices,
                                              std::span<const RealizedScenario> scenarios,
                                              std::span<const double> x, std::size_t current,
                                              const SubproblemResult& exact,
                                              OperationCounters& counters) {
  ApproximationPass out;
  out.values.resize(scenarios.size());
  out.duals.resize(scenarios.size());
  for (std::size_t i = 0; i < scenarios.size(); ++i) {
    if (i == current) {
      out.values[i] = exact.value;
      out.duals[i] = exact.dual;
      continue;
    }
    const ArgmaxResult a = argmax_dual(vertices, recourse_rhs(scenarios[i], x));
    out.values[i] = a.value;
    out.duals[i] = vertices[a.index];
    ++counters.argmax_evaluations;
  }
  return out;
}

inline void add_checked_vertex(DualVertexSet& vertices, const ProblemInstance& instance,
                               std::span<const double> pi) {
  if (!is_dual_feasible(instance, pi)) {
    throw LpFailure("second-stage dual violates Wᵀπ <= g beyond tolerance");
  }
  vertices.insert(pi);
}

}  // namespace detail

inline RunReport run_drsd(const ProblemInstance& instance, const AmbiguityConfig& ambiguity,
                          const DrsdParams& params, const DrsdObserver& observer = {}) {
  params.validate();
  ambiguity.validate();

  RunReport report;
  report.method = Method::Drsd;
  const auto started = std::chrono::steady_clock::now();
  TimeBreakdown& time = report.time;
  OperationCounters& counters = report.counters;

  Rng rng(params.seed);
  const ScenarioSampler sampler(instance);
  SubproblemSolver subproblem(instance);
  Sample sample;
  std::vector<RealizedScenario> scenarios;
  DualVertexSet vertices(instance.second_stage_rows(), params.vertex_tolerance);
  CutPool pool(instance.first_stage_dim());

  // With only the seed cut, f^0(x) = cᵀx; its minimizer is the first incumbent.
  std::vector<double> incumbent;
  {
    PhaseTimer t(time.master);
    incumbent = solve_master(pool, instance).x;
    ++counters.master_solves;
  }

  std::size_t completed = 0;
  while (true) {
    std::vector<double> candidate;
    {
      PhaseTimer t(time.master);
      candidate = solve_master(pool, instance).x;
      ++counters.master_solves;
    }

    double old_at_candidate = 0.0;
    double old_at_incumbent = 0.0;
    {
      PhaseTimer t(time.optimality);
      old_at_candidate = objective_estimate(instance, pool, candidate);
      old_at_incumbent = objective_estimate(instance, pool, incumbent);
      const double gap = old_at_incumbent - old_at_candidate;
      const bool tight = gap < params.tau * std::max(1.0, std::abs(old_at_incumbent));
      if ((completed >= params.k_min && tight) || completed >= params.k_max) {
        report.converged = completed >= params.k_min && tight;
        report.objective = old_at_incumbent;
        break;
      }
    }
    const std::size_t k = completed + 1;

    const Observation omega = sampler.draw(rng);
    const std::size_t current = sample.add(omega);
    if (current == scenarios.size()) scenarios.push_back(realize(instance, omega));

    SubproblemResult at_candidate, at_incumbent;
    {
      PhaseTimer t(time.subproblem);
      at_candidate = subproblem.solve(scenarios[current], candidate, omega);
      at_incumbent = subproblem.solve(scenarios[current], incumbent, omega);
      counters.subproblem_solves += 2;
      detail::add_checked_vertex(vertices, instance, at_candidate.dual);
      detail::add_checked_vertex(vertices, instance, at_incumbent.dual);
    }

    detail::ApproximationPass pass_candidate, pass_incumbent;
    {
      PhaseTimer t(time.argmax);
      pass_candidate = detail::approximate_recourse(vertices, scenarios, candidate, current,
                                                    at_candidate, counters);
      pass_incumbent = detail::approximate_recourse(vertices, scenarios, incumbent, current,
                                                    at_incumbent, counters);
    }

    ExtremalDistribution worst_candidate, worst_incumbent;
    {
      PhaseTimer t(time.separation);
      const std::vector<double> reference = sample.frequencies();
      worst_candidate = separate(ambiguity, sample.unique(), reference, pass_candidate.values);
      worst_incumbent = separate(ambiguity, sample.unique(), reference, pass_incumbent.values);
      counters.separation_solves += 2;
    }

    const std::vector<double> previous_incumbent = incumbent;
    double delta = 0.0;
    {
      PhaseTimer t(time.optimality);
      Minorant candidate_cut =
          build_cut(worst_candidate, pass_candidate.duals, scenarios, CutOrigin::Candidate, k);
      Minorant incumbent_cut =
          build_cut(worst_incumbent, pass_incumbent.duals, scenarios, CutOrigin::Incumbent, k);
      rescale_cuts(pool, theta(k));
      pool.add(std::move(candidate_cut));
      pool.add(std::move(incumbent_cut));
      pool.prune(params.prune_threshold);

      delta = old_at_candidate - old_at_incumbent;
      const double new_at_candidate = objective_estimate(instance, pool, candidate);
      const double new_at_incumbent = objective_estimate(instance, pool, incumbent);
      if (incumbent_test(new_at_candidate, new_at_incumbent, old_at_candidate, old_at_incumbent,
                         params.gamma)) {
        incumbent = candidate;
      }
    }
    completed = k;

    if (observer) {
      const Minorant* newest = nullptr;
      for (const Minorant& c : pool.cuts()) {
        if (c.origin == CutOrigin::Candidate && c.birth == k) newest = &c;
      }
      DrsdIterate it;
      it.k = k;
      it.candidate = candidate;
      it.previous_incumbent = previous_incumbent;
      it.incumbent = incumbent;
      it.delta = delta;
      it.candidate_separation_value = worst_candidate.value;
      it.candidate_cut = newest;
      it.pool = &pool;
      it.vertices = &vertices;
      it.sample = &sample;
      it.scenarios = scenarios;
      it.observation_index = current;
      observer(it);
    }
  }

  report.iterations = completed;
  report.observations = sample.size();
  report.unique_observations = sample.unique_count();
  report.solution = incumbent;
  report.time.total = seconds_since(started);
  return report;
}

}  // namespace drsd
