#pragma once

// External-sampling benchmark: N observations are drawn up front, and every
// iteration solves all second-stage LPs exactly, one separation problem and
// adds one unscaled cut.

#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "drsd/ambiguity.hpp"
#include "drsd/master.hpp"
#include "drsd/model.hpp"
#include "drsd/recourse.hpp"
#include "drsd/report.hpp"

namespace drsd {

struct DrlsParams {
  std::size_t sample_size = 100;  // N
  double tolerance = 1e-3;
  std::size_t max_iterations = 1000;
  std::uint64_t seed = 0;

  void validate() const {
    if (sample_size < 1) throw std::invalid_argument("N must be >= 1");
    if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
    if (max_iterations < 1) throw std::invalid_argument("max_iterations must be >= 1");
  }
};

// Runs on a fixed sample; `params.sample_size` and `params.seed` are unused.
inline RunReport run_drls(const ProblemInstance& instance, const AmbiguityConfig& ambiguity,
                          const Sample& sample, const DrlsParams& params) {
  params.validate();
  ambiguity.validate();
  if (sample.empty()) throw std::invalid_argument("run_drls: empty sample");

  RunReport report;
  report.method = Method::Drls;
  const auto started = std::chrono::steady_clock::now();
  TimeBreakdown& time = report.time;
  OperationCounters& counters = report.counters;

  const std::size_t n = sample.unique_count();
  std::vector<RealizedScenario> scenarios;
  scenarios.reserve(n);
  for (const Observation& omega : sample.unique()) scenarios.push_back(realize(instance, omega));
  const std::vector<double> reference = sample.frequencies();

  SubproblemSolver subproblem(instance);
  CutPool pool(instance.first_stage_dim());
  double best_upper = std::numeric_limits<double>::infinity();

  for (std::size_t it = 1; it <= params.max_iterations; ++it) {
    std::vector<double> x;
    {
      PhaseTimer t(time.master);
      x = solve_master(pool, instance).x;
      ++counters.master_solves;
    }

    std::vector<double> values(n);
    std::vector<std::vector<double>> duals(n);
    {
      PhaseTimer t(time.subproblem);
      for (std::size_t i = 0; i < n; ++i) {
        SubproblemResult r = subproblem.solve(scenarios[i], x, sample.observation(i));
        values[i] = r.value;
        duals[i] = std::move(r.dual);
      }
      counters.subproblem_solves += n;
    }

    ExtremalDistribution worst;
    {
      PhaseTimer t(time.separation);
      worst = separate(ambiguity, sample.unique(), reference, values);
      ++counters.separation_solves;
    }

    report.iterations = it;
    PhaseTimer t(time.optimality);
    const double lower = objective_estimate(instance, pool, x);
    const double upper = dot(instance.c, x) + worst.value;
    if (upper < best_upper) {
      best_upper = upper;
      report.solution = x;
    }
    if (lower >= upper - params.tolerance * std::max(1.0, std::abs(upper))) {
      report.converged = true;
      break;
    }
    pool.add(build_cut(worst, duals, scenarios, CutOrigin::Candidate, it));
  }

  report.objective = best_upper;
  report.observations = sample.size();
  report.unique_observations = n;
  report.time.total = seconds_since(started);
  return report;
}

inline Sample draw_sample(const ProblemInstance& instance, std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  const ScenarioSampler sampler(instance);
  Sample sample;
  for (std::size_t i = 0; i < n; ++i) sample.add(sampler.draw(rng));
  return sample;
}

inline RunReport run_drls(const ProblemInstance& instance, const AmbiguityConfig& ambiguity,
                          const DrlsParams& params) {
  params.validate();
  return run_drls(instance, ambiguity, draw_sample(instance, params.sample_size, params.seed),
                  params);
}

}  // namespace drsd
