#pragma once

// Randomized property checks shared by the unit tests and the acceptance
// binary. Each check feeds a Tally so callers can report totals.

#include <algorithm>
#include <cmath>
#include <memory>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "support/oracles.hpp"

namespace drsd::testing {

struct Tally {
  std::size_t checks = 0;
  std::size_t violations = 0;
  double worst = 0.0;  // largest excess over the allowed tolerance seen
  std::string first_failure;

  // `excess` > 0 means the property failed by that much.
  void record(double excess, const std::string& context = {}) {
    ++checks;
    worst = std::max(worst, excess);
    if (excess > 0.0) {
      if (violations == 0) first_failure = context;
      ++violations;
    }
  }
  void merge(const Tally& o) {
    if (violations == 0 && o.violations > 0) first_failure = o.first_failure;
    checks += o.checks;
    violations += o.violations;
    worst = std::max(worst, o.worst);
  }
  bool ok() const { return violations == 0; }
};

inline Observation random_observation(std::mt19937_64& rng, std::size_t dim, int max_value) {
  std::uniform_int_distribution<int> v(0, max_value);
  Observation o;
  for (std::size_t t = 0; t < dim; ++t) o.values.push_back(v(rng));
  return o;
}

inline std::vector<double> random_values(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(0.0, 10.0);
  std::vector<double> v(n);
  for (double& x : v) x = u(rng);
  return v;
}

// Draws k−1 observations, takes the extremal distribution P of a random
// objective over 𝔓^{k−1} (a vertex), adds ω^k and checks Θ(P) ∈ 𝔓^k.
inline Tally theta_feasibility(AmbiguityKind kind, std::mt19937_64& rng, std::size_t trials) {
  Tally tally;
  std::uniform_int_distribution<std::size_t> kdist(2, 50), dim(1, 2);
  std::uniform_int_distribution<int> qdist(1, 2);
  std::uniform_real_distribution<double> radius(0.0, 3.0);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t k = kdist(rng);
    const std::size_t d = dim(rng);
    const int max_value = kind == AmbiguityKind::Wasserstein ? 4 : 6;
    Sample sample;
    for (std::size_t j = 0; j + 1 < k; ++j) sample.add(random_observation(rng, d, max_value));
    const AmbiguityConfig config = kind == AmbiguityKind::Moment
                                       ? AmbiguityConfig::moment(qdist(rng))
                                       : AmbiguityConfig::wasserstein(radius(rng));
    const ExtremalDistribution p =
        separate(config, sample, random_values(rng, sample.unique_count()));

    const Observation next = random_observation(rng, d, max_value + 1);
    const std::size_t idx = sample.add(next);
    const std::vector<double> mapped = theta_map(p.weights, idx, theta(k));
    std::ostringstream ctx;
    ctx << "k=" << k << " d=" << d << " " << describe(config);

    double excess = 0.0;
    double mass = 0.0;
    for (double w : mapped) {
      excess = std::max(excess, -w - 1e-12);
      mass += w;
    }
    excess = std::max(excess, std::abs(mass - 1.0) - 1e-9);
    if (kind == AmbiguityKind::Moment) {
      const std::vector<double> b = moment_parameters(sample, config.moment_order);
      std::vector<double> got(b.size(), 0.0);
      for (std::size_t i = 0; i < mapped.size(); ++i) {
        const auto f = moment_features(sample.observation(i), config.moment_order);
        for (std::size_t r = 0; r < b.size(); ++r) got[r] += mapped[i] * f[r];
      }
      for (std::size_t r = 0; r < b.size(); ++r) {
        excess = std::max(excess, std::abs(got[r] - b[r]) - 1e-9 * std::max(1.0, std::abs(b[r])));
      }
    } else {
      const double dist = wasserstein_distance(sample.unique(), mapped, sample.frequencies());
      excess = std::max(excess, dist - config.radius - 1e-9);
    }
    tally.record(excess, ctx.str());
  }
  return tally;
}

// separate() against vertex enumeration on supports of at most four points.
inline Tally separation_against_enumeration(std::mt19937_64& rng, std::size_t trials) {
  Tally tally;
  std::uniform_int_distribution<std::size_t> size(1, 4), dim(1, 2), draws(1, 12);
  std::uniform_int_distribution<int> qdist(1, 2), kind(0, 1);
  std::uniform_real_distribution<double> radius(0.0, 4.0);
  for (std::size_t trial = 0; trial < trials; ++trial) {
    const std::size_t d = dim(rng);
    const std::size_t n_target = size(rng);
    Sample sample;
    std::vector<Observation> pool;
    while (pool.size() < n_target) {
      const Observation o = random_observation(rng, d, 5);
      if (std::find(pool.begin(), pool.end(), o) == pool.end()) pool.push_back(o);
    }
    for (const auto& o : pool) sample.add(o);
    std::uniform_int_distribution<std::size_t> pick(0, pool.size() - 1);
    const std::size_t extra = draws(rng);
    for (std::size_t j = 0; j < extra; ++j) sample.add(pool[pick(rng)]);

    const std::vector<double> values = random_values(rng, sample.unique_count());
    const std::vector<double> ref = sample.frequencies();
    const bool moment = kind(rng) == 0;
    const AmbiguityConfig config =
        moment ? AmbiguityConfig::moment(qdist(rng)) : AmbiguityConfig::wasserstein(radius(rng));
    const ExtremalDistribution got = separate(config, sample, values);

    const double oracle =
        moment ? moment_worst_case(sample.unique(), ref, config.moment_order, values)
               : wasserstein_worst_case(sample.unique(), ref, config.radius, values);
    std::ostringstream ctx;
    ctx << describe(config) << " n=" << sample.unique_count() << " got " << got.value << " oracle "
        << oracle;
    const double scale = std::max(1.0, std::abs(oracle));
    double excess = std::abs(got.value - oracle) - 1e-6 * scale;
    if (moment) {
      const Polytope poly = moment_polytope(sample.unique(), ref, config.moment_order);
      if (!poly.contains(got.weights, 1e-8)) excess = std::max(excess, 1.0);
    } else {
      const double dist = transport_distance(sample.unique(), got.weights, ref);
      excess = std::max(excess, dist - config.radius - 1e-8);
    }
    tally.record(excess, ctx.str());
  }
  return tally;
}

// Per-iteration audit of a DRSD run.
struct DrsdAudit {
  const ProblemInstance* instance = nullptr;
  AmbiguityConfig ambiguity;
  std::mt19937_64 rng{1};
  std::size_t lower_bound_points = 20;  // random x per iteration
  std::size_t sandwich_pairs = 100;     // random (x, ω) per iteration
  std::vector<WeightedScenario> support;
  std::unique_ptr<SubproblemSolver> solver;
  std::vector<std::vector<double>> previous_vertices{};

  Tally lower_bound;  // pooled cuts ≤ worst-case expectation of Q^k
  Tally delta;        // δ^k ≤ 1e-9
  Tally tightness;    // new candidate cut is tight at x^k
  Tally sandwich;     // 0 ≤ Q^{k−1} ≤ Q^k ≤ Q
  std::size_t iterations = 0;

  DrsdAudit(const ProblemInstance& in, const AmbiguityConfig& amb, std::uint64_t seed)
      : instance(&in), ambiguity(amb), rng(seed), support(enumerate_support(in)),
        solver(std::make_unique<SubproblemSolver>(in)) {}

  DrsdObserver observer() {
    return [this](const DrsdIterate& it) { inspect(it); };
  }

  static double argmax_value(const std::vector<std::vector<double>>& vertices,
                             std::span<const double> h) {
    double best = 0.0;
    for (const auto& v : vertices) best = std::max(best, dot(v, h));
    return best;
  }

  void inspect(const DrsdIterate& it) {
    ++iterations;
    const ProblemInstance& in = *instance;

    delta.record(it.delta - 1e-9, "k=" + std::to_string(it.k));

    if (it.candidate_cut) {
      const double cut = it.candidate_cut->evaluate(it.candidate);
      const double expected = it.candidate_separation_value;
      tightness.record(std::abs(cut - expected) - 1e-7 * std::max(1.0, std::abs(expected)),
                       "k=" + std::to_string(it.k));
    } else {
      tightness.record(1.0, "candidate cut missing at k=" + std::to_string(it.k));
    }

    const std::vector<double> reference = it.sample->frequencies();
    for (std::size_t s = 0; s < lower_bound_points; ++s) {
      const std::vector<double> x = random_point_in(in, rng);
      const RecourseEvaluation q = eval_recourse_approx(*it.vertices, x, it.scenarios);
      const double bound = separate(ambiguity, it.sample->unique(), reference, q.values).value;
      const double pooled = it.pool->max_value(x);
      lower_bound.record(pooled - bound - 1e-7 * std::max(1.0, std::abs(bound)),
                         "k=" + std::to_string(it.k));
    }

    if (sandwich_pairs > 0) {
      std::uniform_int_distribution<std::size_t> pick(0, support.size() - 1);
      for (std::size_t s = 0; s < sandwich_pairs; ++s) {
        const std::vector<double> x = random_point_in(in, rng);
        const Observation& omega = support[pick(rng)].omega;
        const RealizedScenario sc = realize(in, omega);
        const std::vector<double> h = recourse_rhs(sc, x);
        const double before = argmax_value(previous_vertices, h);
        const double now = argmax_dual(*it.vertices, h).value;
        const double exact = solver->solve(sc, x, omega).value;
        const double tol = 1e-8 * std::max(1.0, std::abs(exact));
        double excess = -before - 1e-12;
        excess = std::max(excess, before - now - 1e-12);
        excess = std::max(excess, now - exact - tol);
        sandwich.record(excess, "k=" + std::to_string(it.k));
      }
      previous_vertices = it.vertices->vertices();
    }
  }
};

}  // namespace drsd::testing
