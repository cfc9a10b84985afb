#pragma once

// Data-driven ambiguity sets over the observed support Ω^k and the
// distribution separation problems solved over them.

#include <bit>
#include <cmath>
#include <cstdint>
#include <algorithm>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <sstream>
#include <string>
#include <vector>

#include "drsd/error.hpp"
#include "drsd/lp.hpp"
#include "drsd/model.hpp"

namespace drsd {

// Observation history with duplicates collapsed. Unique observations keep
// their first-seen order; frequencies are κ(ω)/k.
class Sample {
 public:
  // Adds ω^k; returns its index among the unique observations.
  std::size_t add(const Observation& omega) {
    ++size_;
    auto [it, inserted] = index_.try_emplace(key(omega), unique_.size());
    if (inserted) {
      unique_.push_back(omega);
      counts_.push_back(1);
    } else {
      ++counts_[it->second];
    }
    return it->second;
  }

  std::optional<std::size_t> find(const Observation& omega) const {
    const auto it = index_.find(key(omega));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::size_t size() const noexcept { return size_; }
  std::size_t unique_count() const noexcept { return unique_.size(); }
  bool empty() const noexcept { return size_ == 0; }
  const std::vector<Observation>& unique() const noexcept { return unique_; }
  const Observation& observation(std::size_t i) const { return unique_[i]; }
  std::span<const std::size_t> counts() const noexcept { return counts_; }

  double frequency(std::size_t i) const {
    return static_cast<double>(counts_[i]) / static_cast<double>(size_);
  }

  std::vector<double> frequencies() const {
    std::vector<double> p(unique_.size());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = frequency(i);
    return p;
  }

 private:
  // Bitwise identity of the coordinates.
  static std::vector<std::uint64_t> key(const Observation& omega) {
    std::vector<std::uint64_t> k(omega.size());
    for (std::size_t i = 0; i < k.size(); ++i) k[i] = std::bit_cast<std::uint64_t>(omega[i]);
    return k;
  }

  std::size_t size_ = 0;
  std::vector<Observation> unique_;
  std::vector<std::size_t> counts_;
  std::map<std::vector<std::uint64_t>, std::size_t> index_;
};

inline Sample empirical_update(Sample sample, const Observation& omega) {
  sample.add(omega);
  return sample;
}

// θ^k = (k − 1)/k
inline double theta(std::size_t k) {
  if (k == 0) throw std::invalid_argument("theta: k must be >= 1");
  return static_cast<double>(k - 1) / static_cast<double>(k);
}

// Applies the frequency recursion to an arbitrary distribution P over
// Ω^{k−1}: every weight is scaled by θ and ω^k receives 1 − θ. new_index is
// the position of ω^k in Ω^k; new_index == weights.size() appends it.
inline std::vector<double> theta_map(std::span<const double> weights, std::size_t new_index,
                                     double theta_value) {
  if (new_index > weights.size()) throw std::invalid_argument("theta_map: index out of range");
  std::vector<double> out(weights.begin(), weights.end());
  for (double& w : out) w *= theta_value;
  if (new_index == out.size()) out.push_back(0.0);
  out[new_index] += 1.0 - theta_value;
  return out;
}

// ---------------------------------------------------------------------------
// Configuration

enum class AmbiguityKind { Moment, Wasserstein };

// Moment functions ψ: coordinate-wise raw moments ω_t^s, s = 1..q,
// optionally followed by the cross products ω_t·ω_u (t < u) when q >= 2.
enum class MomentBasis { Coordinatewise, WithCrossProducts };

struct AmbiguityConfig {
  AmbiguityKind kind = AmbiguityKind::Moment;
  int moment_order = 2;
  double radius = 1.0;
  MomentBasis basis = MomentBasis::Coordinatewise;

  static AmbiguityConfig moment(int q, MomentBasis basis = MomentBasis::Coordinatewise) {
    AmbiguityConfig c;
    c.kind = AmbiguityKind::Moment;
    c.moment_order = q;
    c.basis = basis;
    return c;
  }

  static AmbiguityConfig wasserstein(double eps) {
    AmbiguityConfig c;
    c.kind = AmbiguityKind::Wasserstein;
    c.radius = eps;
    return c;
  }

  void validate() const {
    if (kind == AmbiguityKind::Moment && moment_order < 1) {
      throw std::invalid_argument("moment order q must be >= 1");
    }
    if (kind == AmbiguityKind::Wasserstein && !(radius >= 0.0 && std::isfinite(radius))) {
      throw std::invalid_argument("Wasserstein radius must be finite and >= 0");
    }
  }
};

inline std::string describe(const AmbiguityConfig& c) {
  if (c.kind == AmbiguityKind::Moment) return "moment(q=" + std::to_string(c.moment_order) + ")";
  std::ostringstream os;
  os << "wasserstein(eps=" << c.radius << ")";
  return os.str();
}

inline std::vector<double> moment_features(const Observation& omega, int q,
                                           MomentBasis basis = MomentBasis::Coordinatewise) {
  std::vector<double> f;
  f.reserve(omega.size() * static_cast<std::size_t>(q));
  for (std::size_t t = 0; t < omega.size(); ++t) {
    double power = 1.0;
    for (int s = 1; s <= q; ++s) {
      power *= omega[t];
      f.push_back(power);
    }
  }
  if (basis == MomentBasis::WithCrossProducts && q >= 2) {
    for (std::size_t t = 0; t < omega.size(); ++t) {
      for (std::size_t u = t + 1; u < omega.size(); ++u) f.push_back(omega[t] * omega[u]);
    }
  }
  return f;
}

// Sample moments b̂^k, laid out coordinate-major: entry t·q + (s − 1) is
// (1/k) Σ_j (ω^j_t)^s.
inline std::vector<double> moment_parameters(const Sample& sample, int q,
                                             MomentBasis basis = MomentBasis::Coordinatewise) {
  if (sample.empty()) throw std::invalid_argument("moment_parameters: empty sample");
  std::vector<double> b;
  for (std::size_t i = 0; i < sample.unique_count(); ++i) {
    const std::vector<double> f = moment_features(sample.observation(i), q, basis);
    if (b.empty()) b.assign(f.size(), 0.0);
    for (std::size_t r = 0; r < f.size(); ++r) {
      b[r] += static_cast<double>(sample.counts()[i]) * f[r];
    }
  }
  for (double& v : b) v /= static_cast<double>(sample.size());
  return b;
}

inline double euclidean_distance(const Observation& a, const Observation& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// ---------------------------------------------------------------------------
// Separation

struct ExtremalDistribution {
  std::vector<double> weights;  // aligned with the support passed in
  double value = 0.0;           // Σ p(ω)·values(ω)
};

namespace detail {

inline ExtremalDistribution finish_separation(const LpSolution& s, std::size_t n,
                                              std::span<const double> values) {
  if (s.status == LpStatus::Infeasible) {
    throw std::logic_error("separation: ambiguity set is empty although the reference is feasible");
  }
  if (!s.optimal()) throw LpFailure("separation LP failed: " + to_string(s.status));
  ExtremalDistribution out;
  out.weights.assign(s.primal.begin(), s.primal.begin() + static_cast<std::ptrdiff_t>(n));
  for (double& w : out.weights) w = std::max(w, 0.0);
  for (std::size_t i = 0; i < n; ++i) out.value += out.weights[i] * values[i];
  return out;
}

inline LpProblem moment_separation_lp(const AmbiguityConfig& config,
                                      std::span<const Observation> support,
                                      std::span<const double> reference,
                                      std::span<const double> values) {
  const std::size_t n = support.size();
  LpProblem lp = LpProblem::with_variables(n);
  for (std::size_t i = 0; i < n; ++i) lp.cost[i] = -values[i];
  lp.add_row(std::vector<double>(n, 1.0), RowSense::Equal, 1.0);

  std::vector<std::vector<double>> features(n);
  for (std::size_t i = 0; i < n; ++i) {
    features[i] = moment_features(support[i], config.moment_order, config.basis);
  }
  const std::size_t nf = n > 0 ? features[0].size() : 0;
  std::vector<double> row(n);
  for (std::size_t f = 0; f < nf; ++f) {
    double scale = 1.0;
    double target = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      scale = std::max(scale, std::abs(features[i][f]));
      target += reference[i] * features[i][f];
    }
    for (std::size_t i = 0; i < n; ++i) row[i] = features[i][f] / scale;
    lp.add_row(row, RowSense::Equal, target / scale);
  }
  return lp;
}

// Variables: p (n), then η(ω_i, ω_j) at n + i·n + j.
inline LpProblem wasserstein_separation_lp(double radius, std::span<const Observation> support,
                                           std::span<const double> reference,
                                           std::span<const double> values) {
  const std::size_t n = support.size();
  const std::size_t nv = n + n * n;
  LpProblem lp = LpProblem::with_variables(nv);
  for (std::size_t i = 0; i < n; ++i) lp.cost[i] = -values[i];

  std::vector<double> row(nv, 0.0);
  for (std::size_t i = 0; i < n; ++i) row[i] = 1.0;
  lp.add_row(row, RowSense::Equal, 1.0);

  for (std::size_t i = 0; i < n; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) row[n + i * n + j] = 1.0;
    row[i] = -1.0;
    lp.add_row(row, RowSense::Equal, 0.0);
  }
  for (std::size_t j = 0; j < n; ++j) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) row[n + i * n + j] = 1.0;
    lp.add_row(row, RowSense::Equal, reference[j]);
  }
  std::fill(row.begin(), row.end(), 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) row[n + i * n + j] = euclidean_distance(support[i], support[j]);
  }
  lp.add_row(row, RowSense::LessEqual, radius);
  return lp;
}

}  // namespace detail

// max Σ p(ω)·values(ω) over the approximate ambiguity set built on `support`
// with reference weights `reference` (the empirical frequencies p̂^k when
// called through a Sample).
inline ExtremalDistribution separate(const AmbiguityConfig& config,
                                     std::span<const Observation> support,
                                     std::span<const double> reference,
                                     std::span<const double> values) {
  config.validate();
  if (support.empty()) throw std::invalid_argument("separate: empty support");
  if (reference.size() != support.size() || values.size() != support.size()) {
    throw std::invalid_argument("separate: support, reference and values differ in length");
  }
  const LpProblem lp =
      config.kind == AmbiguityKind::Moment
          ? detail::moment_separation_lp(config, support, reference, values)
          : detail::wasserstein_separation_lp(config.radius, support, reference, values);
  return detail::finish_separation(solve_lp(lp), support.size(), values);
}

inline ExtremalDistribution separate(const AmbiguityConfig& config, const Sample& sample,
                                     std::span<const double> values) {
  const std::vector<double> reference = sample.frequencies();
  return separate(config, sample.unique(), reference, values);
}

// Order-1 Wasserstein (Euclidean ground cost) distance between two
// distributions on a common support, by the transport LP.
inline double wasserstein_distance(std::span<const Observation> support, std::span<const double> p,
                                   std::span<const double> q) {
  const std::size_t n = support.size();
  if (p.size() != n || q.size() != n) throw std::invalid_argument("wasserstein_distance: sizes");
  LpProblem lp = LpProblem::with_variables(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) lp.cost[i * n + j] = euclidean_distance(support[i], support[j]);
  }
  std::vector<double> row(n * n);
  for (std::size_t i = 0; i < n; ++i) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t j = 0; j < n; ++j) row[i * n + j] = 1.0;
    lp.add_row(row, RowSense::Equal, p[i]);
  }
  // The last column marginal is implied by the others.
  for (std::size_t j = 0; j + 1 < n; ++j) {
    std::fill(row.begin(), row.end(), 0.0);
    for (std::size_t i = 0; i < n; ++i) row[i * n + j] = 1.0;
    lp.add_row(row, RowSense::Equal, q[j]);
  }
  const LpSolution s = solve_lp(lp);
  if (!s.optimal()) throw LpFailure("transport LP failed: " + to_string(s.status));
  return s.objective;
}

}  // namespace drsd
