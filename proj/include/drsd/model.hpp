#pragma once

// Two-stage instance data, its JSON file format, scenario realization and
// sampling from the true distribution.
//
// The second stage of an instance is
//
//   Q(x, ω) = min { gᵀy : W y = r(ω) − T(ω) x, y ≥ 0 }
//
// where r(ω) and T(ω) start from deterministic templates and selected cells
// are overwritten by coordinates of ω (see RandomEntry).

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <random>
#include <set>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <utility>
#include <variant>
#include <vector>

#include "drsd/dense.hpp"
#include "drsd/error.hpp"
#include "drsd/lp.hpp"
#include "json.hpp"

namespace drsd {

enum class RandomTarget { Rhs, Tech };

// Maps one coordinate of ω onto a cell of r (row) or T (row, col).
struct RandomEntry {
  RandomTarget target = RandomTarget::Rhs;
  std::size_t row = 0;
  std::size_t col = 0;  // technology entries only
  std::size_t coord = 0;

  bool operator==(const RandomEntry&) const = default;
};

struct Observation {
  std::vector<double> values;

  std::size_t size() const noexcept { return values.size(); }
  double operator[](std::size_t i) const { return values[i]; }
  bool operator==(const Observation&) const = default;
};

struct ScenarioList {
  std::vector<std::vector<double>> omegas;
  std::vector<double> probs;

  bool operator==(const ScenarioList&) const = default;
};

struct Marginal {
  std::vector<double> values;
  std::vector<double> probs;

  bool operator==(const Marginal&) const = default;
};

// Product of independent discrete marginals, one per coordinate of ω.
struct IndependentMarginals {
  std::vector<Marginal> marginals;

  bool operator==(const IndependentMarginals&) const = default;
};

using DistributionSpec = std::variant<ScenarioList, IndependentMarginals>;

struct ProblemInstance {
  std::string name;

  std::vector<double> c;
  DenseMatrix A;
  std::vector<RowSense> senses;
  std::vector<double> b;
  std::vector<double> x_lower;
  std::vector<double> x_upper;

  std::vector<double> g;
  DenseMatrix W;
  std::vector<double> r_base;
  DenseMatrix T_base;

  std::vector<RandomEntry> random_entries;
  DistributionSpec true_distribution;

  std::size_t first_stage_dim() const noexcept { return c.size(); }
  std::size_t first_stage_rows() const noexcept { return senses.size(); }
  std::size_t second_stage_dim() const noexcept { return g.size(); }
  std::size_t second_stage_rows() const noexcept { return r_base.size(); }

  std::size_t omega_dim() const {
    if (const auto* s = std::get_if<ScenarioList>(&true_distribution)) {
      return s->omegas.empty() ? 0 : s->omegas.front().size();
    }
    return std::get<IndependentMarginals>(true_distribution).marginals.size();
  }

  bool operator==(const ProblemInstance&) const = default;
};

struct RealizedScenario {
  std::vector<double> r;
  DenseMatrix T;
};

inline RealizedScenario realize(const ProblemInstance& instance, const Observation& omega) {
  if (omega.size() != instance.omega_dim()) {
    throw std::invalid_argument("realize: observation has " + std::to_string(omega.size()) +
                                " coordinates, instance expects " +
                                std::to_string(instance.omega_dim()));
  }
  RealizedScenario out{instance.r_base, instance.T_base};
  for (const RandomEntry& e : instance.random_entries) {
    if (e.target == RandomTarget::Rhs) {
      out.r[e.row] = omega[e.coord];
    } else {
      out.T(e.row, e.col) = omega[e.coord];
    }
  }
  return out;
}

// r(ω) − T(ω) x
inline std::vector<double> recourse_rhs(const RealizedScenario& s, std::span<const double> x) {
  std::vector<double> h = s.r;
  for (std::size_t i = 0; i < h.size(); ++i) h[i] -= dot(s.T.row(i), x);
  return h;
}

// ---------------------------------------------------------------------------
// Sampling

using Rng = std::mt19937_64;

// 53-bit uniform on [0, 1); fixed construction so streams are reproducible
// independent of the standard library's distribution implementations.
inline double uniform01(Rng& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

namespace detail {

inline std::vector<double> cumulative(const std::vector<double>& probs) {
  std::vector<double> cum(probs.size());
  double s = 0.0;
  for (std::size_t i = 0; i < probs.size(); ++i) cum[i] = (s += probs[i]);
  return cum;
}

// First index whose cumulative mass exceeds u, in file order.
inline std::size_t inverse_cdf(const std::vector<double>& cum, const std::vector<double>& probs,
                               double u) {
  auto it = std::upper_bound(cum.begin(), cum.end(), u);
  std::size_t idx = static_cast<std::size_t>(it - cum.begin());
  if (idx >= cum.size()) {
    idx = cum.size() - 1;
    while (idx > 0 && probs[idx] <= 0.0) --idx;
  }
  return idx;
}

}  // namespace detail

// Inverse-CDF sampler over the instance's true distribution.
class ScenarioSampler {
 public:
  explicit ScenarioSampler(const ProblemInstance& instance)
      : distribution_(&instance.true_distribution) {
    if (const auto* s = std::get_if<ScenarioList>(distribution_)) {
      cumulative_.push_back(detail::cumulative(s->probs));
    } else {
      for (const Marginal& m : std::get<IndependentMarginals>(*distribution_).marginals) {
        cumulative_.push_back(detail::cumulative(m.probs));
      }
    }
  }

  Observation draw(Rng& rng) const {
    if (const auto* s = std::get_if<ScenarioList>(distribution_)) {
      const std::size_t i = detail::inverse_cdf(cumulative_[0], s->probs, uniform01(rng));
      return Observation{s->omegas[i]};
    }
    const auto& marginals = std::get<IndependentMarginals>(*distribution_).marginals;
    Observation out{std::vector<double>(marginals.size())};
    for (std::size_t t = 0; t < marginals.size(); ++t) {
      const std::size_t i = detail::inverse_cdf(cumulative_[t], marginals[t].probs, uniform01(rng));
      out.values[t] = marginals[t].values[i];
    }
    return out;
  }

 private:
  const DistributionSpec* distribution_;
  std::vector<std::vector<double>> cumulative_;
};

inline Observation sample_observation(const ProblemInstance& instance, Rng& rng) {
  return ScenarioSampler(instance).draw(rng);
}

struct WeightedScenario {
  Observation omega;
  double probability = 0.0;
};

inline std::size_t support_size(const ProblemInstance& instance) {
  if (const auto* s = std::get_if<ScenarioList>(&instance.true_distribution)) {
    return s->omegas.size();
  }
  std::size_t n = 1;
  for (const Marginal& m : std::get<IndependentMarginals>(instance.true_distribution).marginals) {
    n *= m.values.size();
  }
  return n;
}

// Every scenario of the true distribution with its probability. Product
// supports are enumerated with the last coordinate varying fastest.
inline std::vector<WeightedScenario> enumerate_support(const ProblemInstance& instance) {
  std::vector<WeightedScenario> out;
  if (const auto* s = std::get_if<ScenarioList>(&instance.true_distribution)) {
    for (std::size_t i = 0; i < s->omegas.size(); ++i) {
      out.push_back({Observation{s->omegas[i]}, s->probs[i]});
    }
    return out;
  }
  const auto& marginals = std::get<IndependentMarginals>(instance.true_distribution).marginals;
  std::vector<std::size_t> idx(marginals.size(), 0);
  const std::size_t total = support_size(instance);
  for (std::size_t n = 0; n < total; ++n) {
    WeightedScenario w{Observation{std::vector<double>(marginals.size())}, 1.0};
    for (std::size_t t = 0; t < marginals.size(); ++t) {
      w.omega.values[t] = marginals[t].values[idx[t]];
      w.probability *= marginals[t].probs[idx[t]];
    }
    out.push_back(std::move(w));
    for (std::size_t t = marginals.size(); t-- > 0;) {
      if (++idx[t] < marginals[t].values.size()) break;
      idx[t] = 0;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Validation

struct FirstStageBox {
  std::vector<double> lower;
  std::vector<double> upper;
};

// Tightest coordinate bounds of the first-stage feasible set, from 2·d_x LPs.
// Throws InstanceError when the set is empty or unbounded in some coordinate.
inline FirstStageBox first_stage_box(const ProblemInstance& instance) {
  const std::size_t n = instance.first_stage_dim();
  LpProblem lp = LpProblem::with_variables(n);
  lp.matrix = instance.A;
  if (instance.first_stage_rows() == 0) lp.matrix = DenseMatrix(0, n);
  lp.senses = instance.senses;
  lp.rhs = instance.b;
  lp.lower = instance.x_lower;
  lp.upper = instance.x_upper;

  FirstStageBox box{std::vector<double>(n), std::vector<double>(n)};
  for (std::size_t j = 0; j < n; ++j) {
    for (const double sign : {1.0, -1.0}) {
      std::fill(lp.cost.begin(), lp.cost.end(), 0.0);
      lp.cost[j] = sign;
      const LpSolution s = solve_lp(lp);
      if (s.status == LpStatus::Infeasible) {
        throw InstanceError("first-stage feasible set is empty");
      }
      if (s.status == LpStatus::Unbounded) {
        throw InstanceError("first-stage variable x[" + std::to_string(j) +
                            "] is unbounded; the first-stage feasible set must be compact");
      }
      if (!s.optimal()) {
        throw InstanceError("first-stage bound check failed for x[" + std::to_string(j) +
                            "]: " + to_string(s.status));
      }
      (sign > 0 ? box.lower : box.upper)[j] = s.primal[j];
    }
  }
  return box;
}

namespace detail {

inline void check_distribution(const std::vector<double>& probs, const std::string& where) {
  double total = 0.0;
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw InstanceError(where + ": probabilities must be finite and non-negative");
    }
    total += p;
  }
  if (std::abs(total - 1.0) > 1e-12) {
    std::ostringstream os;
    os.precision(17);
    os << where << ": probabilities sum to " << total << ", expected 1";
    throw InstanceError(os.str());
  }
}

inline void check_finite(std::span<const double> v, const std::string& where) {
  for (double x : v) {
    if (!std::isfinite(x)) throw InstanceError(where + ": entries must be finite");
  }
}

}  // namespace detail

// Structural checks plus the compactness check of the first-stage set.
inline void validate_instance(const ProblemInstance& in) {
  const std::size_t dx = in.first_stage_dim();
  const std::size_t m1 = in.first_stage_rows();
  const std::size_t dy = in.second_stage_dim();
  const std::size_t m = in.second_stage_rows();

  if (dx == 0) throw InstanceError("first_stage.c must be non-empty");
  if (dy == 0 || m == 0) throw InstanceError("second stage must have variables and rows");
  if (in.b.size() != m1) throw InstanceError("first_stage: b and senses lengths differ");
  if (m1 > 0 && (in.A.rows() != m1 || in.A.cols() != dx)) {
    throw InstanceError("first_stage.A must be " + std::to_string(m1) + "x" + std::to_string(dx));
  }
  if (in.x_lower.size() != dx || in.x_upper.size() != dx) {
    throw InstanceError("first_stage: lb/ub must have length " + std::to_string(dx));
  }
  for (std::size_t j = 0; j < dx; ++j) {
    if (std::isnan(in.x_lower[j]) || std::isnan(in.x_upper[j]) || in.x_lower[j] > in.x_upper[j] ||
        in.x_lower[j] == kInfinity || in.x_upper[j] == -kInfinity) {
      throw InstanceError("first_stage: invalid bounds for x[" + std::to_string(j) + "]");
    }
  }
  if (in.W.rows() != m || in.W.cols() != dy) {
    throw InstanceError("second_stage.W must be " + std::to_string(m) + "x" + std::to_string(dy));
  }
  if (in.T_base.rows() != m || in.T_base.cols() != dx) {
    throw InstanceError("second_stage.T must be " + std::to_string(m) + "x" + std::to_string(dx));
  }
  detail::check_finite(in.c, "first_stage.c");
  detail::check_finite(in.b, "first_stage.b");
  detail::check_finite(in.g, "second_stage.g");
  detail::check_finite(in.r_base, "second_stage.r");
  for (std::size_t i = 0; i < m1; ++i) detail::check_finite(in.A.row(i), "first_stage.A");
  for (std::size_t i = 0; i < m; ++i) {
    detail::check_finite(in.W.row(i), "second_stage.W");
    detail::check_finite(in.T_base.row(i), "second_stage.T");
  }
  for (std::size_t j = 0; j < dy; ++j) {
    if (in.g[j] < 0.0) {
      throw InstanceError(
          "second_stage.g[" + std::to_string(j) +
          "] is negative; second-stage costs must be non-negative so that Q(x, ω) >= 0 "
          "(shift the recourse cost to normalize)");
    }
  }

  const std::size_t d_omega = in.omega_dim();
  if (const auto* s = std::get_if<ScenarioList>(&in.true_distribution)) {
    if (s->omegas.empty()) throw InstanceError("distribution: no scenarios");
    if (s->omegas.size() != s->probs.size()) {
      throw InstanceError("distribution: omegas and probs lengths differ");
    }
    for (const auto& w : s->omegas) {
      if (w.size() != d_omega) throw InstanceError("distribution: scenarios differ in length");
      detail::check_finite(w, "distribution.omegas");
    }
    detail::check_distribution(s->probs, "distribution.probs");
  } else {
    const auto& marginals = std::get<IndependentMarginals>(in.true_distribution).marginals;
    if (marginals.empty()) throw InstanceError("distribution: no marginals");
    for (std::size_t t = 0; t < marginals.size(); ++t) {
      const std::string where = "distribution.marginals[" + std::to_string(t) + "]";
      if (marginals[t].values.empty() || marginals[t].values.size() != marginals[t].probs.size()) {
        throw InstanceError(where + ": values and probs must be non-empty and equally long");
      }
      detail::check_finite(marginals[t].values, where);
      detail::check_distribution(marginals[t].probs, where + ".probs");
    }
  }

  std::set<std::tuple<int, std::size_t, std::size_t>> targets;
  for (std::size_t k = 0; k < in.random_entries.size(); ++k) {
    const RandomEntry& e = in.random_entries[k];
    const std::string where = "random[" + std::to_string(k) + "]";
    if (e.coord >= d_omega) {
      throw InstanceError(where + ": coord " + std::to_string(e.coord) + " out of range (d_omega=" +
                          std::to_string(d_omega) + ")");
    }
    if (e.row >= m) throw InstanceError(where + ": row out of range");
    if (e.target == RandomTarget::Tech && e.col >= dx) {
      throw InstanceError(where + ": col out of range");
    }
    const std::size_t col = e.target == RandomTarget::Tech ? e.col : 0;
    if (!targets.emplace(static_cast<int>(e.target), e.row, col).second) {
      throw InstanceError(where + ": duplicate target");
    }
  }

  first_stage_box(in);
}

// ---------------------------------------------------------------------------
// JSON format

namespace detail {

using nlohmann::json;

inline const json& require(const json& j, const char* key, const std::string& path) {
  if (!j.is_object() || !j.contains(key)) {
    throw InstanceError("missing key '" + std::string(key) + "' in " + path);
  }
  return j.at(key);
}

inline double to_number(const json& j, const std::string& path, double null_value) {
  if (j.is_null()) {
    if (std::isnan(null_value)) throw InstanceError(path + ": expected a number");
    return null_value;
  }
  if (!j.is_number()) throw InstanceError(path + ": expected a number");
  return j.get<double>();
}

inline std::vector<double> to_vector(const json& j, const std::string& path,
                                     double null_value = std::nan("")) {
  if (!j.is_array()) throw InstanceError(path + ": expected an array");
  std::vector<double> out;
  out.reserve(j.size());
  for (std::size_t i = 0; i < j.size(); ++i) {
    out.push_back(to_number(j[i], path + "[" + std::to_string(i) + "]", null_value));
  }
  return out;
}

inline DenseMatrix to_matrix(const json& j, const std::string& path, std::size_t cols) {
  if (!j.is_array()) throw InstanceError(path + ": expected an array of rows");
  DenseMatrix out(0, cols);
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string rp = path + "[" + std::to_string(i) + "]";
    const std::vector<double> row = to_vector(j[i], rp);
    if (row.size() != cols) {
      throw InstanceError(rp + ": has " + std::to_string(row.size()) + " entries, expected " +
                          std::to_string(cols));
    }
    out.append_row(row);
  }
  return out;
}

inline std::size_t to_index(const json& j, const std::string& path) {
  if (!j.is_number_integer() || j.get<long long>() < 0) {
    throw InstanceError(path + ": expected a non-negative integer");
  }
  return j.get<std::size_t>();
}

inline RowSense to_sense(const json& j, const std::string& path) {
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "<=" || s == "L") return RowSense::LessEqual;
    if (s == ">=" || s == "G") return RowSense::GreaterEqual;
    if (s == "=" || s == "==" || s == "E") return RowSense::Equal;
  }
  throw InstanceError(path + ": sense must be one of \"<=\", \"=\", \">=\"");
}

inline std::string sense_string(RowSense s) {
  switch (s) {
    case RowSense::LessEqual: return "<=";
    case RowSense::Equal: return "=";
    case RowSense::GreaterEqual: return ">=";
  }
  return "=";
}

inline std::pair<std::size_t, std::size_t> line_and_column(std::string_view text, std::size_t byte) {
  std::size_t line = 1;
  std::size_t col = 1;
  const std::size_t end = std::min(byte > 0 ? byte - 1 : 0, text.size());
  for (std::size_t i = 0; i < end; ++i) {
    if (text[i] == '\n') {
      ++line;
      col = 1;
    } else {
      ++col;
    }
  }
  return {line, col};
}

inline json bound_to_json(double v) {
  if (std::isinf(v)) return nullptr;
  return v;
}

}  // namespace detail

// Parses and validates an instance document. Syntax errors carry the line
// and column of the offending character.
inline ProblemInstance parse_instance(std::string_view text) {
  using detail::json;
  json doc;
  try {
    doc = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    const auto [line, col] = detail::line_and_column(text, e.byte);
    std::string what = e.what();
    if (const auto pos = what.find("syntax error while parsing"); pos != std::string::npos) {
      what = what.substr(pos + 13);
    }
    throw InstanceError("syntax error at line " + std::to_string(line) + ", column " +
                        std::to_string(col) + ": " + what);
  }
  if (!doc.is_object()) throw InstanceError("instance document must be a JSON object");

  ProblemInstance in;
  const json& name = detail::require(doc, "name", "document");
  if (!name.is_string()) throw InstanceError("name: expected a string");
  in.name = name.get<std::string>();

  const json& fs = detail::require(doc, "first_stage", "document");
  in.c = detail::to_vector(detail::require(fs, "c", "first_stage"), "first_stage.c");
  const std::size_t dx = in.c.size();
  in.A = fs.contains("A") ? detail::to_matrix(fs.at("A"), "first_stage.A", dx) : DenseMatrix(0, dx);
  if (fs.contains("senses")) {
    const json& s = fs.at("senses");
    if (!s.is_array()) throw InstanceError("first_stage.senses: expected an array");
    for (std::size_t i = 0; i < s.size(); ++i) {
      in.senses.push_back(detail::to_sense(s[i], "first_stage.senses[" + std::to_string(i) + "]"));
    }
  }
  in.b = fs.contains("b") ? detail::to_vector(fs.at("b"), "first_stage.b") : std::vector<double>{};
  if (in.A.rows() != in.senses.size() || in.b.size() != in.senses.size()) {
    throw InstanceError("first_stage: A, senses and b must have the same number of rows");
  }
  in.x_lower = fs.contains("lb") ? detail::to_vector(fs.at("lb"), "first_stage.lb", -kInfinity)
                                 : std::vector<double>(dx, 0.0);
  in.x_upper = fs.contains("ub") ? detail::to_vector(fs.at("ub"), "first_stage.ub", kInfinity)
                                 : std::vector<double>(dx, kInfinity);

  const json& ss = detail::require(doc, "second_stage", "document");
  in.g = detail::to_vector(detail::require(ss, "g", "second_stage"), "second_stage.g");
  in.W = detail::to_matrix(detail::require(ss, "W", "second_stage"), "second_stage.W", in.g.size());
  in.r_base = detail::to_vector(detail::require(ss, "r", "second_stage"), "second_stage.r");
  in.T_base = detail::to_matrix(detail::require(ss, "T", "second_stage"), "second_stage.T", dx);

  if (doc.contains("random")) {
    const json& rs = doc.at("random");
    if (!rs.is_array()) throw InstanceError("random: expected an array");
    for (std::size_t k = 0; k < rs.size(); ++k) {
      const std::string p = "random[" + std::to_string(k) + "]";
      const json& target = detail::require(rs[k], "target", p);
      RandomEntry e;
      if (target == "rhs") {
        e.target = RandomTarget::Rhs;
      } else if (target == "tech") {
        e.target = RandomTarget::Tech;
        e.col = detail::to_index(detail::require(rs[k], "col", p), p + ".col");
      } else {
        throw InstanceError(p + ".target: expected \"rhs\" or \"tech\"");
      }
      e.row = detail::to_index(detail::require(rs[k], "row", p), p + ".row");
      e.coord = detail::to_index(detail::require(rs[k], "coord", p), p + ".coord");
      in.random_entries.push_back(e);
    }
  }

  const json& dist = detail::require(doc, "distribution", "document");
  const json& type = detail::require(dist, "type", "distribution");
  if (type == "scenarios") {
    ScenarioList s;
    const json& omegas = detail::require(dist, "omegas", "distribution");
    if (!omegas.is_array()) throw InstanceError("distribution.omegas: expected an array");
    for (std::size_t i = 0; i < omegas.size(); ++i) {
      s.omegas.push_back(
          detail::to_vector(omegas[i], "distribution.omegas[" + std::to_string(i) + "]"));
    }
    s.probs = detail::to_vector(detail::require(dist, "probs", "distribution"), "distribution.probs");
    in.true_distribution = std::move(s);
  } else if (type == "independent") {
    IndependentMarginals ind;
    const json& ms = detail::require(dist, "marginals", "distribution");
    if (!ms.is_array()) throw InstanceError("distribution.marginals: expected an array");
    for (std::size_t t = 0; t < ms.size(); ++t) {
      const std::string p = "distribution.marginals[" + std::to_string(t) + "]";
      Marginal mg;
      mg.values = detail::to_vector(detail::require(ms[t], "values", p), p + ".values");
      mg.probs = detail::to_vector(detail::require(ms[t], "probs", p), p + ".probs");
      ind.marginals.push_back(std::move(mg));
    }
    in.true_distribution = std::move(ind);
  } else {
    throw InstanceError("distribution.type: expected \"scenarios\" or \"independent\"");
  }

  validate_instance(in);
  return in;
}

inline ProblemInstance load_instance(const std::string& path) {
  std::ifstream file(path);
  if (!file) throw InstanceError("cannot open instance file '" + path + "'");
  std::stringstream buffer;
  buffer << file.rdbuf();
  return parse_instance(buffer.str());
}

// Infinite bounds are written as null.
inline std::string serialize_instance(const ProblemInstance& in) {
  using detail::json;
  json doc;
  doc["name"] = in.name;

  json fs;
  fs["c"] = in.c;
  fs["A"] = in.A.to_rows();
  if (in.A.rows() == 0) fs["A"] = json::array();
  json senses = json::array();
  for (RowSense s : in.senses) senses.push_back(detail::sense_string(s));
  fs["senses"] = senses;
  fs["b"] = in.b;
  json lb = json::array();
  json ub = json::array();
  for (double v : in.x_lower) lb.push_back(detail::bound_to_json(v));
  for (double v : in.x_upper) ub.push_back(detail::bound_to_json(v));
  fs["lb"] = lb;
  fs["ub"] = ub;
  doc["first_stage"] = fs;

  json ss;
  ss["g"] = in.g;
  ss["W"] = in.W.to_rows();
  ss["r"] = in.r_base;
  ss["T"] = in.T_base.to_rows();
  doc["second_stage"] = ss;

  json random = json::array();
  for (const RandomEntry& e : in.random_entries) {
    json je;
    je["target"] = e.target == RandomTarget::Rhs ? "rhs" : "tech";
    je["row"] = e.row;
    if (e.target == RandomTarget::Tech) je["col"] = e.col;
    je["coord"] = e.coord;
    random.push_back(je);
  }
  doc["random"] = random;

  json dist;
  if (const auto* s = std::get_if<ScenarioList>(&in.true_distribution)) {
    dist["type"] = "scenarios";
    dist["omegas"] = s->omegas;
    dist["probs"] = s->probs;
  } else {
    dist["type"] = "independent";
    json ms = json::array();
    for (const Marginal& m : std::get<IndependentMarginals>(in.true_distribution).marginals) {
      ms.push_back({{"values", m.values}, {"probs", m.probs}});
    }
    dist["marginals"] = ms;
  }
  doc["distribution"] = dist;
  return doc.dump(2) + "\n";
}

}  // namespace drsd
