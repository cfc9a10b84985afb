#pragma once

// Replication driver, summary statistics, CSV output and a brute-force
// reference solver for tiny instances.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <exception>
#include <fstream>
#include <iomanip>
#include <limits>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "drsd/ambiguity.hpp"
#include "drsd/decomposition.hpp"
#include "drsd/lshaped.hpp"
#include "drsd/model.hpp"
#include "drsd/recourse.hpp"
#include "drsd/report.hpp"

namespace drsd {

struct ExperimentConfig {
  std::string instance_path;
  Method method = Method::Drsd;
  AmbiguityConfig ambiguity = AmbiguityConfig::moment(2);
  DrsdParams drsd;
  DrlsParams drls;
  std::size_t replications = 30;
  std::uint64_t base_seed = 0;
  std::string output_path;     // empty: no file written
  bool record_timing = true;   // false writes empty time columns
  std::size_t threads = 0;     // 0: hardware concurrency

  void validate() const {
    if (replications < 1) throw std::invalid_argument("replication count must be >= 1");
    ambiguity.validate();
    if (method == Method::Drsd) drsd.validate();
    else drls.validate();
  }

  std::uint64_t seed_for(std::size_t rep) const { return base_seed + rep; }
};

struct ReplicationRecord {
  std::size_t rep = 0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  RunReport report;
};

struct MeanHalfWidth {
  double mean = 0.0;
  double half_width = 0.0;
};

struct StatsRow {
  Method method = Method::Drsd;
  std::size_t sample_size = 0;  // N for DRLS, 0 for DRSD
  std::size_t replications = 0;
  std::size_t failures = 0;
  bool degenerate = false;  // fewer than two successful replications
  MeanHalfWidth iterations, objective, unique_obs;
  MeanHalfWidth t_total, t_master, t_sub, t_opt, t_argmax, t_sep;

  std::size_t successes() const { return replications - failures; }
  std::string label() const {
    return method == Method::Drsd ? "DRSD" : "DRLS-" + std::to_string(sample_size);
  }
};

struct ExperimentResult {
  ExperimentConfig config;
  std::vector<ReplicationRecord> records;
  StatsRow stats;
};

// t_{0.975, n−1}·s/√n; zero for n < 2.
inline MeanHalfWidth mean_and_half_width(std::span<const double> xs) {
  MeanHalfWidth out;
  const std::size_t n = xs.size();
  if (n == 0) return out;
  for (double v : xs) out.mean += v;
  out.mean /= static_cast<double>(n);
  if (n < 2) return out;
  double ss = 0.0;
  for (double v : xs) ss += (v - out.mean) * (v - out.mean);
  const double s = std::sqrt(ss / static_cast<double>(n - 1));
  const boost::math::students_t dist(static_cast<double>(n - 1));
  const double t = boost::math::quantile(boost::math::complement(dist, 0.025));
  out.half_width = t * s / std::sqrt(static_cast<double>(n));
  return out;
}

inline StatsRow summarize(const ExperimentConfig& config, std::span<const ReplicationRecord> records) {
  StatsRow row;
  row.method = config.method;
  row.sample_size = config.method == Method::Drls ? config.drls.sample_size : 0;
  row.replications = records.size();
  std::vector<double> it, obj, uq, tt, tm, ts, to, ta, tp;
  for (const ReplicationRecord& r : records) {
    if (!r.ok) {
      ++row.failures;
      continue;
    }
    it.push_back(static_cast<double>(r.report.iterations));
    obj.push_back(r.report.objective);
    uq.push_back(static_cast<double>(r.report.unique_observations));
    tt.push_back(r.report.time.total);
    tm.push_back(r.report.time.master);
    ts.push_back(r.report.time.subproblem);
    to.push_back(r.report.time.optimality);
    ta.push_back(r.report.time.argmax);
    tp.push_back(r.report.time.separation);
  }
  row.degenerate = it.size() < 2;
  row.iterations = mean_and_half_width(it);
  row.objective = mean_and_half_width(obj);
  row.unique_obs = mean_and_half_width(uq);
  row.t_total = mean_and_half_width(tt);
  row.t_master = mean_and_half_width(tm);
  row.t_sub = mean_and_half_width(ts);
  row.t_opt = mean_and_half_width(to);
  row.t_argmax = mean_and_half_width(ta);
  row.t_sep = mean_and_half_width(tp);
  return row;
}

inline ReplicationRecord run_replication(const ProblemInstance& instance,
                                         const ExperimentConfig& config, std::size_t rep) {
  ReplicationRecord rec;
  rec.rep = rep;
  rec.seed = config.seed_for(rep);
  try {
    if (config.method == Method::Drsd) {
      DrsdParams p = config.drsd;
      p.seed = rec.seed;
      rec.report = run_drsd(instance, config.ambiguity, p);
    } else {
      DrlsParams p = config.drls;
      p.seed = rec.seed;
      rec.report = run_drls(instance, config.ambiguity, p);
    }
    rec.ok = true;
  } catch (const std::exception& e) {
    rec.ok = false;
    rec.error = e.what();
  }
  if (!config.record_timing) rec.report.time = TimeBreakdown{};
  return rec;
}

// Replications are independent and write only to their own slot, so the
// result does not depend on the number of worker threads.
inline ExperimentResult replicate(const ProblemInstance& instance, const ExperimentConfig& config) {
  config.validate();
  ExperimentResult result;
  result.config = config;
  result.records.resize(config.replications);

  std::size_t workers = config.threads ? config.threads : std::thread::hardware_concurrency();
  workers = std::clamp<std::size_t>(workers, 1, config.replications);
  if (workers == 1) {
    for (std::size_t r = 0; r < config.replications; ++r) {
      result.records[r] = run_replication(instance, config, r);
    }
  } else {
    std::mutex mutex;
    std::size_t next = 0;
    std::vector<std::jthread> pool;
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        while (true) {
          std::size_t r;
          {
            std::lock_guard lock(mutex);
            if (next == config.replications) return;
            r = next++;
          }
          result.records[r] = run_replication(instance, config, r);
        }
      });
    }
  }
  result.stats = summarize(config, result.records);
  return result;
}

namespace detail {

inline std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + '"';
}

inline std::string csv_number(double v) {
  std::ostringstream os;
  os << std::setprecision(12) << v;
  return os.str();
}

}  // namespace detail

inline constexpr const char* kCsvHeader =
    "rep,seed,method,iterations,objective,unique_obs,t_total,t_master,t_sub,t_opt,t_argmax,t_sep,"
    "status";

inline void write_csv(std::ostream& os, const ExperimentResult& result) {
  using detail::csv_number;
  const bool timing = result.config.record_timing;
  const std::string method = to_string(result.config.method);
  auto time = [&](double v) { return timing ? csv_number(v) : std::string(); };

  os << kCsvHeader << '\n';
  for (const ReplicationRecord& r : result.records) {
    os << r.rep << ',' << r.seed << ',' << method << ',';
    if (r.ok) {
      const RunReport& p = r.report;
      os << p.iterations << ',' << csv_number(p.objective) << ',' << p.unique_observations << ','
         << time(p.time.total) << ',' << time(p.time.master) << ',' << time(p.time.subproblem)
         << ',' << time(p.time.optimality) << ',' << time(p.time.argmax) << ','
         << time(p.time.separation) << ',' << (p.converged ? "ok" : "iteration_limit");
    } else {
      os << ",,,,,,,,," << detail::csv_field("error: " + r.error);
    }
    os << '\n';
  }

  const StatsRow& s = result.stats;
  const std::string status = "successes=" + std::to_string(s.successes()) +
                             " failures=" + std::to_string(s.failures);
  auto summary = [&](const char* tag, auto pick, const std::string& st) {
    os << tag << ",," << method << ',' << csv_number(pick(s.iterations)) << ','
       << csv_number(pick(s.objective)) << ',' << csv_number(pick(s.unique_obs)) << ','
       << time(pick(s.t_total)) << ',' << time(pick(s.t_master)) << ',' << time(pick(s.t_sub))
       << ',' << time(pick(s.t_opt)) << ',' << time(pick(s.t_argmax)) << ','
       << time(pick(s.t_sep)) << ',' << st << '\n';
  };
  summary("mean", [](const MeanHalfWidth& m) { return m.mean; }, status);
  summary("hw95", [](const MeanHalfWidth& m) { return m.half_width; },
          s.degenerate ? "degenerate" : status);
}

inline std::string to_csv(const ExperimentResult& result) {
  std::ostringstream os;
  write_csv(os, result);
  return os.str();
}

inline void write_csv_file(const std::string& path, const ExperimentResult& result) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  write_csv(f, result);
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

inline ExperimentResult replicate(const ExperimentConfig& config) {
  const ProblemInstance instance = load_instance(config.instance_path);
  ExperimentResult result = replicate(instance, config);
  if (!config.output_path.empty()) write_csv_file(config.output_path, result);
  return result;
}

// "DRLS-100 | 17.867 (±0.92) | 457.610 (±3.28) | 38.233 (±1.10)"
inline std::string format_estimates_row(const StatsRow& s) {
  std::ostringstream os;
  os << std::fixed;
  auto cell = [&os](const MeanHalfWidth& m) {
    os << " | " << std::setprecision(3) << m.mean << " (±" << std::setprecision(2) << m.half_width
       << ')';
  };
  os << s.label();
  cell(s.iterations);
  cell(s.objective);
  cell(s.unique_obs);
  return os.str();
}

inline std::string estimates_header() {
  return "Method | # Iterations | Objective Estimate | # Unique Obs.";
}

// Mean seconds per phase; the argmax column is "-" for DRLS.
inline std::string format_times_row(const StatsRow& s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(4) << s.label() << " | " << s.t_total.mean << " | "
     << s.t_master.mean << " | " << s.t_sub.mean << " | " << s.t_opt.mean << " | ";
  if (s.method == Method::Drls) os << '-';
  else os << s.t_argmax.mean;
  os << " | " << s.t_sep.mean;
  return os.str();
}

inline std::string times_header() {
  return "Method | Total | Master | Subproblem | Optimality | Argmax | Separation";
}

// ---------------------------------------------------------------------------
// Brute-force reference

struct GridSpec {
  double step = 1e-3;     // target resolution per coordinate
  std::size_t points = 41;  // grid points per coordinate on each zoom level
  double feasibility_tolerance = 1e-9;
};

struct BruteForceResult {
  std::vector<double> x;
  double value = 0.0;
  std::size_t evaluations = 0;
};

inline constexpr std::size_t kBruteForceMaxSupport = 32;

// cᵀx + max_{P∈𝔓} E_P[Q(x,ω)] with the ambiguity set built on the full
// support around the true distribution, all recourse values solved exactly.
class ExactDroObjective {
 public:
  ExactDroObjective(const ProblemInstance& instance, const AmbiguityConfig& ambiguity)
      : instance_(&instance), ambiguity_(ambiguity), solver_(instance) {
    ambiguity_.validate();
    const std::size_t n = support_size(instance);
    if (n > kBruteForceMaxSupport) {
      throw std::invalid_argument("brute force: support has " + std::to_string(n) +
                                  " scenarios; at most " +
                                  std::to_string(kBruteForceMaxSupport) + " are supported");
    }
    for (const WeightedScenario& w : enumerate_support(instance)) {
      support_.push_back(w.omega);
      probs_.push_back(w.probability);
      scenarios_.push_back(realize(instance, w.omega));
    }
  }

  double operator()(std::span<const double> x) {
    std::vector<double> q(support_.size());
    for (std::size_t i = 0; i < support_.size(); ++i) {
      q[i] = solver_.solve(scenarios_[i], x, support_[i]).value;
    }
    return dot(instance_->c, x) + separate(ambiguity_, support_, probs_, q).value;
  }

  const std::vector<Observation>& support() const { return support_; }
  const std::vector<double>& probabilities() const { return probs_; }

 private:
  const ProblemInstance* instance_;
  AmbiguityConfig ambiguity_;
  SubproblemSolver solver_;
  std::vector<Observation> support_;
  std::vector<double> probs_;
  std::vector<RealizedScenario> scenarios_;
};

namespace detail {

inline bool first_stage_feasible(const ProblemInstance& in, std::span<const double> x, double tol) {
  for (std::size_t i = 0; i < in.first_stage_rows(); ++i) {
    const double lhs = dot(in.A.row(i), x);
    const double slack = tol * std::max(1.0, std::abs(in.b[i]));
    switch (in.senses[i]) {
      case RowSense::LessEqual: if (lhs > in.b[i] + slack) return false; break;
      case RowSense::GreaterEqual: if (lhs < in.b[i] - slack) return false; break;
      case RowSense::Equal: if (std::abs(lhs - in.b[i]) > slack) return false; break;
    }
  }
  return true;
}

}  // namespace detail

// Grid search with zoom refinement over the first-stage box. The objective is
// convex, so each level re-centres on the best point with a window of two
// grid steps either side.
inline BruteForceResult brute_force_dro(const ProblemInstance& instance,
                                        const AmbiguityConfig& ambiguity,
                                        const GridSpec& grid = {}) {
  const std::size_t dx = instance.first_stage_dim();
  if (dx > 2) throw std::invalid_argument("brute force: d_x must be at most 2");
  if (grid.points < 3 || !(grid.step > 0.0)) throw std::invalid_argument("brute force: bad grid");
  ExactDroObjective objective(instance, ambiguity);
  const FirstStageBox box = first_stage_box(instance);

  std::vector<double> lo = box.lower, hi = box.upper;
  BruteForceResult best;
  best.value = std::numeric_limits<double>::infinity();
  while (true) {
    std::vector<double> h(dx);
    double widest = 0.0;
    for (std::size_t t = 0; t < dx; ++t) {
      h[t] = (hi[t] - lo[t]) / static_cast<double>(grid.points - 1);
      widest = std::max(widest, h[t]);
    }
    const std::size_t total = dx == 1 ? grid.points : grid.points * grid.points;
    std::vector<double> x(dx);
    for (std::size_t idx = 0; idx < total; ++idx) {
      std::size_t rest = idx;
      for (std::size_t t = 0; t < dx; ++t) {
        const std::size_t i = rest % grid.points;
        rest /= grid.points;
        x[t] = i + 1 == grid.points ? hi[t] : lo[t] + static_cast<double>(i) * h[t];
      }
      if (!detail::first_stage_feasible(instance, x, grid.feasibility_tolerance)) continue;
      const double v = objective(x);
      ++best.evaluations;
      if (v < best.value) {
        best.value = v;
        best.x = x;
      }
    }
    if (best.x.empty()) throw InstanceError("brute force: no feasible grid point");
    if (widest <= grid.step) break;
    for (std::size_t t = 0; t < dx; ++t) {
      lo[t] = std::max(box.lower[t], best.x[t] - 2.0 * h[t]);
      hi[t] = std::min(box.upper[t], best.x[t] + 2.0 * h[t]);
    }
  }
  return best;
}

}  // namespace drsd
