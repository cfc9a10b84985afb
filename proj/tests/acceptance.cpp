// Acceptance run: one PASS/FAIL line per criterion, non-zero exit on failure.

#include <chrono>
#include <cstdio>
#include <iostream>
#include <map>
#include <random>
#include <sstream>

#include "support/properties.hpp"

namespace {

using namespace drsd;
namespace dt = drsd::testing;
using Clock = std::chrono::steady_clock;

int failures = 0;
std::map<int, std::string> lines;  // printed in criterion order at the end

void report(int id, const std::string& name, bool ok, const std::string& details) {
  std::ostringstream os;
  os << (ok ? "[PASS] " : "[FAIL] ") << id << ' ' << name << ": " << details;
  lines[id] = os.str();
  std::cerr << "criterion " << id << " done" << std::endl;
  if (!ok) ++failures;
}

std::string fmt(double v, int precision = 4) {
  std::ostringstream os;
  os.precision(precision);
  os << v;
  return os.str();
}

const std::vector<const char*> kTiny{"t1.json", "newsvendor.json", "facility.json", "yield.json"};

std::vector<AmbiguityConfig> tiny_sets() {
  return {AmbiguityConfig::moment(1), AmbiguityConfig::moment(2), AmbiguityConfig::wasserstein(0.0),
          AmbiguityConfig::wasserstein(0.5), AmbiguityConfig::wasserstein(1e3)};
}

// Counter law tallies shared by every run below.
dt::Tally counter_law;

void check_counters(const RunReport& r, const std::string& ctx) {
  const std::size_t expected = r.method == Method::Drsd ? 2 * r.iterations
                                                        : r.iterations * r.unique_observations;
  counter_law.record(r.counters.subproblem_solves == expected ? 0.0 : 1.0, ctx);
}

void criterion_oracle_equivalence() {
  std::size_t configs = 0, misses = 0, single_within = 0, singles = 0;
  double worst_rel = 0.0, slowest = 0.0;
  std::string worst_ctx;
  for (const char* file : kTiny) {
    const ProblemInstance in = load_instance(dt::instance_path(file).string());
    for (const AmbiguityConfig& amb : tiny_sets()) {
      const double oracle = brute_force_dro(in, amb).value;
      for (Method m : {Method::Drsd, Method::Drls}) {
        ExperimentConfig c;
        c.method = m;
        c.ambiguity = amb;
        c.drsd.k_min = 256;
        c.drls.sample_size = 1000;
        c.replications = 30;
        c.base_seed = 1000;
        const ExperimentResult res = replicate(in, c);
        ++configs;
        for (const ReplicationRecord& r : res.records) {
          if (!r.ok) continue;
          ++singles;
          slowest = std::max(slowest, r.report.time.total);
          if (std::abs(r.report.objective - oracle) <= 0.02 * std::abs(oracle)) ++single_within;
          check_counters(r.report, std::string(file) + " " + describe(amb));
        }
        const double rel = std::abs(res.stats.objective.mean - oracle) / std::abs(oracle);
        const bool ok = res.stats.failures == 0 && rel <= 0.02;
        if (!ok) ++misses;
        if (rel > worst_rel) {
          worst_rel = rel;
          worst_ctx = std::string(file) + " " + describe(amb) + " " + res.stats.label();
        }
      }
    }
  }
  report(1, "oracle equivalence", misses == 0 && slowest < 10.0,
         std::to_string(configs - misses) + "/" + std::to_string(configs) +
             " configs with 30-rep mean within 2% of brute force (worst " + fmt(100 * worst_rel) +
             "% at " + worst_ctx + "); single runs within 2%: " + std::to_string(single_within) +
             "/" + std::to_string(singles) + "; slowest run " + fmt(slowest) + " s (limit 10 s)");
}

struct AuditTotals {
  dt::Tally lower_bound, delta, sandwich, tightness;
  std::size_t runs = 0, iterations = 0;

  void add(const dt::DrsdAudit& a) {
    lower_bound.merge(a.lower_bound);
    delta.merge(a.delta);
    sandwich.merge(a.sandwich);
    tightness.merge(a.tightness);
    ++runs;
    iterations += a.iterations;
  }
};

AuditTotals audited_runs() {
  AuditTotals t;
  std::uint64_t seed = 1;
  for (const char* file : kTiny) {
    const ProblemInstance in = load_instance(dt::instance_path(file).string());
    for (const AmbiguityConfig& amb : tiny_sets()) {
      dt::DrsdAudit audit(in, amb, seed);
      DrsdParams p;
      p.k_min = 256;
      p.seed = seed++;
      const RunReport r = run_drsd(in, amb, p, audit.observer());
      check_counters(r, std::string(file) + " " + describe(amb));
      t.add(audit);
    }
  }
  std::mt19937_64 rng(77);
  for (int i = 0; i < 30; ++i) {
    const ProblemInstance in = dt::random_complete_recourse(rng);
    const AmbiguityConfig amb =
        i % 2 ? AmbiguityConfig::moment(1 + i % 3 / 2) : AmbiguityConfig::wasserstein(0.25 * (i % 5));
    dt::DrsdAudit audit(in, amb, seed);
    DrsdParams p;
    p.k_min = 64;
    p.k_max = 200;
    p.seed = seed++;
    const RunReport r = run_drsd(in, amb, p, audit.observer());
    check_counters(r, "random " + std::to_string(i) + " " + describe(amb));
    t.add(audit);
  }
  return t;
}

std::string tally_text(const dt::Tally& t) {
  std::string s = std::to_string(t.checks) + " checks, " + std::to_string(t.violations) +
                  " violations";
  if (!t.ok()) s += " (first: " + t.first_failure + ", worst excess " + fmt(t.worst) + ")";
  return s;
}

void criterion_theta_feasibility() {
  std::mt19937_64 rng(2026);
  const dt::Tally moment = dt::theta_feasibility(AmbiguityKind::Moment, rng, 500);
  const dt::Tally wass = dt::theta_feasibility(AmbiguityKind::Wasserstein, rng, 500);
  report(3, "theta feasibility", moment.ok() && wass.ok() && moment.checks >= 500 &&
                                     wass.checks >= 500,
         "moment " + tally_text(moment) + "; wasserstein " + tally_text(wass));
}

void criterion_separation() {
  std::mt19937_64 rng(4242);
  const dt::Tally t = dt::separation_against_enumeration(rng, 2000);
  report(7, "separation correctness", t.ok() && t.checks >= 2000,
         tally_text(t) + " against vertex enumeration (value 1e-6, d_w re-solve)");
}

std::vector<ExperimentResult> synthetic_runs(const ProblemInstance& in, bool timing) {
  std::vector<ExperimentResult> out;
  for (Method m : {Method::Drsd, Method::Drls}) {
    ExperimentConfig c;
    c.method = m;
    c.ambiguity = AmbiguityConfig::moment(2);
    c.drls.sample_size = 500;
    c.replications = 30;
    c.base_seed = 1;
    c.record_timing = timing;
    out.push_back(replicate(in, c));
  }
  return out;
}

void criteria_synthetic() {
  const ProblemInstance in = load_instance(dt::instance_path("synthetic1000.json").string());
  const auto start = Clock::now();
  const std::vector<ExperimentResult> timed = synthetic_runs(in, true);
  std::ostringstream table;
  table << estimates_header() << '\n';
  for (const auto& r : timed) table << format_estimates_row(r.stats) << '\n';
  const double elapsed = std::chrono::duration<double>(Clock::now() - start).count();
  for (const auto& r : timed) {
    for (const auto& rec : r.records) {
      if (rec.ok) check_counters(rec.report, "synthetic1000 " + r.stats.label());
    }
  }

  const std::vector<ExperimentResult> a = synthetic_runs(in, false);
  const std::vector<ExperimentResult> b = synthetic_runs(in, false);
  bool identical = true;
  std::size_t bytes = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const std::string ca = to_csv(a[i]), cb = to_csv(b[i]);
    identical = identical && ca == cb;
    bytes += ca.size();
  }
  bool table_ok = true;
  for (const auto& r : timed) table_ok = table_ok && r.stats.failures == 0 && !r.stats.degenerate;
  std::cout << table.str();
  report(8, "determinism and summary", identical && table_ok && elapsed < 60.0,
         std::string(identical ? "byte-identical" : "DIFFERENT") + " CSVs on repeat (" +
             std::to_string(bytes) + " bytes, timing columns off); 30-rep summary in " +
             fmt(elapsed) + " s (limit 60 s)");

  const MeanHalfWidth& d = timed[0].stats.objective;
  const MeanHalfWidth& l = timed[1].stats.objective;
  const bool overlap = d.mean - d.half_width <= l.mean + l.half_width &&
                       l.mean - l.half_width <= d.mean + d.half_width;
  report(9, "statistical comparability", overlap,
         "DRSD " + fmt(d.mean, 6) + " ±" + fmt(d.half_width) + " vs DRLS-500 " + fmt(l.mean, 6) +
             " ±" + fmt(l.half_width));
}

}  // namespace

int main() {
  const auto start = Clock::now();
  criterion_oracle_equivalence();

  const AuditTotals audit = audited_runs();
  report(2, "cut lower bound", audit.lower_bound.ok() && audit.lower_bound.checks >= 10000,
         tally_text(audit.lower_bound) + " over " + std::to_string(audit.runs) + " runs, " +
             std::to_string(audit.iterations) + " iterations (tolerance 1e-7 relative)");

  criterion_theta_feasibility();

  report(4, "recourse sandwich", audit.sandwich.ok() && audit.sandwich.checks > 0,
         tally_text(audit.sandwich) + " (100 random (x, omega) per iteration)");

  criteria_synthetic();

  report(5, "counter law", counter_law.ok() && counter_law.checks > 0,
         std::to_string(counter_law.checks) + " runs checked, " +
             std::to_string(counter_law.violations) + " mismatches" +
             (counter_law.ok() ? "" : " (first: " + counter_law.first_failure + ")"));

  report(6, "delta non-positive", audit.delta.ok() && audit.tightness.ok(),
         std::to_string(audit.delta.checks) + " iterations, max delta excess " +
             fmt(audit.delta.worst) + " (limit 1e-9); candidate cut tight in " +
             std::to_string(audit.tightness.checks - audit.tightness.violations) + "/" +
             std::to_string(audit.tightness.checks));

  criterion_separation();

  for (const auto& [id, line] : lines) std::cout << line << '\n';
  const double total = std::chrono::duration<double>(Clock::now() - start).count();
  std::cout << (failures == 0 ? "all criteria passed" : std::to_string(failures) + " criteria failed")
            << " in " << fmt(total) << " s" << std::endl;
  return failures == 0 ? 0 : 1;
}
