#pragma once

// Command-line front end: solve, benchmark, replicate, validate.
// Exit codes: 0 success, 1 solve failure, 2 usage or instance error.

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "drsd/ambiguity.hpp"
#include "drsd/decomposition.hpp"
#include "drsd/error.hpp"
#include "drsd/harness.hpp"
#include "drsd/lshaped.hpp"
#include "drsd/model.hpp"

namespace drsd {

inline constexpr int kExitOk = 0;
inline constexpr int kExitSolveFailure = 1;
inline constexpr int kExitUsage = 2;

namespace detail {

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct CliOptions {
  std::string instance;
  std::string method = "drsd";
  std::string ambiguity = "moment";
  int q = 2;
  double eps = 1.0;
  std::vector<std::size_t> sample_sizes{100};
  double tau = 1e-3;
  double gamma = 0.2;
  std::size_t k_min = 256;
  std::size_t k_max = 5000;
  std::uint64_t seed = 0;
  std::size_t reps = 30;
  std::string out;
  bool no_timing = false;
  std::size_t threads = 0;
};

struct FlagSet {
  CLI::Option* method = nullptr;
  CLI::Option* ambiguity = nullptr;
  CLI::Option* q = nullptr;
  CLI::Option* eps = nullptr;
  CLI::Option* n = nullptr;
  CLI::Option* tau = nullptr;
  CLI::Option* gamma = nullptr;
  CLI::Option* kmin = nullptr;
  CLI::Option* kmax = nullptr;
};

inline void add_instance_flag(CLI::App* cmd, CliOptions& o) {
  cmd->add_option("--instance", o.instance, "Instance file (JSON)")->required();
}

inline FlagSet add_algorithm_flags(CLI::App* cmd, CliOptions& o, bool with_method) {
  FlagSet f;
  if (with_method) {
    f.method = cmd->add_option("--method", o.method, "Solver: drsd or drls")
                   ->check(CLI::IsMember({"drsd", "drls"}))
                   ->capture_default_str();
  }
  f.ambiguity = cmd->add_option("--ambiguity", o.ambiguity, "Ambiguity set: moment or wasserstein")
                    ->check(CLI::IsMember({"moment", "wasserstein"}))
                    ->capture_default_str();
  f.q = cmd->add_option("--q", o.q, "Number of matched moments (moment set)")
            ->check(CLI::Range(1, 16))
            ->capture_default_str();
  f.eps = cmd->add_option("--eps", o.eps, "Wasserstein radius")
              ->check(CLI::NonNegativeNumber)
              ->capture_default_str();
  f.tau = cmd->add_option("--tau", o.tau, "Stopping tolerance")
              ->check(CLI::PositiveNumber)
              ->capture_default_str();
  f.gamma = cmd->add_option("--gamma", o.gamma, "Incumbent acceptance fraction in (0, 1] (drsd)")
                ->check(CLI::Range(0.0, 1.0))
                ->capture_default_str();
  f.kmin = cmd->add_option("--kmin", o.k_min, "Minimum iterations (drsd)")->capture_default_str();
  f.kmax = cmd->add_option("--kmax", o.k_max, "Maximum iterations (drsd)")->capture_default_str();
  cmd->add_option("--seed", o.seed, "Random seed (base seed for replications)")
      ->capture_default_str();
  return f;
}

inline void check_conflicts(const FlagSet& f, const CliOptions& o, bool method_fixed) {
  if (o.ambiguity == "wasserstein" && f.q->count()) {
    throw UsageError("--q applies to the moment set only; it conflicts with --ambiguity wasserstein");
  }
  if (o.ambiguity == "moment" && f.eps->count()) {
    throw UsageError("--eps applies to the Wasserstein set only; it conflicts with --ambiguity moment");
  }
  if (!method_fixed) return;
  if (o.method == "drsd" && f.n && f.n->count()) {
    throw UsageError("--N sets the DRLS sample size; it conflicts with --method drsd");
  }
  if (o.method == "drls") {
    for (CLI::Option* opt : {f.gamma, f.kmin, f.kmax}) {
      if (opt->count()) {
        throw UsageError(opt->get_name() + " applies to drsd only; it conflicts with --method drls");
      }
    }
  }
}

inline AmbiguityConfig ambiguity_from(const CliOptions& o) {
  return o.ambiguity == "moment" ? AmbiguityConfig::moment(o.q) : AmbiguityConfig::wasserstein(o.eps);
}

inline ExperimentConfig experiment_from(const CliOptions& o, Method method, std::size_t n) {
  ExperimentConfig c;
  c.instance_path = o.instance;
  c.method = method;
  c.ambiguity = ambiguity_from(o);
  c.drsd.tau = o.tau;
  c.drsd.gamma = o.gamma;
  c.drsd.k_min = o.k_min;
  c.drsd.k_max = o.k_max;
  c.drls.tolerance = o.tau;
  c.drls.sample_size = n;
  c.replications = o.reps;
  c.base_seed = o.seed;
  c.record_timing = !o.no_timing;
  c.threads = o.threads;
  try {
    c.validate();
  } catch (const std::invalid_argument& e) {
    throw UsageError(e.what());
  }
  return c;
}

inline std::string format_vector(std::span<const double> v) {
  std::ostringstream os;
  os << std::setprecision(10) << '(';
  for (std::size_t i = 0; i < v.size(); ++i) os << (i ? ", " : "") << v[i];
  os << ')';
  return os.str();
}

inline void print_report(std::ostream& out, const ProblemInstance& in, const AmbiguityConfig& amb,
                         const RunReport& r) {
  out << std::setprecision(10);
  out << "instance            " << in.name << '\n'
      << "method              " << to_string(r.method) << '\n'
      << "ambiguity           " << describe(amb) << '\n'
      << "status              " << (r.converged ? "converged" : "iteration limit reached") << '\n'
      << "objective           " << r.objective << '\n'
      << "solution            " << format_vector(r.solution) << '\n'
      << "iterations          " << r.iterations << '\n'
      << "observations        " << r.observations << '\n'
      << "unique observations " << r.unique_observations << '\n'
      << "master solves       " << r.counters.master_solves << '\n'
      << "subproblem solves   " << r.counters.subproblem_solves << '\n'
      << "separation solves   " << r.counters.separation_solves << '\n'
      << "argmax evaluations  " << r.counters.argmax_evaluations << '\n'
      << std::fixed << std::setprecision(4)
      << "time total          " << r.time.total << " s\n"
      << "time master         " << r.time.master << " s\n"
      << "time subproblem     " << r.time.subproblem << " s\n"
      << "time optimality     " << r.time.optimality << " s\n"
      << "time argmax         " << r.time.argmax << " s\n"
      << "time separation     " << r.time.separation << " s\n";
  out.unsetf(std::ios::floatfield);
}

inline void print_tables(std::ostream& out, const std::vector<StatsRow>& rows) {
  out << estimates_header() << '\n';
  for (const StatsRow& s : rows) out << format_estimates_row(s) << '\n';
  out << '\n' << times_header() << '\n';
  for (const StatsRow& s : rows) out << format_times_row(s) << '\n';
  for (const StatsRow& s : rows) {
    if (s.failures) out << s.label() << ": " << s.failures << " failed replication(s)\n";
    if (s.degenerate) out << s.label() << ": fewer than two successful replications; half-widths are 0\n";
  }
}

inline int cmd_validate(const CliOptions& o, std::ostream& out) {
  const ProblemInstance in = load_instance(o.instance);
  out << "ok: " << in.name << " (d_x=" << in.first_stage_dim() << ", m1=" << in.first_stage_rows()
      << ", d_y=" << in.second_stage_dim() << ", m2=" << in.second_stage_rows()
      << ", d_omega=" << in.omega_dim() << ", support=" << support_size(in) << ")\n";
  return kExitOk;
}

inline int cmd_solve(const CliOptions& o, std::ostream& out) {
  const ProblemInstance in = load_instance(o.instance);
  const ExperimentConfig c =
      experiment_from(o, o.method == "drsd" ? Method::Drsd : Method::Drls, o.sample_sizes.front());
  DrsdParams dp = c.drsd;
  dp.seed = o.seed;
  DrlsParams lp = c.drls;
  lp.seed = o.seed;
  const RunReport r = c.method == Method::Drsd ? run_drsd(in, c.ambiguity, dp)
                                               : run_drls(in, c.ambiguity, lp);
  print_report(out, in, c.ambiguity, r);
  return kExitOk;
}

inline int cmd_replicate(const CliOptions& o, std::ostream& out) {
  const ExperimentConfig c =
      experiment_from(o, o.method == "drsd" ? Method::Drsd : Method::Drls, o.sample_sizes.front());
  const ProblemInstance in = load_instance(o.instance);
  const ExperimentResult res = replicate(in, c);
  if (o.out.empty()) write_csv(out, res);
  else write_csv_file(o.out, res);
  print_tables(out, {res.stats});
  return res.stats.successes() == 0 ? kExitSolveFailure : kExitOk;
}

inline int cmd_benchmark(const CliOptions& o, std::ostream& out) {
  const ProblemInstance in = load_instance(o.instance);
  std::vector<StatsRow> rows;
  std::string csv;
  for (std::size_t n : o.sample_sizes) {
    const ExperimentResult res = replicate(in, experiment_from(o, Method::Drls, n));
    rows.push_back(res.stats);
    csv += to_csv(res);
  }
  const ExperimentResult res = replicate(in, experiment_from(o, Method::Drsd, 1));
  rows.push_back(res.stats);
  csv += to_csv(res);
  if (!o.out.empty()) {
    std::ofstream f(o.out, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open '" + o.out + "' for writing");
    f << csv;
  }
  out << in.name << ", " << describe(ambiguity_from(o)) << ", " << o.reps << " replications\n\n";
  print_tables(out, rows);
  for (const StatsRow& s : rows) {
    if (s.successes() == 0) return kExitSolveFailure;
  }
  return kExitOk;
}

}  // namespace detail

inline int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  using detail::CliOptions;
  CliOptions o;
  CLI::App app{"Two-stage distributionally robust LP solver (DRSD and DR L-shaped)", "drsd"};
  app.require_subcommand(1);

  CLI::App* validate = app.add_subcommand("validate", "Parse and check an instance file");
  detail::add_instance_flag(validate, o);

  CLI::App* solve = app.add_subcommand("solve", "Run one solve and print a report");
  detail::add_instance_flag(solve, o);
  detail::FlagSet solve_flags = detail::add_algorithm_flags(solve, o, true);
  solve_flags.n = solve->add_option("--N", o.sample_sizes, "DRLS sample size")
                      ->expected(1)
                      ->check(CLI::PositiveNumber);

  CLI::App* rep = app.add_subcommand("replicate", "Run independent replications and write a CSV");
  detail::add_instance_flag(rep, o);
  detail::FlagSet rep_flags = detail::add_algorithm_flags(rep, o, true);
  rep_flags.n = rep->add_option("--N", o.sample_sizes, "DRLS sample size")
                    ->expected(1)
                    ->check(CLI::PositiveNumber);

  CLI::App* bench = app.add_subcommand("benchmark", "Compare DRSD with DRLS-N for several N");
  detail::add_instance_flag(bench, o);
  detail::FlagSet bench_flags = detail::add_algorithm_flags(bench, o, false);
  bench_flags.n = bench->add_option("--N", o.sample_sizes, "DRLS sample sizes (comma separated)")
                      ->delimiter(',')
                      ->check(CLI::PositiveNumber);

  for (CLI::App* cmd : {rep, bench}) {
    cmd->add_option("--reps", o.reps, "Replications")->check(CLI::PositiveNumber)->capture_default_str();
    cmd->add_option("--out", o.out, "CSV output path (replicate: stdout when omitted)");
    cmd->add_flag("--no-timing", o.no_timing, "Leave time columns empty for reproducible CSVs");
    cmd->add_option("--threads", o.threads, "Worker threads (0: hardware concurrency)")
        ->capture_default_str();
  }

  std::vector<std::string> args;
  for (int i = argc - 1; i > 0; --i) args.emplace_back(argv[i]);
  try {
    app.parse(args);
  } catch (const CLI::CallForHelp&) {
    out << (app.get_subcommands().empty() ? app.help() : app.get_subcommands().front()->help());
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n\n";
    CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  }

  try {
    if (*validate) return detail::cmd_validate(o, out);
    if (*solve) {
      detail::check_conflicts(solve_flags, o, true);
      return detail::cmd_solve(o, out);
    }
    if (*rep) {
      detail::check_conflicts(rep_flags, o, true);
      return detail::cmd_replicate(o, out);
    }
    if (o.sample_sizes == std::vector<std::size_t>{100} && !bench_flags.n->count()) {
      o.sample_sizes = {100, 250, 500, 1000, 2000};
    }
    detail::check_conflicts(bench_flags, o, false);
    return detail::cmd_benchmark(o, out);
  } catch (const detail::UsageError& e) {
    err << "error: " << e.what() << "\n\n";
    CLI::App* sub = app.get_subcommands().front();
    err << sub->help();
    return kExitUsage;
  } catch (const InstanceError& e) {
    err << "error: " << o.instance << ": " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "solve failed: " << e.what() << '\n';
    return kExitSolveFailure;
  }
}

}  // namespace drsd
