#pragma once

#include <chrono>
#include <cstddef>
#include <string>
#include <vector>

namespace drsd {

enum class Method { Drsd, Drls };

inline std::string to_string(Method m) { return m == Method::Drsd ? "drsd" : "drls"; }

struct OperationCounters {
  std::size_t master_solves = 0;
  std::size_t subproblem_solves = 0;
  std::size_t separation_solves = 0;
  std::size_t argmax_evaluations = 0;
};

// Seconds per phase. "optimality" covers the stopping-rule and incumbent
// evaluations.
struct TimeBreakdown {
  double total = 0.0;
  double master = 0.0;
  double subproblem = 0.0;
  double optimality = 0.0;
  double argmax = 0.0;
  double separation = 0.0;
};

struct RunReport {
  Method method = Method::Drsd;
  double objective = 0.0;  // in-sample estimate at the returned solution
  std::size_t iterations = 0;
  std::size_t unique_observations = 0;
  std::size_t observations = 0;
  OperationCounters counters;
  TimeBreakdown time;
  std::vector<double> solution;
  bool converged = false;  // false when the iteration cap stopped the run
};

inline double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

// Adds the lifetime of the scope to an accumulator.
class PhaseTimer {
 public:
  explicit PhaseTimer(double& sink) : sink_(sink), start_(std::chrono::steady_clock::now()) {}
  PhaseTimer(const PhaseTimer&) = delete;
  PhaseTimer& operator=(const PhaseTimer&) = delete;
  ~PhaseTimer() {
    sink_ += std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  }

 private:
  double& sink_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace drsd
