#pragma once

#include <stdexcept>
#include <string>

namespace drsd {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed or invalid instance file.
class InstanceError : public Error {
 public:
  using Error::Error;
};

// Second-stage LP infeasible at some (x, ω): relatively complete recourse
// does not hold for the instance.
class RecourseInfeasibleError : public Error {
 public:
  using Error::Error;
};

// An LP that must have an optimal solution did not produce one.
class LpFailure : public Error {
 public:
  using Error::Error;
};

}  // namespace drsd
