#pragma once

// Solver adapter contract: submit(ConicProgram, options) -> RawSolution.

#include <cstdlib>
#include <limits>
#include <memory>
#include <string>
#include <string_view>
#include <vector>

#include "moment_support/errors.hpp"
#include "moment_support/program.hpp"

namespace moment_support {

enum class SolverStatus { optimal, near_optimal, infeasible, unbounded, numerical_failure };

inline std::string to_string(SolverStatus s) {
  switch (s) {
    case SolverStatus::optimal: return "optimal";
    case SolverStatus::near_optimal: return "near-optimal";
    case SolverStatus::infeasible: return "infeasible";
    case SolverStatus::unbounded: return "unbounded";
    case SolverStatus::numerical_failure: return "numerical-failure";
  }
  return "numerical-failure";
}

inline bool is_success(SolverStatus s) {
  return s == SolverStatus::optimal || s == SolverStatus::near_optimal;
}

struct SolverOptions {
  double feasibility_tol = 1e-8;
  double gap_tol = 1e-8;
  unsigned max_iterations = 200;
  double time_limit_seconds = std::numeric_limits<double>::infinity();
  bool verbose = false;
};

struct RawSolution {
  SolverStatus status = SolverStatus::numerical_failure;
  std::vector<double> values;
  double objective = std::numeric_limits<double>::quiet_NaN();
  double dual_objective = std::numeric_limits<double>::quiet_NaN();
  double primal_residual = std::numeric_limits<double>::quiet_NaN();
  double dual_residual = std::numeric_limits<double>::quiet_NaN();
  unsigned iterations = 0;
  double solve_seconds = 0.0;
  std::string message;
};

class SolverAdapter {
 public:
  virtual ~SolverAdapter() = default;
  virtual std::string name() const = 0;
  /// Never throws for solver-side failures; they come back as a status.
  virtual RawSolution submit(const ConicProgram& program, const SolverOptions& options) const = 0;
};

}  // namespace moment_support
