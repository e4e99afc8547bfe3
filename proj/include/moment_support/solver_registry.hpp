#pragma once

#include <cstdlib>
#include <memory>
#include <string>
#include <string_view>

#include "moment_support/clarabel_adapter.hpp"
#include "moment_support/errors.hpp"
#include "moment_support/solver.hpp"

namespace moment_support {

/// Environment variable naming the adapter picked by solver_from_environment().
inline constexpr const char* kSolverEnvVar = "MOMENT_SUPPORT_SOLVER";

inline std::unique_ptr<SolverAdapter> make_solver(std::string_view name) {
  if (name == "clarabel") return std::make_unique<ClarabelAdapter>();
  throw ParameterError("unknown solver adapter '" + std::string(name) +
                       "' (available: clarabel)");
}

inline std::unique_ptr<SolverAdapter> solver_from_environment() {
  const char* name = std::getenv(kSolverEnvVar);
  return make_solver(name && *name ? name : "clarabel");
}

}  // namespace moment_support
