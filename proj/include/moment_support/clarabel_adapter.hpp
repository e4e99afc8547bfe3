#pragma once

// Adapter for the Clarabel interior-point solver through its C ABI shim
// (solver/clarabel_ffi).

#include <chrono>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "moment_support/program.hpp"
#include "moment_support/solver.hpp"

extern "C" {

struct ms_clarabel_settings {
  double tol_feas;
  double tol_gap_abs;
  double tol_gap_rel;
  std::uint32_t max_iter;
  double time_limit;
  std::int32_t verbose;
};

struct ms_clarabel_result {
  std::int32_t status;
  std::uint32_t iterations;
  double obj_val;
  double obj_val_dual;
  double r_prim;
  double r_dual;
  double solve_time;
};

std::int32_t ms_clarabel_solve(std::size_t n, std::size_t m, const double* q,
                               const std::size_t* colptr, const std::size_t* rowval,
                               const double* nzval, const double* b, std::size_t ncones,
                               const std::int32_t* kinds, const std::size_t* dims,
                               const ms_clarabel_settings* settings, double* x_out,
                               double* s_out, double* z_out, ms_clarabel_result* out);
}

namespace moment_support {

class ClarabelAdapter final : public SolverAdapter {
 public:
  std::string name() const override { return "clarabel"; }

  RawSolution submit(const ConicProgram& program, const SolverOptions& options) const override {
    RawSolution sol;
    StandardConicForm form;
    try {
      form = to_standard_form(program);
    } catch (const Error& e) {
      sol.message = std::string("malformed program: ") + e.what();
      return sol;
    }

    std::vector<std::int32_t> kinds;
    std::vector<std::size_t> dims;
    for (const auto& c : form.cones) {
      kinds.push_back(static_cast<std::int32_t>(kind_code(c.kind)));
      dims.push_back(c.dimension);
    }
    const ms_clarabel_settings settings{
        options.feasibility_tol,
        options.gap_tol,
        options.gap_tol,
        options.max_iterations,
        std::isfinite(options.time_limit_seconds) ? options.time_limit_seconds : INFINITY,
        options.verbose ? 1 : 0};

    std::vector<double> x(form.variables), s(form.rows), z(form.rows);
    ms_clarabel_result res{};
    const auto start = std::chrono::steady_clock::now();
    const std::int32_t rc = ms_clarabel_solve(
        form.variables, form.rows, form.cost.data(), form.col_ptr.data(),
        form.row_index.data(), form.values.data(), form.rhs.data(), kinds.size(),
        kinds.data(), dims.data(), &settings, x.data(), s.data(), z.data(), &res);
    sol.solve_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    if (rc != 0) {
      sol.message = rc == -2 ? "solver aborted internally" : "solver rejected the problem data";
      return sol;
    }

    sol.values = std::move(x);
    sol.iterations = res.iterations;
    sol.objective = res.obj_val + program.objective_constant();
    sol.dual_objective = res.obj_val_dual + program.objective_constant();
    sol.primal_residual = res.r_prim;
    sol.dual_residual = res.r_dual;
    sol.status = map_status(res.status, sol.message);
    if (is_success(sol.status)) {
      for (double v : sol.values) {
        if (!std::isfinite(v)) {
          sol.status = SolverStatus::numerical_failure;
          sol.message = "non-finite primal values";
          break;
        }
      }
    }
    return sol;
  }

 private:
  static int kind_code(ConeKind k) {
    switch (k) {
      case ConeKind::zero: return 0;
      case ConeKind::nonnegative: return 1;
      case ConeKind::second_order: return 2;
      case ConeKind::psd_triangle: return 3;
    }
    return -1;
  }

  static SolverStatus map_status(std::int32_t code, std::string& message) {
    switch (code) {
      case 1: message = "solved"; return SolverStatus::optimal;
      case 4: message = "solved to reduced accuracy"; return SolverStatus::near_optimal;
      case 2: message = "primal infeasible"; return SolverStatus::infeasible;
      case 5: message = "primal infeasible (reduced accuracy)"; return SolverStatus::infeasible;
      case 3: message = "dual infeasible"; return SolverStatus::unbounded;
      case 6: message = "dual infeasible (reduced accuracy)"; return SolverStatus::unbounded;
      case 7: message = "iteration limit reached"; break;
      case 8: message = "time limit reached"; break;
      case 9: message = "numerical error"; break;
      case 10: message = "insufficient progress"; break;
      default: message = "solver status code " + std::to_string(code); break;
    }
    return SolverStatus::numerical_failure;
  }
};

}  // namespace moment_support
