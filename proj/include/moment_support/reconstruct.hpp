#pragma once

// Support reconstruction programs.  All three variants minimize the mass of
// P_d over the bounding box B subject to an SOS certificate of P_d >= 0 on B
// and a truncated localizing constraint M_r((P_d - h) y) >= 0:
//
//   P4: h = 1.
//   P5: h in [1, 1 + delta_h] is a variable rewarded by -omega_h * h.
//   P6: P5 plus omega_m * || Mbar_d(y) coeffs(P_d - 1) ||_2, which pulls
//       P_d - 1 toward the null space of the boundary matrix.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "moment_support/basis.hpp"
#include "moment_support/certificates.hpp"
#include "moment_support/errors.hpp"
#include "moment_support/matrices.hpp"
#include "moment_support/moments.hpp"
#include "moment_support/polynomial.hpp"
#include "moment_support/program.hpp"
#include "moment_support/solver.hpp"

namespace moment_support {

enum class Variant { p4, p5, p6 };

inline std::string to_string(Variant v) {
  switch (v) {
    case Variant::p4: return "P4";
    case Variant::p5: return "P5";
    case Variant::p6: return "P6";
  }
  return "P4";
}

inline Variant parse_variant(const std::string& s) {
  if (s == "P4" || s == "p4") return Variant::p4;
  if (s == "P5" || s == "p5") return Variant::p5;
  if (s == "P6" || s == "p6") return Variant::p6;
  throw ParameterError("unknown variant '" + s + "' (expected P4, P5 or P6)");
}

/// How the Lebesgue moments of B enter the objective.  `probability` divides
/// them by vol(B), i.e. integrates P_d against the uniform probability on B;
/// `lebesgue` uses the raw moments.  The choice changes the balance against
/// the omega_h * h term in P5/P6.
enum class ObjectiveScaling { probability, lebesgue };

inline std::string to_string(ObjectiveScaling s) {
  return s == ObjectiveScaling::probability ? "probability" : "lebesgue";
}

inline ObjectiveScaling parse_objective_scaling(const std::string& s) {
  if (s == "probability") return ObjectiveScaling::probability;
  if (s == "lebesgue") return ObjectiveScaling::lebesgue;
  throw ParameterError("unknown objective scaling '" + s + "'");
}

struct ReconstructionConfig {
  Variant variant = Variant::p5;
  int degree = 4;
  /// Localizing truncation order; empty selects the largest r with
  /// 2r + d <= measure_moments.max_order().
  std::optional<int> relax_order;
  double omega_h = 1.2;
  double delta_h = 0.2;
  double omega_m = 10.0;
  std::vector<Interval> bounding_box;
  BoxEncoding box_encoding = BoxEncoding::per_axis_quadratic;
  /// Explicit g_j; when non-empty these replace the box encoding.
  std::vector<Polynomial> bounding_polys;
  ObjectiveScaling objective_scaling = ObjectiveScaling::probability;
  MomentSequence objective_moments;
  MomentSequence measure_moments;
};

inline int resolve_relax_order(const ReconstructionConfig& cfg) {
  if (cfg.relax_order) return *cfg.relax_order;
  const int spare = cfg.measure_moments.max_order() - cfg.degree;
  return spare >= 0 ? spare / 2 : -1;
}

inline void validate(const ReconstructionConfig& cfg) {
  const int d = cfg.degree;
  if (d < 0) throw ParameterError("degree must be >= 0");
  const std::size_t n = cfg.measure_moments.dimension();
  if (n == 0) throw ParameterError("measure moments are missing");
  if (cfg.objective_moments.dimension() != n) {
    throw StructuralError("objective moments and measure moments differ in dimension");
  }
  if (cfg.bounding_box.size() != n) {
    throw StructuralError("bounding box has " + std::to_string(cfg.bounding_box.size()) +
                          " axes, measure has dimension " + std::to_string(n));
  }
  for (const auto& iv : cfg.bounding_box) require_nondegenerate(iv, "bounding box axis");
  if (cfg.relax_order && *cfg.relax_order < 0) {
    throw ParameterError("relaxation order must be >= 0");
  }
  const int r = resolve_relax_order(cfg);
  const int have = cfg.measure_moments.max_order();
  if (r < 0 || have < 2 * r + d) {
    const int rr = std::max(r, 0);
    throw OrderError("d=" + std::to_string(d) + ", r=" + std::to_string(rr) +
                         " requires moments up to order 2r+d = " +
                         std::to_string(2 * rr + d) + ", but the measure moments stop at order " +
                         std::to_string(have),
                     2 * rr + d, have);
  }
  if (cfg.objective_moments.max_order() < d) {
    throw OrderError("objective requires bounding-set moments up to order d = " +
                         std::to_string(d) + ", have " +
                         std::to_string(cfg.objective_moments.max_order()),
                     d, cfg.objective_moments.max_order());
  }
  if (cfg.variant != Variant::p4) {
    if (!(cfg.omega_h > 0.0) || !std::isfinite(cfg.omega_h)) {
      throw ParameterError("omega_h must be positive for " + to_string(cfg.variant));
    }
    if (!(cfg.delta_h >= 0.0) || !std::isfinite(cfg.delta_h)) {
      throw ParameterError("delta_h must be >= 0 for " + to_string(cfg.variant));
    }
  }
  if (cfg.variant == Variant::p6) {
    if (!(cfg.omega_m > 0.0) || !std::isfinite(cfg.omega_m)) {
      throw ParameterError("omega_m must be positive for P6");
    }
    if (have < 2 * d) {
      throw OrderError("P6 boundary matrix requires moments up to order 2d = " +
                           std::to_string(2 * d) + ", have " + std::to_string(have),
                       2 * d, have);
    }
  }
}

/// A conic program together with the variable and constraint bookkeeping
/// needed to read a solution back.
struct ProgramLayout {
  ConicProgram program;
  Variant variant = Variant::p4;
  int relax_order = 0;
  MonomialBasis coefficient_basis;
  std::vector<std::size_t> coefficient_vars;
  std::optional<std::size_t> shift_var;
  std::optional<std::size_t> epigraph_var;
  std::vector<Polynomial> multipliers;
  std::vector<GramBlock> blocks;
  /// Per block: program variable of Gram entry (row, col), row <= col, at
  /// packed index col * (col + 1) / 2 + row.
  std::vector<std::vector<std::size_t>> gram_vars;
  std::vector<std::size_t> gram_constraints;
  std::size_t localizing_constraint = 0;
  std::vector<std::string> warnings;

  static std::size_t packed(std::size_t row, std::size_t col) {
    return col * (col + 1) / 2 + row;
  }

  Eigen::MatrixXd gram_value(std::size_t block, std::span<const double> x) const {
    const std::size_t side = blocks[block].side();
    Eigen::MatrixXd q(side, side);
    for (std::size_t col = 0; col < side; ++col) {
      for (std::size_t row = 0; row <= col; ++row) {
        q(row, col) = q(col, row) = x[gram_vars[block][packed(row, col)]];
      }
    }
    return q;
  }

  Polynomial polynomial_value(std::span<const double> x) const {
    std::vector<double> c(coefficient_vars.size());
    for (std::size_t k = 0; k < c.size(); ++k) c[k] = x[coefficient_vars[k]];
    return Polynomial::from_coefficients(coefficient_basis, c);
  }
};

namespace detail {

inline ProgramLayout assemble_common(const ReconstructionConfig& cfg) {
  validate(cfg);
  const std::size_t n = cfg.measure_moments.dimension();
  const int d = cfg.degree;

  ProgramLayout L;
  L.variant = cfg.variant;
  L.relax_order = resolve_relax_order(cfg);
  L.coefficient_basis = MonomialBasis(n, d);
  ConicProgram& prog = L.program;

  // Bounding polynomials; multipliers that cannot fit under degree d are
  // identically zero in any certificate and are dropped.
  const std::vector<Polynomial> all = cfg.bounding_polys.empty()
                                          ? box_polynomials(cfg.bounding_box, cfg.box_encoding)
                                          : cfg.bounding_polys;
  for (std::size_t j = 0; j < all.size(); ++j) {
    if (all[j].dimension() != n) {
      throw StructuralError("bounding polynomial " + std::to_string(j + 1) +
                            " has the wrong dimension");
    }
    if (all[j].degree() > d) {
      L.warnings.push_back("bounding polynomial g" + std::to_string(j + 1) + " has degree " +
                           std::to_string(all[j].degree()) + " > d = " + std::to_string(d) +
                           "; its multiplier is omitted");
    } else {
      L.multipliers.push_back(all[j]);
    }
  }

  // Coefficients p_alpha with objective sum_alpha p_alpha y_B,alpha.
  const double scale = cfg.objective_scaling == ObjectiveScaling::probability
                           ? cfg.objective_moments(MultiIndex(n))
                           : 1.0;
  if (!(scale > 0.0)) throw ParameterError("bounding-set moment y_B,0 must be positive");
  for (const auto& alpha : L.coefficient_basis) {
    const std::size_t v = prog.add_variable("p" + alpha.to_string());
    prog.set_cost(v, cfg.objective_moments(alpha) / scale);
    L.coefficient_vars.push_back(v);
  }

  // Gram matrices, each constrained PSD.
  L.blocks = gram_blocks(n, d, L.multipliers);
  for (std::size_t b = 0; b < L.blocks.size(); ++b) {
    const std::size_t side = L.blocks[b].side();
    AffineMatrix gram(side, side);
    std::vector<std::size_t> vars(L.blocks[b].free_entries());
    std::vector<std::size_t> bindings;
    for (std::size_t col = 0; col < side; ++col) {
      for (std::size_t row = 0; row <= col; ++row) {
        const std::string name =
            "Q" + std::to_string(b) + "[" + std::to_string(row) + "," + std::to_string(col) + "]";
        const std::size_t v = prog.add_variable(name);
        vars[ProgramLayout::packed(row, col)] = v;
        const std::size_t slot = gram.add_variable(name);
        gram.coefficient(slot)(row, col) = 1.0;
        gram.coefficient(slot)(col, row) = 1.0;
        bindings.push_back(v);
      }
    }
    L.gram_vars.push_back(std::move(vars));
    L.gram_constraints.push_back(prog.add_psd(
        {std::move(gram), std::move(bindings), "gram " + std::to_string(b)}));
  }

  // p_alpha = coefficient of s0 + sum_j s_j g_j.
  const CoefficientMatch match = match_constraints(L.blocks, L.multipliers);
  for (std::size_t e = 0; e < match.equations.size(); ++e) {
    LinearEquality eq;
    eq.label = "match " + match.basis[e].to_string();
    eq.terms.push_back({L.coefficient_vars[e], 1.0});
    for (const auto& t : match.equations[e]) {
      eq.terms.push_back({L.gram_vars[t.block][ProgramLayout::packed(t.row, t.col)], -t.weight});
    }
    prog.add_equality(std::move(eq));
  }

  // Shift variable h.
  const bool shifted = cfg.variant != Variant::p4;
  if (shifted) {
    const std::size_t h = prog.add_variable("h");
    prog.set_cost(h, -cfg.omega_h);
    prog.add_box({h, 1.0, 1.0 + cfg.delta_h});
    L.shift_var = h;
  }

  // Truncated localizing constraint M_r((P_d - h) y) >= 0.
  AffineMatrix loc = localizing_matrix_affine(cfg.measure_moments, d, L.relax_order, shifted);
  std::vector<std::size_t> bindings = L.coefficient_vars;
  if (shifted) bindings.push_back(*L.shift_var);
  L.localizing_constraint =
      prog.add_psd({std::move(loc), std::move(bindings), "localizing"});

  // Boundary penalty || Mbar_d q ||_2 <= t with q = coeffs(P_d - 1).
  if (cfg.variant == Variant::p6) {
    const std::size_t t = prog.add_variable("t");
    prog.set_cost(t, cfg.omega_m);
    const NumericMatrix mbar = boundary_matrix(cfg.measure_moments, d);
    prog.add_second_order_cone(
        {t, mbar, L.coefficient_vars, -mbar.col(0), "boundary norm"});
    L.epigraph_var = t;
  }
  return L;
}

inline void require_variant(const ReconstructionConfig& cfg, Variant v) {
  if (cfg.variant != v) {
    throw ParameterError("configuration variant is " + to_string(cfg.variant) +
                         ", expected " + to_string(v));
  }
}

}  // namespace detail

inline ProgramLayout assemble_p4(const ReconstructionConfig& cfg) {
  detail::require_variant(cfg, Variant::p4);
  return detail::assemble_common(cfg);
}

inline ProgramLayout assemble_p5(const ReconstructionConfig& cfg) {
  detail::require_variant(cfg, Variant::p5);
  return detail::assemble_common(cfg);
}

inline ProgramLayout assemble_p6(const ReconstructionConfig& cfg) {
  detail::require_variant(cfg, Variant::p6);
  return detail::assemble_common(cfg);
}

inline ProgramLayout assemble(const ReconstructionConfig& cfg) {
  return detail::assemble_common(cfg);
}

/// Tolerances 1e-8, loosened to 1e-6 from d = 12 on, where monomial-basis
/// moment matrices are badly conditioned.
inline SolverOptions default_solver_options(int degree) {
  SolverOptions opt;
  if (degree >= 12) {
    opt.feasibility_tol = 1e-6;
    opt.gap_tol = 1e-6;
  }
  return opt;
}

inline RawSolution solve(const ConicProgram& program, const SolverOptions& options,
                         const SolverAdapter& solver) {
  return solver.submit(program, options);
}

// ----------------------------------------------------------------------------
// Estimates

/// Relative tolerance used when re-verifying PSD blocks of a solution.
inline constexpr double kPsdVerifyTol = 1e-6;

struct BlockCheck {
  std::string label;
  double min_eigenvalue = 0.0;
  double scale = 1.0;
  bool passed = false;
};

struct Diagnostics {
  /// Every PSD block of the program evaluated at the solution.
  std::vector<BlockCheck> blocks;
  /// M_r((P* - h*) y) rebuilt from the recovered polynomial.
  BlockCheck localizing_recheck;
  /// Largest |p_alpha - coeff_alpha(s0 + sum s_j g_j)|.
  double certificate_residual = 0.0;
  bool shift_within_bounds = true;
  /// ||Mbar_d coeffs(P* - 1)||_2 and ||Mbar_d||_2; P6 only.
  std::optional<double> boundary_residual;
  std::optional<double> boundary_norm;
  bool verified = false;
};

struct SupportEstimate {
  Polynomial polynomial;
  double h_star = 1.0;
  double objective_value = 0.0;
  SolverStatus status = SolverStatus::numerical_failure;
  /// False unless the solver reported optimal or near-optimal.
  bool reliable = false;
  int relax_order = 0;
  Diagnostics diagnostics;
  std::vector<std::string> warnings;
  std::string solver_message;
  unsigned iterations = 0;
  double solve_seconds = 0.0;
};

inline BlockCheck check_psd(const std::string& label, const NumericMatrix& m) {
  BlockCheck c;
  c.label = label;
  c.min_eigenvalue = min_eigenvalue(m);
  // Floored at 1 so a block that is zero up to round-off still passes.
  c.scale = std::max(1.0, max_abs_entry(m));
  c.passed = c.min_eigenvalue >= -kPsdVerifyTol * c.scale;
  return c;
}

/// Reads the solution back and recomputes every feasibility check without
/// trusting the solver's own report.
inline SupportEstimate extract_estimate(const ReconstructionConfig& cfg,
                                        const ProgramLayout& layout, const RawSolution& raw) {
  SupportEstimate est;
  est.status = raw.status;
  est.reliable = is_success(raw.status);
  est.relax_order = layout.relax_order;
  est.warnings = layout.warnings;
  est.solver_message = raw.message;
  est.iterations = raw.iterations;
  est.solve_seconds = raw.solve_seconds;
  const std::size_t n = cfg.measure_moments.dimension();
  est.polynomial = Polynomial(n);
  if (raw.values.size() != layout.program.variable_count()) {
    if (!est.reliable) return est;
    throw StructuralError("solution size does not match the program");
  }
  const std::span<const double> x = raw.values;
  for (double v : x) {
    if (!std::isfinite(v)) {
      est.reliable = false;
      return est;
    }
  }
  if (!est.reliable) est.warnings.push_back("solver status " + to_string(raw.status) +
                                            "; polynomial is unreliable");

  est.polynomial = layout.polynomial_value(x);
  est.h_star = layout.shift_var ? x[*layout.shift_var] : 1.0;
  est.objective_value = layout.program.objective_value(x);

  Diagnostics& diag = est.diagnostics;
  bool ok = true;
  for (const auto& c : layout.program.psd_constraints()) {
    const auto values = layout.program.bound_values(c, x);
    diag.blocks.push_back(check_psd(c.label, c.matrix.evaluate(values)));
    ok = ok && diag.blocks.back().passed;
  }

  Polynomial shifted = est.polynomial;
  shifted.add_term(MultiIndex(n), -est.h_star);
  diag.localizing_recheck =
      check_psd("localizing (rebuilt)",
                localizing_matrix(cfg.measure_moments, shifted, layout.relax_order));
  ok = ok && diag.localizing_recheck.passed;

  std::vector<Eigen::MatrixXd> grams;
  for (std::size_t b = 0; b < layout.blocks.size(); ++b) grams.push_back(layout.gram_value(b, x));
  const Polynomial certified =
      match_constraints(layout.blocks, layout.multipliers).polynomial(grams);
  double scale = 1.0;
  for (const auto& alpha : layout.coefficient_basis) {
    scale = std::max(scale, std::abs(est.polynomial.coefficient(alpha)));
    diag.certificate_residual =
        std::max(diag.certificate_residual,
                 std::abs(est.polynomial.coefficient(alpha) - certified.coefficient(alpha)));
  }
  ok = ok && diag.certificate_residual <= kPsdVerifyTol * scale;

  if (layout.shift_var) {
    diag.shift_within_bounds =
        est.h_star >= 1.0 - 1e-9 && est.h_star <= 1.0 + cfg.delta_h + 1e-9;
    ok = ok && diag.shift_within_bounds;
  }

  if (cfg.variant == Variant::p6) {
    const NumericMatrix mbar = boundary_matrix(cfg.measure_moments, cfg.degree);
    Eigen::VectorXd q(layout.coefficient_vars.size());
    for (std::size_t k = 0; k < layout.coefficient_vars.size(); ++k) {
      q[k] = x[layout.coefficient_vars[k]];
    }
    q[0] -= 1.0;
    diag.boundary_residual = (mbar * q).norm();
    diag.boundary_norm = Eigen::JacobiSVD<NumericMatrix>(mbar).singularValues()(0);
  }
  diag.verified = est.reliable && ok;
  return est;
}

/// Moment data with a non-PSD moment matrix has no representing measure.  The
/// relaxation alone does not reject it, so it is screened before solving.
inline std::optional<std::string> moment_data_defect(const MomentSequence& y) {
  const int k = y.max_order() / 2;
  const BlockCheck c = check_psd("moment matrix", moment_matrix(y, k));
  if (c.passed) return std::nullopt;
  std::ostringstream msg;
  msg << "moment data has no representing measure: M_" << k << "(y) has min eigenvalue "
      << c.min_eigenvalue;
  return msg.str();
}

inline SupportEstimate reconstruct(const ReconstructionConfig& cfg, const SolverAdapter& solver,
                                   const SolverOptions& options) {
  validate(cfg);
  if (auto defect = moment_data_defect(cfg.measure_moments)) {
    SupportEstimate est;
    est.status = SolverStatus::infeasible;
    est.relax_order = resolve_relax_order(cfg);
    est.polynomial = Polynomial(cfg.measure_moments.dimension());
    est.solver_message = *defect;
    est.warnings.push_back(*defect);
    return est;
  }
  const ProgramLayout layout = assemble(cfg);
  const RawSolution raw = solve(layout.program, options, solver);
  return extract_estimate(cfg, layout, raw);
}

inline SupportEstimate reconstruct(const ReconstructionConfig& cfg, const SolverAdapter& solver) {
  return reconstruct(cfg, solver, default_solver_options(cfg.degree));
}

/// Solves in coordinates u = scale .* x + shift that map B onto [-1, 1]^n and
/// maps the recovered polynomial back to x.  Diagnostics refer to the
/// rescaled problem.
inline SupportEstimate reconstruct_rescaled(const ReconstructionConfig& cfg,
                                            const SolverAdapter& solver,
                                            const SolverOptions& options) {
  validate(cfg);
  const std::size_t n = cfg.bounding_box.size();
  std::vector<double> scale(n), shift(n), inv_scale(n), inv_shift(n);
  double volume = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& iv = cfg.bounding_box[i];
    scale[i] = 2.0 / iv.width();
    shift[i] = -(iv.lower + iv.upper) / iv.width();
    inv_scale[i] = 1.0 / scale[i];
    inv_shift[i] = -shift[i] / scale[i];
    volume *= iv.width() / 2.0;
  }
  ReconstructionConfig unit = cfg;
  unit.bounding_box.assign(n, Interval{-1.0, 1.0});
  unit.measure_moments = pushforward_affine(cfg.measure_moments, scale, shift);
  MomentSequence unit_box = lebesgue_box_moments(unit.bounding_box, cfg.objective_moments.max_order());
  std::vector<double> jac = unit_box.values();
  for (double& v : jac) v *= volume;
  unit.objective_moments = MomentSequence(unit_box.basis(), std::move(jac), Normalization::lebesgue,
                                          cfg.objective_moments.provenance() + " (rescaled)");
  unit.bounding_polys.clear();
  for (const auto& g : cfg.bounding_polys) unit.bounding_polys.push_back(g.compose_affine(inv_scale, inv_shift));

  SupportEstimate est = reconstruct(unit, solver, options);
  est.polynomial = est.polynomial.compose_affine(scale, shift);
  est.warnings.push_back("solved in coordinates rescaled to [-1,1]^n; diagnostics refer to them");
  return est;
}

}  // namespace moment_support
