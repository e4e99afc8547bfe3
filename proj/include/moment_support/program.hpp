#pragma once

// Solver-agnostic conic program: a linear objective over named scalar
// variables with linear equalities, PSD constraints on affine matrices,
// second-order cones and scalar boxes.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "moment_support/errors.hpp"
#include "moment_support/matrices.hpp"

namespace moment_support {

struct LinearTerm {
  std::size_t variable = 0;
  double coefficient = 0.0;
};

/// sum terms = rhs
struct LinearEquality {
  std::vector<LinearTerm> terms;
  double rhs = 0.0;
  std::string label;
};

/// matrix(x_bindings) is positive semidefinite.  bindings[k] is the program
/// variable standing for the matrix's k-th local variable.
struct PsdConstraint {
  AffineMatrix matrix;
  std::vector<std::size_t> bindings;
  std::string label;
};

/// || A x_bindings + offset ||_2 <= x_epigraph
struct SecondOrderConeConstraint {
  std::size_t epigraph = 0;
  Eigen::MatrixXd matrix;
  std::vector<std::size_t> bindings;
  Eigen::VectorXd offset;
  std::string label;
};

/// lower <= x_variable <= upper; either side may be infinite.
struct BoxConstraint {
  std::size_t variable = 0;
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
};

class ConicProgram {
 public:
  std::size_t add_variable(std::string name) {
    names_.push_back(std::move(name));
    cost_.push_back(0.0);
    return names_.size() - 1;
  }

  std::size_t variable_count() const noexcept { return names_.size(); }
  const std::vector<std::string>& variable_names() const noexcept { return names_; }

  void set_cost(std::size_t variable, double c) { cost_.at(variable) = c; }
  void add_cost(std::size_t variable, double c) { cost_.at(variable) += c; }
  const std::vector<double>& cost() const noexcept { return cost_; }
  double objective_constant() const noexcept { return objective_constant_; }
  void set_objective_constant(double c) noexcept { objective_constant_ = c; }

  void add_equality(LinearEquality eq) { equalities_.push_back(std::move(eq)); }
  std::size_t add_psd(PsdConstraint c) {
    psd_.push_back(std::move(c));
    return psd_.size() - 1;
  }
  void add_second_order_cone(SecondOrderConeConstraint c) { soc_.push_back(std::move(c)); }
  void add_box(BoxConstraint b) { boxes_.push_back(b); }

  const std::vector<LinearEquality>& equalities() const noexcept { return equalities_; }
  const std::vector<PsdConstraint>& psd_constraints() const noexcept { return psd_; }
  const std::vector<SecondOrderConeConstraint>& second_order_cones() const noexcept {
    return soc_;
  }
  const std::vector<BoxConstraint>& boxes() const noexcept { return boxes_; }

  double objective_value(std::span<const double> x) const {
    double v = objective_constant_;
    for (std::size_t i = 0; i < cost_.size(); ++i) v += cost_[i] * x[i];
    return v;
  }

  /// Values of a PSD constraint's local variables taken from `x`.
  std::vector<double> bound_values(const PsdConstraint& c, std::span<const double> x) const {
    std::vector<double> out(c.bindings.size());
    for (std::size_t k = 0; k < out.size(); ++k) out[k] = x[c.bindings[k]];
    return out;
  }

  /// Throws StructuralError on dangling references or malformed blocks.
  void validate() const {
    const std::size_t nv = names_.size();
    auto check = [&](std::size_t v, const std::string& where) {
      if (v >= nv) {
        throw StructuralError(where + " references undeclared variable " + std::to_string(v));
      }
    };
    for (const auto& eq : equalities_) {
      for (const auto& t : eq.terms) check(t.variable, "equality '" + eq.label + "'");
    }
    for (const auto& c : psd_) {
      if (c.matrix.rows() != c.matrix.cols()) {
        throw StructuralError("PSD block '" + c.label + "' is not square");
      }
      if (!c.matrix.is_symmetric()) {
        throw StructuralError("PSD block '" + c.label + "' is not symmetric");
      }
      if (c.bindings.size() != c.matrix.variable_count()) {
        throw StructuralError("PSD block '" + c.label + "' binds " +
                              std::to_string(c.bindings.size()) + " of " +
                              std::to_string(c.matrix.variable_count()) + " variables");
      }
      for (auto v : c.bindings) check(v, "PSD block '" + c.label + "'");
    }
    for (const auto& c : soc_) {
      check(c.epigraph, "cone '" + c.label + "'");
      for (auto v : c.bindings) check(v, "cone '" + c.label + "'");
      if (static_cast<std::size_t>(c.matrix.cols()) != c.bindings.size() ||
          c.matrix.rows() != c.offset.size()) {
        throw StructuralError("cone '" + c.label + "' has inconsistent shapes");
      }
    }
    for (const auto& b : boxes_) {
      check(b.variable, "box");
      if (b.lower > b.upper) throw StructuralError("box with lower > upper");
    }
  }

 private:
  std::vector<std::string> names_;
  std::vector<double> cost_;
  double objective_constant_ = 0.0;
  std::vector<LinearEquality> equalities_;
  std::vector<PsdConstraint> psd_;
  std::vector<SecondOrderConeConstraint> soc_;
  std::vector<BoxConstraint> boxes_;
};

// ----------------------------------------------------------------------------
// Standard form  min c'x  s.t.  A x + s = b,  s in K1 x K2 x ...

enum class ConeKind { zero, nonnegative, second_order, psd_triangle };

struct ConeBlock {
  ConeKind kind;
  /// Vector length for zero/nonnegative/second-order cones, matrix side for
  /// the PSD cone.
  std::size_t dimension;
};

/// PSD slices use the upper triangle in column-major order with off-diagonal
/// entries scaled by sqrt(2), so the inner product matches the trace.
struct StandardConicForm {
  std::size_t variables = 0;
  std::size_t rows = 0;
  std::vector<double> cost;
  std::vector<std::size_t> col_ptr;
  std::vector<std::size_t> row_index;
  std::vector<double> values;
  std::vector<double> rhs;
  std::vector<ConeBlock> cones;
};

inline std::size_t triangle_size(std::size_t side) { return side * (side + 1) / 2; }

inline StandardConicForm to_standard_form(const ConicProgram& prog) {
  prog.validate();
  struct Triplet {
    std::size_t row, col;
    double value;
  };
  std::vector<Triplet> trip;
  std::vector<double> rhs;
  std::vector<ConeBlock> cones;
  std::size_t row = 0;

  // Equalities: a'x + s = rhs with s = 0.
  if (!prog.equalities().empty()) {
    for (const auto& eq : prog.equalities()) {
      for (const auto& t : eq.terms) trip.push_back({row, t.variable, t.coefficient});
      rhs.push_back(eq.rhs);
      ++row;
    }
    cones.push_back({ConeKind::zero, prog.equalities().size()});
  }

  // Boxes: -x + s = -lower and x + s = upper with s >= 0.
  std::size_t nonneg = 0;
  for (const auto& b : prog.boxes()) {
    if (std::isfinite(b.lower)) {
      trip.push_back({row++, b.variable, -1.0});
      rhs.push_back(-b.lower);
      ++nonneg;
    }
    if (std::isfinite(b.upper)) {
      trip.push_back({row++, b.variable, 1.0});
      rhs.push_back(b.upper);
      ++nonneg;
    }
  }
  if (nonneg) cones.push_back({ConeKind::nonnegative, nonneg});

  // Second-order cones: s = (t, A x + offset).
  for (const auto& c : prog.second_order_cones()) {
    trip.push_back({row++, c.epigraph, -1.0});
    rhs.push_back(0.0);
    for (Eigen::Index i = 0; i < c.matrix.rows(); ++i) {
      for (std::size_t k = 0; k < c.bindings.size(); ++k) {
        const double a = c.matrix(i, static_cast<Eigen::Index>(k));
        if (a != 0.0) trip.push_back({row, c.bindings[k], -a});
      }
      rhs.push_back(c.offset[i]);
      ++row;
    }
    cones.push_back({ConeKind::second_order, 1 + static_cast<std::size_t>(c.matrix.rows())});
  }

  // PSD blocks: s = svec(C + sum x_v G_v), so A = -svec(G_v), b = svec(C).
  const double root2 = std::sqrt(2.0);
  for (const auto& c : prog.psd_constraints()) {
    const auto side = static_cast<Eigen::Index>(c.matrix.rows());
    std::size_t slot = row;
    for (Eigen::Index col = 0; col < side; ++col) {
      for (Eigen::Index r = 0; r <= col; ++r) {
        const double w = r == col ? 1.0 : root2;
        rhs.push_back(w * c.matrix.constant()(r, col));
        for (std::size_t v = 0; v < c.bindings.size(); ++v) {
          const double g = c.matrix.coefficient(v)(r, col);
          if (g != 0.0) trip.push_back({slot, c.bindings[v], -w * g});
        }
        ++slot;
      }
    }
    row = slot;
    cones.push_back({ConeKind::psd_triangle, static_cast<std::size_t>(side)});
  }

  // Compress to CSC, merging duplicates.
  std::sort(trip.begin(), trip.end(), [](const Triplet& a, const Triplet& b) {
    return a.col != b.col ? a.col < b.col : a.row < b.row;
  });
  StandardConicForm out;
  out.variables = prog.variable_count();
  out.rows = row;
  out.cost = prog.cost();
  out.rhs = std::move(rhs);
  out.cones = std::move(cones);
  out.col_ptr.assign(out.variables + 1, 0);
  for (std::size_t k = 0; k < trip.size();) {
    std::size_t j = k;
    double sum = 0.0;
    while (j < trip.size() && trip[j].col == trip[k].col && trip[j].row == trip[k].row) {
      sum += trip[j].value;
      ++j;
    }
    if (sum != 0.0) {
      out.row_index.push_back(trip[k].row);
      out.values.push_back(sum);
      ++out.col_ptr[trip[k].col + 1];
    }
    k = j;
  }
  for (std::size_t c = 0; c < out.variables; ++c) out.col_ptr[c + 1] += out.col_ptr[c];
  return out;
}

}  // namespace moment_support
