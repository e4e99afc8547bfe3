#pragma once

// Moment, localizing and boundary matrices built from a moment sequence.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstddef>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "moment_support/basis.hpp"
#include "moment_support/errors.hpp"
#include "moment_support/moments.hpp"
#include "moment_support/polynomial.hpp"

namespace moment_support {

using NumericMatrix = Eigen::MatrixXd;

namespace detail {

inline void require_order(const MomentSequence& y, int required, const std::string& what) {
  if (y.max_order() < required) {
    throw OrderError(what + " requires moments up to order " +
                         std::to_string(required) + ", sequence has order " +
                         std::to_string(y.max_order()),
                     required, y.max_order());
  }
}

/// position of alpha_i + alpha_j + shift in y's basis for every (i, j).
inline std::vector<std::size_t> shifted_positions(const MomentSequence& y,
                                                  const MonomialBasis& half,
                                                  const MultiIndex& shift) {
  const std::size_t s = half.size();
  std::vector<std::size_t> out(s * s);
  for (std::size_t j = 0; j < s; ++j) {
    for (std::size_t i = 0; i <= j; ++i) {
      const std::size_t p = y.basis().position(half[i] + half[j] + shift);
      out[i + j * s] = p;
      out[j + i * s] = p;
    }
  }
  return out;
}

}  // namespace detail

/// M_r(y)(i, j) = y_{alpha_i + alpha_j} over the degree-r basis.
inline NumericMatrix moment_matrix(const MomentSequence& y, int r) {
  if (r < 0) throw ParameterError("relaxation order must be >= 0");
  detail::require_order(y, 2 * r, "moment matrix of order " + std::to_string(r));
  const MonomialBasis half(y.dimension(), r);
  const auto pos = detail::shifted_positions(y, half, MultiIndex(y.dimension()));
  const std::size_t s = half.size();
  NumericMatrix m(s, s);
  for (std::size_t j = 0; j < s; ++j) {
    for (std::size_t i = 0; i < s; ++i) m(i, j) = y.at(pos[i + j * s]);
  }
  return m;
}

/// M_r(P y)(i, j) = sum_gamma p_gamma y_{gamma + alpha_i + alpha_j}.
inline NumericMatrix localizing_matrix(const MomentSequence& y, const Polynomial& p, int r) {
  if (r < 0) throw ParameterError("relaxation order must be >= 0");
  if (p.dimension() != y.dimension()) {
    throw StructuralError("localizing polynomial dimension does not match moments");
  }
  const int deg = p.degree();
  detail::require_order(y, 2 * r + deg,
                        "localizing matrix of order " + std::to_string(r) +
                            " for a degree " + std::to_string(deg) + " polynomial");
  const MonomialBasis half(y.dimension(), r);
  const std::size_t s = half.size();
  NumericMatrix m = NumericMatrix::Zero(s, s);
  for (const auto& [gamma, c] : p.terms()) {
    for (std::size_t j = 0; j < s; ++j) {
      for (std::size_t i = 0; i <= j; ++i) {
        m(i, j) += c * y(half[i] + half[j] + gamma);
      }
    }
  }
  m.triangularView<Eigen::StrictlyLower>() = m.transpose();
  return m;
}

/// Modified moment matrix with row weights (n + |alpha_i| + |alpha_j|) /
/// (n + |alpha_i|), where |.| is the total degree of the basis monomial.  Not
/// symmetric in general.
inline NumericMatrix boundary_matrix(const MomentSequence& y, int r) {
  if (r < 0) throw ParameterError("relaxation order must be >= 0");
  detail::require_order(y, 2 * r, "boundary matrix of order " + std::to_string(r));
  const double n = static_cast<double>(y.dimension());
  const MonomialBasis half(y.dimension(), r);
  const std::size_t s = half.size();
  NumericMatrix m(s, s);
  for (std::size_t i = 0; i < s; ++i) {
    const double di = half[i].degree();
    for (std::size_t j = 0; j < s; ++j) {
      const double dj = half[j].degree();
      m(i, j) = (n + di + dj) / (n + di) * y(half[i] + half[j]);
    }
  }
  return m;
}

/// Matrix whose entries are affine in a list of named scalar variables:
/// constant + sum_v value_v * coefficient_v.
class AffineMatrix {
 public:
  AffineMatrix() = default;
  AffineMatrix(std::size_t rows, std::size_t cols)
      : constant_(NumericMatrix::Zero(rows, cols)) {}

  std::size_t rows() const noexcept { return constant_.rows(); }
  std::size_t cols() const noexcept { return constant_.cols(); }
  std::size_t variable_count() const noexcept { return names_.size(); }
  const std::vector<std::string>& variable_names() const noexcept { return names_; }

  const NumericMatrix& constant() const noexcept { return constant_; }
  NumericMatrix& constant() noexcept { return constant_; }
  const NumericMatrix& coefficient(std::size_t v) const { return coefficients_.at(v); }
  NumericMatrix& coefficient(std::size_t v) { return coefficients_.at(v); }

  /// Declares a variable with an all-zero coefficient grid; returns its slot.
  std::size_t add_variable(std::string name) {
    names_.push_back(std::move(name));
    coefficients_.push_back(NumericMatrix::Zero(rows(), cols()));
    return names_.size() - 1;
  }

  NumericMatrix evaluate(std::span<const double> values) const {
    if (values.size() != names_.size()) {
      throw StructuralError("affine matrix expects " + std::to_string(names_.size()) +
                            " variable values, got " + std::to_string(values.size()));
    }
    NumericMatrix out = constant_;
    for (std::size_t v = 0; v < names_.size(); ++v) {
      if (values[v] != 0.0) out += values[v] * coefficients_[v];
    }
    return out;
  }

  /// Exact symmetry of the constant and every coefficient grid.
  bool is_symmetric() const {
    if (rows() != cols()) return false;
    if (constant_ != constant_.transpose()) return false;
    for (const auto& c : coefficients_) {
      if (c != c.transpose()) return false;
    }
    return true;
  }

 private:
  NumericMatrix constant_;
  std::vector<NumericMatrix> coefficients_;
  std::vector<std::string> names_;
};

/// M_r((P_d - h) y) with the S_{n,d} coefficients of P_d as variables named
/// "p[alpha]" (basis order) and, when `with_shift`, a trailing variable "h".
/// Without the shift variable the shift is the constant 1.
inline AffineMatrix localizing_matrix_affine(const MomentSequence& y, int degree, int r,
                                             bool with_shift) {
  if (degree < 0) throw ParameterError("polynomial degree must be >= 0");
  if (r < 0) throw ParameterError("relaxation order must be >= 0");
  detail::require_order(y, 2 * r + degree,
                        "localizing constraint with d=" + std::to_string(degree) +
                            ", r=" + std::to_string(r) + " (requires moments up to order 2r+d)");
  const std::size_t n = y.dimension();
  const MonomialBasis half(n, r);
  const MonomialBasis coeffs(n, degree);
  const std::size_t s = half.size();
  AffineMatrix out(s, s);
  for (const auto& gamma : coeffs) {
    const std::size_t v = out.add_variable("p" + gamma.to_string());
    const auto pos = detail::shifted_positions(y, half, gamma);
    NumericMatrix& g = out.coefficient(v);
    for (std::size_t k = 0; k < s * s; ++k) g.data()[k] = y.at(pos[k]);
  }
  const NumericMatrix base = moment_matrix(y, r);
  if (with_shift) {
    const std::size_t h = out.add_variable("h");
    out.coefficient(h) = -base;
  } else {
    out.constant() = -base;
  }
  return out;
}

/// Smallest eigenvalue of the symmetric part of `m`.
inline double min_eigenvalue(const NumericMatrix& m) {
  if (m.rows() == 0) return 0.0;
  const NumericMatrix sym = 0.5 * (m + m.transpose());
  Eigen::SelfAdjointEigenSolver<NumericMatrix> es(sym, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

inline double max_abs_entry(const NumericMatrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

/// Plain CSV grid, one matrix row per line, full double precision.
inline void write_matrix_csv(std::ostream& out, const NumericMatrix& m) {
  const auto old = out.precision(17);
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
      if (j) out << ',';
      out << m(i, j);
    }
    out << '\n';
  }
  out.precision(old);
}

}  // namespace moment_support
