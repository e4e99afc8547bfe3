#pragma once

// Putinar-type certificates P = s0 + sum_j s_j g_j with each s_j a sum of
// squares written as v_j' Q_j v_j over a half-degree monomial vector v_j.

#include <Eigen/Dense>
#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "moment_support/basis.hpp"
#include "moment_support/errors.hpp"
#include "moment_support/moments.hpp"
#include "moment_support/polynomial.hpp"

namespace moment_support {

/// Gram matrix layout for one SOS multiplier.  Block 0 is s0; block j >= 1
/// multiplies bounding polynomial g_j.
struct GramBlock {
  std::size_t multiplier_index = 0;
  int half_degree = 0;
  int certificate_degree = 0;
  MonomialBasis half_basis;

  std::size_t side() const noexcept { return half_basis.size(); }
  /// Independent entries of the symmetric Gram matrix (upper triangle).
  std::size_t free_entries() const noexcept { return side() * (side() + 1) / 2; }
};

/// One block per multiplier, sized so that deg(s_j g_j) <= degree.  Throws
/// DegreeError when some g_j has degree above `degree`; callers drop such
/// multipliers before asking for blocks.
inline std::vector<GramBlock> gram_blocks(std::size_t n, int degree,
                                          std::span<const Polynomial> bounding_polys) {
  if (degree < 0) throw ParameterError("certificate degree must be >= 0");
  std::vector<GramBlock> blocks;
  blocks.push_back({0, degree / 2, degree, MonomialBasis(n, degree / 2)});
  for (std::size_t j = 0; j < bounding_polys.size(); ++j) {
    const Polynomial& g = bounding_polys[j];
    if (g.dimension() != n) {
      throw StructuralError("bounding polynomial " + std::to_string(j + 1) +
                            " has the wrong dimension");
    }
    if (g.degree() > degree) {
      throw DegreeError("bounding polynomial " + std::to_string(j + 1) + " has degree " +
                        std::to_string(g.degree()) + " > certificate degree " +
                        std::to_string(degree));
    }
    const int half = (degree - g.degree()) / 2;
    blocks.push_back({j + 1, half, degree, MonomialBasis(n, half)});
  }
  return blocks;
}

/// Q_block[row, col] (row <= col) contributes weight * Q to one coefficient.
struct MatchTerm {
  std::size_t block = 0;
  std::size_t row = 0;
  std::size_t col = 0;
  double weight = 0.0;
};

/// For each monomial of degree <= d, the linear map from Gram entries to the
/// coefficient of s0 + sum_j s_j g_j.
struct CoefficientMatch {
  MonomialBasis basis;
  std::vector<std::vector<MatchTerm>> equations;

  /// The polynomial s0 + sum_j s_j g_j for numeric (symmetric) Grams.
  Polynomial polynomial(std::span<const Eigen::MatrixXd> grams) const {
    std::vector<double> coeffs(basis.size(), 0.0);
    for (std::size_t e = 0; e < equations.size(); ++e) {
      for (const auto& t : equations[e]) coeffs[e] += t.weight * grams[t.block](t.row, t.col);
    }
    return Polynomial::from_coefficients(basis, coeffs);
  }
};

inline CoefficientMatch match_constraints(std::span<const GramBlock> blocks,
                                          std::span<const Polynomial> bounding_polys) {
  if (blocks.empty()) throw StructuralError("certificate needs at least the s0 block");
  const std::size_t n = blocks.front().half_basis.dimension();
  const int degree = blocks.front().certificate_degree;
  CoefficientMatch match{MonomialBasis(n, degree), {}};
  match.equations.resize(match.basis.size());

  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const GramBlock& block = blocks[b];
    Polynomial multiplier = Polynomial::constant(n, 1.0);
    if (block.multiplier_index > 0) {
      if (block.multiplier_index > bounding_polys.size()) {
        throw StructuralError("Gram block refers to a missing bounding polynomial");
      }
      multiplier = bounding_polys[block.multiplier_index - 1];
    }
    const MonomialBasis& v = block.half_basis;
    for (std::size_t col = 0; col < v.size(); ++col) {
      for (std::size_t row = 0; row <= col; ++row) {
        const double sym = row == col ? 1.0 : 2.0;
        const MultiIndex base = v[row] + v[col];
        for (const auto& [gamma, c] : multiplier.terms()) {
          const std::size_t e = match.basis.position(base + gamma);
          match.equations[e].push_back({b, row, col, sym * c});
        }
      }
    }
  }
  return match;
}

/// Box bounding set encodings: one quadratic (b_i - x_i)(x_i - a_i) per axis,
/// or two affine faces x_i - a_i and b_i - x_i per axis.
enum class BoxEncoding { per_axis_quadratic, faces };

inline std::vector<Polynomial> box_polynomials(const std::vector<Interval>& box,
                                               BoxEncoding encoding) {
  const std::size_t n = box.size();
  std::vector<Polynomial> out;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& iv = box[i];
    require_nondegenerate(iv, "bounding box axis");
    const MultiIndex zero(n);
    const MultiIndex x = MultiIndex::unit(n, i, 1);
    if (encoding == BoxEncoding::per_axis_quadratic) {
      Polynomial g(n);
      g.add_term(zero, -iv.lower * iv.upper);
      g.add_term(x, iv.lower + iv.upper);
      g.add_term(MultiIndex::unit(n, i, 2), -1.0);
      out.push_back(std::move(g));
    } else {
      Polynomial lo(n);
      lo.add_term(zero, -iv.lower);
      lo.add_term(x, 1.0);
      Polynomial hi(n);
      hi.add_term(zero, iv.upper);
      hi.add_term(x, -1.0);
      out.push_back(std::move(lo));
      out.push_back(std::move(hi));
    }
  }
  return out;
}

/// Monomial vector v(x) over `basis`.
inline Eigen::VectorXd monomial_vector(const MonomialBasis& basis, std::span<const double> x) {
  Eigen::VectorXd v(basis.size());
  for (std::size_t k = 0; k < basis.size(); ++k) {
    double m = 1.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      for (int e = 0; e < basis[k][i]; ++e) m *= x[i];
    }
    v[k] = m;
  }
  return v;
}

/// s0(x) + sum_j s_j(x) g_j(x) evaluated directly from the Gram matrices.
inline double certify_value(std::span<const GramBlock> blocks,
                            std::span<const Eigen::MatrixXd> grams,
                            std::span<const Polynomial> bounding_polys,
                            std::span<const double> x) {
  if (grams.size() != blocks.size()) {
    throw StructuralError("expected one Gram matrix per block");
  }
  double total = 0.0;
  for (std::size_t b = 0; b < blocks.size(); ++b) {
    const GramBlock& block = blocks[b];
    if (x.size() != block.half_basis.dimension()) {
      throw StructuralError("evaluation point has dimension " + std::to_string(x.size()) +
                            ", certificate has " +
                            std::to_string(block.half_basis.dimension()));
    }
    const auto& q = grams[b];
    if (static_cast<std::size_t>(q.rows()) != block.side() ||
        static_cast<std::size_t>(q.cols()) != block.side()) {
      throw StructuralError("Gram matrix " + std::to_string(b) + " has the wrong size");
    }
    const Eigen::VectorXd v = monomial_vector(block.half_basis, x);
    double sigma = v.dot(q * v);
    if (block.multiplier_index > 0) sigma *= bounding_polys[block.multiplier_index - 1](x);
    total += sigma;
  }
  return total;
}

}  // namespace moment_support
