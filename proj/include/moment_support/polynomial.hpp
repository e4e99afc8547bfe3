#pragma once

#include <cmath>
#include <cstddef>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "moment_support/basis.hpp"
#include "moment_support/errors.hpp"

namespace moment_support {

/// Real polynomial in n variables stored as a sparse coefficient map over the
/// monomial basis.  Terms iterate in basis order.
class Polynomial {
 public:
  using TermMap = std::map<MultiIndex, double, GradedOrder>;

  Polynomial() = default;
  explicit Polynomial(std::size_t n) : n_(n) {
    if (n < 1) throw ParameterError("polynomial dimension must be >= 1");
  }

  static Polynomial constant(std::size_t n, double value) {
    Polynomial p(n);
    p.add_term(MultiIndex(n), value);
    return p;
  }

  /// Polynomial with coefficient `coeffs[i]` on `basis[i]`.
  static Polynomial from_coefficients(const MonomialBasis& basis,
                                      std::span<const double> coeffs) {
    if (coeffs.size() != basis.size()) {
      throw StructuralError("coefficient vector has " +
                            std::to_string(coeffs.size()) +
                            " entries, basis has " +
                            std::to_string(basis.size()));
    }
    Polynomial p(basis.dimension());
    for (std::size_t i = 0; i < basis.size(); ++i) p.add_term(basis[i], coeffs[i]);
    return p;
  }

  std::size_t dimension() const noexcept { return n_; }
  const TermMap& terms() const noexcept { return terms_; }
  bool is_zero() const noexcept { return terms_.empty(); }

  /// Largest total degree with a nonzero coefficient; 0 for the zero
  /// polynomial.
  int degree() const noexcept {
    return terms_.empty() ? 0 : terms_.rbegin()->first.degree();
  }

  double coefficient(const MultiIndex& alpha) const {
    check_dimension(alpha);
    auto it = terms_.find(alpha);
    return it == terms_.end() ? 0.0 : it->second;
  }

  void set_coefficient(const MultiIndex& alpha, double value) {
    check_dimension(alpha);
    if (value == 0.0) {
      terms_.erase(alpha);
    } else {
      terms_[alpha] = value;
    }
  }

  void add_term(const MultiIndex& alpha, double value) {
    check_dimension(alpha);
    if (value == 0.0) return;
    auto [it, inserted] = terms_.try_emplace(alpha, value);
    if (!inserted) {
      it->second += value;
      if (it->second == 0.0) terms_.erase(it);
    }
  }

  /// Dense coefficient vector over `basis`; throws if a term lies outside it.
  std::vector<double> coefficients_in(const MonomialBasis& basis) const {
    if (basis.dimension() != n_) {
      throw StructuralError("basis dimension does not match polynomial");
    }
    std::vector<double> out(basis.size(), 0.0);
    for (const auto& [alpha, c] : terms_) out[basis.position(alpha)] = c;
    return out;
  }

  /// Evaluation by accumulating terms in degree order.
  double operator()(std::span<const double> x) const {
    if (x.size() != n_) {
      throw StructuralError("evaluation point has dimension " +
                            std::to_string(x.size()) + ", polynomial has " +
                            std::to_string(n_));
    }
    double sum = 0.0;
    for (const auto& [alpha, c] : terms_) {
      double mono = 1.0;
      for (std::size_t i = 0; i < n_; ++i) {
        for (int k = 0; k < alpha[i]; ++k) mono *= x[i];
      }
      sum += c * mono;
    }
    return sum;
  }

  Polynomial& operator+=(const Polynomial& other) {
    match(other);
    for (const auto& [alpha, c] : other.terms_) add_term(alpha, c);
    return *this;
  }
  Polynomial& operator-=(const Polynomial& other) {
    match(other);
    for (const auto& [alpha, c] : other.terms_) add_term(alpha, -c);
    return *this;
  }
  Polynomial& operator*=(double s) {
    if (s == 0.0) {
      terms_.clear();
      return *this;
    }
    for (auto& [alpha, c] : terms_) c *= s;
    return *this;
  }

  friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
  friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }
  friend Polynomial operator*(Polynomial a, double s) { return a *= s; }
  friend Polynomial operator*(double s, Polynomial a) { return a *= s; }

  friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
    a.match(b);
    Polynomial out(a.n_);
    for (const auto& [alpha, ca] : a.terms_) {
      for (const auto& [beta, cb] : b.terms_) out.add_term(alpha + beta, ca * cb);
    }
    return out;
  }

  /// Q(x) = P(scale .* x + shift), expanded over monomials.
  Polynomial compose_affine(std::span<const double> scale,
                            std::span<const double> shift) const {
    if (scale.size() != n_ || shift.size() != n_) {
      throw StructuralError("affine map dimension does not match polynomial");
    }
    Polynomial out(n_);
    for (const auto& [alpha, c] : terms_) {
      // Product over axes of (s x + t)^a = sum_b C(a,b) s^b t^(a-b) x^b.
      std::vector<std::pair<MultiIndex, double>> partial{{MultiIndex(n_), c}};
      for (std::size_t i = 0; i < n_; ++i) {
        std::vector<std::pair<MultiIndex, double>> next;
        const int a = alpha[i];
        double binom = 1.0;
        for (int b = 0; b <= a; ++b) {
          if (b > 0) binom = binom * (a - b + 1) / b;
          const double w =
              binom * std::pow(scale[i], b) * std::pow(shift[i], a - b);
          if (w == 0.0) continue;
          for (const auto& [m, v] : partial) {
            next.emplace_back(m + MultiIndex::unit(n_, i, b), v * w);
          }
        }
        partial = std::move(next);
      }
      for (const auto& [m, v] : partial) out.add_term(m, v);
    }
    return out;
  }

 private:
  void check_dimension(const MultiIndex& alpha) const {
    if (alpha.size() != n_) {
      throw StructuralError("multi-index " + alpha.to_string() +
                            " does not match polynomial dimension " +
                            std::to_string(n_));
    }
  }
  void match(const Polynomial& other) const {
    if (other.n_ != n_) throw StructuralError("polynomial dimension mismatch");
  }

  std::size_t n_ = 0;
  TermMap terms_;
};

}  // namespace moment_support
