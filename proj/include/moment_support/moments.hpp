#pragma once

// Truncated moment sequences: closed forms for the uniform and Beta
// families, raw Lebesgue moments of a box, and sample averages.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "moment_support/basis.hpp"
#include "moment_support/errors.hpp"

namespace moment_support {

/// Highest moment order accepted by the generators.
inline constexpr int kMaxMomentOrder = 60;

enum class Normalization { probability, lebesgue };

inline std::string to_string(Normalization n) {
  return n == Normalization::probability ? "probability" : "lebesgue";
}

inline Normalization parse_normalization(const std::string& s) {
  if (s == "probability") return Normalization::probability;
  if (s == "lebesgue") return Normalization::lebesgue;
  throw ParameterError("unknown normalization '" + s + "'");
}

struct Interval {
  double lower = 0.0;
  double upper = 0.0;

  double width() const noexcept { return upper - lower; }
  bool contains(double x) const noexcept { return x >= lower && x <= upper; }
  friend bool operator==(const Interval&, const Interval&) = default;
};

inline void require_nondegenerate(const Interval& iv, const char* what) {
  if (!(iv.lower < iv.upper) || !std::isfinite(iv.lower) ||
      !std::isfinite(iv.upper)) {
    std::ostringstream msg;
    msg << what << ": interval [" << iv.lower << ", " << iv.upper
        << "] must satisfy lower < upper";
    throw ParameterError(msg.str());
  }
}

/// Moment values indexed by the graded basis of degree max_order.
class MomentSequence {
 public:
  MomentSequence() = default;

  MomentSequence(MonomialBasis basis, std::vector<double> values,
                 Normalization normalization, std::string provenance)
      : basis_(std::move(basis)),
        values_(std::move(values)),
        normalization_(normalization),
        provenance_(std::move(provenance)) {
    if (values_.size() != basis_.size()) {
      throw StructuralError("moment sequence has " +
                            std::to_string(values_.size()) +
                            " values, expected " +
                            std::to_string(basis_.size()));
    }
    for (double v : values_) {
      if (!std::isfinite(v)) throw ParameterError("moment values must be finite");
    }
  }

  std::size_t dimension() const noexcept { return basis_.dimension(); }
  int max_order() const noexcept { return basis_.max_degree(); }
  const MonomialBasis& basis() const noexcept { return basis_; }
  const std::vector<double>& values() const noexcept { return values_; }
  Normalization normalization() const noexcept { return normalization_; }
  const std::string& provenance() const noexcept { return provenance_; }

  double operator()(const MultiIndex& alpha) const {
    auto pos = basis_.index_of(alpha);
    if (!pos) {
      throw OrderError("moment " + alpha.to_string() + " requires order " +
                           std::to_string(alpha.degree()) + ", sequence has " +
                           std::to_string(max_order()),
                       alpha.degree(), max_order());
    }
    return values_[*pos];
  }
  double at(std::size_t position) const { return values_.at(position); }

  /// The same measure truncated to a lower order.
  MomentSequence truncated(int order) const {
    if (order > max_order()) {
      throw OrderError("cannot truncate order " + std::to_string(max_order()) +
                           " sequence to order " + std::to_string(order),
                       order, max_order());
    }
    MonomialBasis b(dimension(), order);
    std::vector<double> v(values_.begin(), values_.begin() + b.size());
    return MomentSequence(std::move(b), std::move(v), normalization_, provenance_);
  }

 private:
  MonomialBasis basis_;
  std::vector<double> values_;
  Normalization normalization_ = Normalization::probability;
  std::string provenance_;
};

// ----------------------------------------------------------------------------
// Measure families

struct UniformInterval {
  Interval support;
};
struct UniformBox {
  std::vector<Interval> axes;
};
struct UniformUnion {
  std::vector<Interval> pieces;
};
struct BetaDistribution {
  double shape_a = 1.0;
  double shape_b = 1.0;
};
struct Empirical {
  std::vector<std::vector<double>> samples;
};

using MeasureSpec =
    std::variant<UniformInterval, UniformBox, UniformUnion, BetaDistribution,
                 Empirical>;

inline std::size_t dimension(const MeasureSpec& m) {
  return std::visit(
      [](const auto& f) -> std::size_t {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, UniformBox>) {
          return f.axes.size();
        } else if constexpr (std::is_same_v<T, Empirical>) {
          return f.samples.empty() ? 0 : f.samples.front().size();
        } else {
          return 1;
        }
      },
      m);
}

inline std::string describe(const MeasureSpec& m) {
  std::ostringstream out;
  out.precision(17);
  auto iv = [&](const Interval& i) { out << "[" << i.lower << ", " << i.upper << "]"; };
  std::visit(
      [&](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, UniformInterval>) {
          out << "uniform-interval ";
          iv(f.support);
        } else if constexpr (std::is_same_v<T, UniformBox>) {
          out << "uniform-box ";
          for (std::size_t i = 0; i < f.axes.size(); ++i) {
            if (i) out << " x ";
            iv(f.axes[i]);
          }
        } else if constexpr (std::is_same_v<T, UniformUnion>) {
          out << "uniform-union ";
          for (std::size_t i = 0; i < f.pieces.size(); ++i) {
            if (i) out << " u ";
            iv(f.pieces[i]);
          }
        } else if constexpr (std::is_same_v<T, BetaDistribution>) {
          out << "beta(" << f.shape_a << ", " << f.shape_b << ")";
        } else {
          out << "empirical (" << f.samples.size() << " samples)";
        }
      },
      m);
  return out.str();
}

namespace detail {

inline void check_order(int max_order) {
  if (max_order < 0 || max_order > kMaxMomentOrder) {
    throw ParameterError("moment order " + std::to_string(max_order) +
                         " outside supported range [0, " +
                         std::to_string(kMaxMomentOrder) + "]");
  }
}

/// int_a^b x^k dx
inline double power_integral(const Interval& iv, int k) {
  return (std::pow(iv.upper, k + 1) - std::pow(iv.lower, k + 1)) / (k + 1);
}

inline MomentSequence product_moments(const std::vector<std::vector<double>>& axis_moments,
                                      int max_order, Normalization norm,
                                      std::string provenance) {
  MonomialBasis basis(axis_moments.size(), max_order);
  std::vector<double> values(basis.size());
  for (std::size_t p = 0; p < basis.size(); ++p) {
    double v = 1.0;
    for (std::size_t i = 0; i < axis_moments.size(); ++i) v *= axis_moments[i][basis[p][i]];
    values[p] = v;
  }
  return MomentSequence(std::move(basis), std::move(values), norm, std::move(provenance));
}

inline void validate_union(std::vector<Interval> pieces) {
  if (pieces.empty()) throw ParameterError("uniform union needs at least one interval");
  for (const auto& p : pieces) require_nondegenerate(p, "uniform union");
  std::sort(pieces.begin(), pieces.end(),
            [](const Interval& a, const Interval& b) { return a.lower < b.lower; });
  for (std::size_t i = 1; i < pieces.size(); ++i) {
    if (pieces[i].lower < pieces[i - 1].upper) {
      std::ostringstream msg;
      msg << "uniform union intervals overlap: [" << pieces[i - 1].lower << ", "
          << pieces[i - 1].upper << "] and [" << pieces[i].lower << ", "
          << pieces[i].upper << "]";
      throw ParameterError(msg.str());
    }
  }
}

}  // namespace detail

/// Moments of the uniform probability measure on [a, b]:
/// y_k = (b^{k+1} - a^{k+1}) / ((b - a)(k + 1)).
inline MomentSequence uniform_interval_moments(double a, double b, int max_order) {
  require_nondegenerate({a, b}, "uniform interval");
  detail::check_order(max_order);
  std::vector<double> y(max_order + 1);
  for (int k = 0; k <= max_order; ++k) {
    y[k] = detail::power_integral({a, b}, k) / (b - a);
  }
  y[0] = 1.0;
  return detail::product_moments({y}, max_order, Normalization::probability,
                                 describe(UniformInterval{{a, b}}));
}

/// Product of per-axis uniform moments.
inline MomentSequence uniform_box_moments(const std::vector<Interval>& bounds,
                                          int max_order) {
  if (bounds.empty()) throw ParameterError("uniform box needs at least one axis");
  detail::check_order(max_order);
  std::vector<std::vector<double>> axes;
  for (const auto& iv : bounds) {
    require_nondegenerate(iv, "uniform box axis");
    std::vector<double> y(max_order + 1);
    for (int k = 0; k <= max_order; ++k) y[k] = detail::power_integral(iv, k) / iv.width();
    y[0] = 1.0;
    axes.push_back(std::move(y));
  }
  return detail::product_moments(axes, max_order, Normalization::probability,
                                 describe(UniformBox{bounds}));
}

/// Beta(a, b) on [0, 1] via y_k = (a + k - 1) / (a + b + k - 1) * y_{k-1}.
inline MomentSequence beta_moments(double shape_a, double shape_b, int max_order) {
  if (!(shape_a > 0.0) || !(shape_b > 0.0)) {
    throw ParameterError("beta shape parameters must be positive");
  }
  detail::check_order(max_order);
  std::vector<double> y(max_order + 1);
  y[0] = 1.0;
  for (int k = 1; k <= max_order; ++k) {
    y[k] = (shape_a + k - 1) / (shape_a + shape_b + k - 1) * y[k - 1];
  }
  return detail::product_moments({y}, max_order, Normalization::probability,
                                 describe(BetaDistribution{shape_a, shape_b}));
}

/// Uniform probability measure on a union of disjoint intervals.
inline MomentSequence uniform_union_moments(const std::vector<Interval>& pieces,
                                            int max_order) {
  detail::validate_union(pieces);
  detail::check_order(max_order);
  double total = 0.0;
  for (const auto& p : pieces) total += p.width();
  std::vector<double> y(max_order + 1);
  for (int k = 0; k <= max_order; ++k) {
    double s = 0.0;
    for (const auto& p : pieces) s += detail::power_integral(p, k);
    y[k] = s / total;
  }
  y[0] = 1.0;
  return detail::product_moments({y}, max_order, Normalization::probability,
                                 describe(UniformUnion{pieces}));
}

/// Raw (unnormalized) Lebesgue moments of a box; y_0 is its volume.
inline MomentSequence lebesgue_box_moments(const std::vector<Interval>& bounds,
                                           int max_order) {
  if (bounds.empty()) throw ParameterError("box needs at least one axis");
  detail::check_order(max_order);
  std::vector<std::vector<double>> axes;
  std::ostringstream prov;
  prov.precision(17);
  prov << "lebesgue-box ";
  for (std::size_t i = 0; i < bounds.size(); ++i) {
    const auto& iv = bounds[i];
    require_nondegenerate(iv, "lebesgue box axis");
    if (i) prov << " x ";
    prov << "[" << iv.lower << ", " << iv.upper << "]";
    std::vector<double> y(max_order + 1);
    for (int k = 0; k <= max_order; ++k) y[k] = detail::power_integral(iv, k);
    axes.push_back(std::move(y));
  }
  return detail::product_moments(axes, max_order, Normalization::lebesgue, prov.str());
}

/// Sample averages y_alpha = (1/N) sum_k x_k^alpha.
inline MomentSequence empirical_moments(const std::vector<std::vector<double>>& samples,
                                        int max_order) {
  if (samples.empty()) throw ParameterError("empirical moments need at least one sample");
  detail::check_order(max_order);
  const std::size_t n = samples.front().size();
  if (n == 0) throw ParameterError("samples must have dimension >= 1");
  MonomialBasis basis(n, max_order);
  std::vector<double> sums(basis.size(), 0.0);
  std::vector<std::vector<double>> powers(n, std::vector<double>(max_order + 1));
  for (const auto& x : samples) {
    if (x.size() != n) throw StructuralError("samples have inconsistent dimension");
    for (std::size_t i = 0; i < n; ++i) {
      powers[i][0] = 1.0;
      for (int k = 1; k <= max_order; ++k) powers[i][k] = powers[i][k - 1] * x[i];
    }
    for (std::size_t p = 0; p < basis.size(); ++p) {
      double v = 1.0;
      for (std::size_t i = 0; i < n; ++i) v *= powers[i][basis[p][i]];
      sums[p] += v;
    }
  }
  for (double& s : sums) s /= static_cast<double>(samples.size());
  return MomentSequence(std::move(basis), std::move(sums), Normalization::probability,
                        describe(Empirical{samples}));
}

inline void validate(const MeasureSpec& m) {
  std::visit(
      [](const auto& f) {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, UniformInterval>) {
          require_nondegenerate(f.support, "uniform interval");
        } else if constexpr (std::is_same_v<T, UniformBox>) {
          if (f.axes.empty()) throw ParameterError("uniform box needs at least one axis");
          for (const auto& a : f.axes) require_nondegenerate(a, "uniform box axis");
        } else if constexpr (std::is_same_v<T, UniformUnion>) {
          detail::validate_union(f.pieces);
        } else if constexpr (std::is_same_v<T, BetaDistribution>) {
          if (!(f.shape_a > 0.0) || !(f.shape_b > 0.0)) {
            throw ParameterError("beta shape parameters must be positive");
          }
        } else {
          if (f.samples.empty()) throw ParameterError("empirical measure needs samples");
        }
      },
      m);
}

/// Moments of any supported family up to `max_order`.
inline MomentSequence moments_of(const MeasureSpec& m, int max_order) {
  return std::visit(
      [&](const auto& f) -> MomentSequence {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, UniformInterval>) {
          return uniform_interval_moments(f.support.lower, f.support.upper, max_order);
        } else if constexpr (std::is_same_v<T, UniformBox>) {
          return uniform_box_moments(f.axes, max_order);
        } else if constexpr (std::is_same_v<T, UniformUnion>) {
          return uniform_union_moments(f.pieces, max_order);
        } else if constexpr (std::is_same_v<T, BetaDistribution>) {
          return beta_moments(f.shape_a, f.shape_b, max_order);
        } else {
          return empirical_moments(f.samples, max_order);
        }
      },
      m);
}

/// Moments of the pushforward of the measure under u = scale .* x + shift,
/// obtained by binomial expansion of E[prod_i (s_i x_i + t_i)^{alpha_i}].
inline MomentSequence pushforward_affine(const MomentSequence& y,
                                         std::span<const double> scale,
                                         std::span<const double> shift) {
  const std::size_t n = y.dimension();
  if (scale.size() != n || shift.size() != n) {
    throw StructuralError("affine map dimension does not match moments");
  }
  const MonomialBasis& basis = y.basis();
  std::vector<double> out(basis.size(), 0.0);
  for (std::size_t p = 0; p < basis.size(); ++p) {
    const MultiIndex& alpha = basis[p];
    // Sum over beta <= alpha of prod_i C(a_i, b_i) s_i^b_i t_i^(a_i - b_i) y_beta.
    for (std::size_t q = 0; q <= p; ++q) {
      const MultiIndex& beta = basis[q];
      if (!alpha.dominates(beta)) continue;
      double w = 1.0;
      for (std::size_t i = 0; i < n && w != 0.0; ++i) {
        const int a = alpha[i];
        const int b = beta[i];
        double binom = 1.0;
        for (int k = 1; k <= b; ++k) binom = binom * (a - b + k) / k;
        w *= binom * std::pow(scale[i], b) * std::pow(shift[i], a - b);
      }
      out[p] += w * y.at(q);
    }
  }
  return MomentSequence(basis, std::move(out), y.normalization(),
                        y.provenance() + " (affine pushforward)");
}

}  // namespace moment_support
