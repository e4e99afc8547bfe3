#pragma once

// Multi-indices and the graded monomial basis that orders every moment
// vector, moment matrix and coefficient vector in the library.

#include <algorithm>
#include <compare>
#include <cstddef>
#include <initializer_list>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "moment_support/errors.hpp"

namespace moment_support {

/// Exponent vector of a monomial x^alpha, stored densely (one entry per
/// variable).
class MultiIndex {
 public:
  MultiIndex() = default;

  /// The zero multi-index in `n` variables.
  explicit MultiIndex(std::size_t n) : exponents_(n, 0) {}

  MultiIndex(std::initializer_list<int> exponents)
      : MultiIndex(std::vector<int>(exponents)) {}

  explicit MultiIndex(std::vector<int> exponents)
      : exponents_(std::move(exponents)) {
    for (int e : exponents_) {
      if (e < 0) throw ParameterError("multi-index exponents must be >= 0");
    }
  }

  /// x_axis^power in `n` variables.
  static MultiIndex unit(std::size_t n, std::size_t axis, int power = 1) {
    if (axis >= n) throw StructuralError("unit multi-index axis out of range");
    MultiIndex out(n);
    out.exponents_[axis] = power;
    return out;
  }

  std::size_t size() const noexcept { return exponents_.size(); }
  int operator[](std::size_t i) const { return exponents_[i]; }
  std::span<const int> exponents() const noexcept { return exponents_; }

  /// Total degree |alpha|.
  int degree() const noexcept {
    int sum = 0;
    for (int e : exponents_) sum += e;
    return sum;
  }

  MultiIndex operator+(const MultiIndex& other) const {
    if (other.size() != size()) {
      throw StructuralError("multi-index dimension mismatch in addition");
    }
    MultiIndex out(*this);
    for (std::size_t i = 0; i < size(); ++i) out.exponents_[i] += other[i];
    return out;
  }

  /// True when every exponent of `other` is <= the matching exponent here.
  bool dominates(const MultiIndex& other) const {
    if (other.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i) {
      if (other[i] > exponents_[i]) return false;
    }
    return true;
  }

  friend bool operator==(const MultiIndex&, const MultiIndex&) = default;
  /// Plain lexicographic comparison; only used for associative lookups.
  friend auto operator<=>(const MultiIndex&, const MultiIndex&) = default;

  /// Text form "[e1,e2,...]".
  std::string to_string() const {
    std::string out = "[";
    for (std::size_t i = 0; i < size(); ++i) {
      if (i) out += ',';
      out += std::to_string(exponents_[i]);
    }
    out += ']';
    return out;
  }

  static MultiIndex parse(std::string_view text) {
    auto trim = [](std::string_view s) {
      while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
      while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
      return s;
    };
    text = trim(text);
    if (text.size() < 3 || text.front() != '[' || text.back() != ']') {
      throw ParameterError("malformed multi-index '" + std::string(text) + "'");
    }
    text = text.substr(1, text.size() - 2);
    std::vector<int> exps;
    while (true) {
      const auto comma = text.find(',');
      const auto field = trim(text.substr(0, comma));
      if (field.empty() ||
          !std::all_of(field.begin(), field.end(),
                       [](char c) { return c >= '0' && c <= '9'; })) {
        throw ParameterError("malformed multi-index field '" +
                             std::string(field) + "'");
      }
      exps.push_back(std::stoi(std::string(field)));
      if (comma == std::string_view::npos) break;
      text.remove_prefix(comma + 1);
    }
    return MultiIndex(std::move(exps));
  }

 private:
  std::vector<int> exponents_;
};

/// Strict weak order giving the position of a monomial in the basis: lower
/// total degree first, and within one degree the larger monomial under graded
/// reverse lexicographic order (x1 > x2 > ... > xn) first.  For two variables
/// this yields 1, x1, x2, x1^2, x1 x2, x2^2.
struct GradedOrder {
  bool operator()(const MultiIndex& a, const MultiIndex& b) const {
    const int da = a.degree();
    const int db = b.degree();
    if (da != db) return da < db;
    for (std::size_t i = a.size(); i-- > 0;) {
      if (a[i] != b[i]) return a[i] < b[i];
    }
    return false;
  }
};

/// Number of monomials of degree <= r in n variables, C(r + n, n).
inline std::size_t basis_size(std::size_t n, int r) {
  if (n < 1) throw ParameterError("basis dimension n must be >= 1");
  if (r < 0) throw ParameterError("basis degree r must be >= 0");
  // C(r+n, n) = prod_{k=1..m} (big + k) / k with m = min(n, r).  Every
  // partial product is a binomial coefficient, so each division is exact.
  const std::size_t rr = static_cast<std::size_t>(r);
  const std::size_t m = std::min(n, rr);
  const std::size_t big = std::max(n, rr);
  std::size_t result = 1;
  for (std::size_t k = 1; k <= m; ++k) {
    const unsigned __int128 wide =
        static_cast<unsigned __int128>(result) * (big + k) / k;
    if (wide > std::numeric_limits<std::size_t>::max()) {
      throw SizingError("basis_size(n=" + std::to_string(n) +
                        ", r=" + std::to_string(r) +
                        ") exceeds the platform integer range");
    }
    result = static_cast<std::size_t>(wide);
  }
  return result;
}

/// Ordered list of all multi-indices of degree <= r in n variables.
class MonomialBasis {
 public:
  MonomialBasis() = default;

  MonomialBasis(std::size_t n, int r) : n_(n), r_(r) {
    const std::size_t count = basis_size(n, r);
    entries_.reserve(count);
    for (int degree = 0; degree <= r; ++degree) {
      std::vector<MultiIndex> grade;
      std::vector<int> exps(n, 0);
      collect_grade(exps, 0, degree, grade);
      std::sort(grade.begin(), grade.end(), GradedOrder{});
      for (auto& m : grade) entries_.push_back(std::move(m));
    }
    for (std::size_t i = 0; i < entries_.size(); ++i) lookup_.emplace(entries_[i], i);
  }

  std::size_t dimension() const noexcept { return n_; }
  int max_degree() const noexcept { return r_; }
  std::size_t size() const noexcept { return entries_.size(); }
  const MultiIndex& operator[](std::size_t i) const { return entries_[i]; }
  const std::vector<MultiIndex>& entries() const noexcept { return entries_; }
  auto begin() const noexcept { return entries_.begin(); }
  auto end() const noexcept { return entries_.end(); }

  /// Position of `alpha`, or nullopt when its degree exceeds the basis degree.
  std::optional<std::size_t> index_of(const MultiIndex& alpha) const {
    if (alpha.size() != n_) {
      throw StructuralError("multi-index " + alpha.to_string() +
                            " has dimension " + std::to_string(alpha.size()) +
                            ", basis has " + std::to_string(n_));
    }
    auto it = lookup_.find(alpha);
    if (it == lookup_.end()) return std::nullopt;
    return it->second;
  }

  /// Like index_of but throws when absent.
  std::size_t position(const MultiIndex& alpha) const {
    auto p = index_of(alpha);
    if (!p) {
      throw OrderError("multi-index " + alpha.to_string() +
                           " exceeds basis degree " + std::to_string(r_),
                       alpha.degree(), r_);
    }
    return *p;
  }

 private:
  static void collect_grade(std::vector<int>& exps, std::size_t axis,
                            int remaining, std::vector<MultiIndex>& out) {
    if (axis + 1 == exps.size()) {
      exps[axis] = remaining;
      out.emplace_back(exps);
      return;
    }
    for (int e = remaining; e >= 0; --e) {
      exps[axis] = e;
      collect_grade(exps, axis + 1, remaining - e, out);
    }
    exps[axis] = 0;
  }

  std::size_t n_ = 0;
  int r_ = -1;
  std::vector<MultiIndex> entries_;
  std::map<MultiIndex, std::size_t> lookup_;
};

inline MonomialBasis enumerate_basis(std::size_t n, int r) {
  return MonomialBasis(n, r);
}

inline std::optional<std::size_t> index_of(const MonomialBasis& basis,
                                           const MultiIndex& alpha) {
  return basis.index_of(alpha);
}

}  // namespace moment_support
