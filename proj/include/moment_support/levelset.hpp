#pragma once

// Superlevel sets {P >= threshold} of recovered polynomials and their
// agreement with a known support.  Volumes are Lebesgue measure inside the
// bounding box B.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <iomanip>
#include <optional>
#include <ostream>
#include <random>
#include <span>
#include <string>
#include <thread>
#include <type_traits>
#include <variant>
#include <vector>

#include "moment_support/errors.hpp"
#include "moment_support/moments.hpp"
#include "moment_support/polynomial.hpp"

namespace moment_support {

inline double evaluate(const Polynomial& p, std::span<const double> x) { return p(x); }

inline constexpr int kDefaultResolution1d = 1001;
inline constexpr int kDefaultResolution2d = 201;
inline constexpr std::size_t kDefaultSamples = 1'000'000;
inline constexpr std::uint64_t kDefaultSeed = 42;

struct GridSpec {
  std::vector<Interval> box;
  int resolution = kDefaultResolution1d;

  void validate() const {
    if (box.empty()) throw ParameterError("grid box is empty");
    if (resolution < 2) throw ParameterError("grid resolution must be >= 2");
    for (const auto& iv : box) require_nondegenerate(iv, "grid axis");
  }

  /// k-th of `resolution` equispaced points; the last one is exactly upper.
  double coordinate(std::size_t axis, int k) const {
    const auto& iv = box[axis];
    if (k == resolution - 1) return iv.upper;
    return iv.lower + iv.width() * static_cast<double>(k) / (resolution - 1);
  }
};

/// Maximal intervals of `box` on which p >= threshold.  Sign changes found on
/// the grid are refined by bisection to 1e-10; features narrower than one
/// grid cell can be missed.
inline std::vector<Interval> extract_intervals_1d(const Polynomial& p, double threshold,
                                                  const Interval& box,
                                                  int resolution = kDefaultResolution1d) {
  if (p.dimension() != 1) throw StructuralError("interval extraction needs a univariate polynomial");
  const GridSpec grid{{box}, resolution};
  grid.validate();

  auto above = [&](double x) { return p(std::span<const double>(&x, 1)) >= threshold; };
  // Crossing in [lo, hi] where above(lo) != above(hi).
  auto refine = [&](double lo, double hi) {
    const bool lo_above = above(lo);
    while (hi - lo > 1e-10) {
      const double mid = 0.5 * (lo + hi);
      if (mid <= lo || mid >= hi) break;
      (above(mid) == lo_above ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
  };

  std::vector<Interval> out;
  double prev_x = grid.coordinate(0, 0);
  bool prev = above(prev_x);
  double start = box.lower;
  for (int k = 1; k < resolution; ++k) {
    const double x = grid.coordinate(0, k);
    const bool cur = above(x);
    if (cur && !prev) start = refine(prev_x, x);
    if (!cur && prev) out.push_back({start, refine(prev_x, x)});
    prev = cur;
    prev_x = x;
  }
  if (prev) out.push_back({start, box.upper});
  return out;
}

// ----------------------------------------------------------------------------
// Known supports

/// The support of a measure family as a union of disjoint axis-aligned boxes.
inline std::vector<std::vector<Interval>> support_boxes(const MeasureSpec& m) {
  return std::visit(
      [](const auto& f) -> std::vector<std::vector<Interval>> {
        using T = std::decay_t<decltype(f)>;
        if constexpr (std::is_same_v<T, UniformInterval>) {
          return {{f.support}};
        } else if constexpr (std::is_same_v<T, UniformBox>) {
          return {f.axes};
        } else if constexpr (std::is_same_v<T, UniformUnion>) {
          std::vector<std::vector<Interval>> out;
          for (const auto& iv : f.pieces) out.push_back({iv});
          return out;
        } else if constexpr (std::is_same_v<T, BetaDistribution>) {
          return {{Interval{0.0, 1.0}}};
        } else {
          throw UnsupportedError("the support of an empirical measure is not known analytically");
        }
      },
      m);
}

// ----------------------------------------------------------------------------
// Volume metrics

struct LevelSetReport {
  double threshold = 1.0;
  /// Volume of {P >= threshold} inside B.
  double covered_volume = 0.0;
  /// Volume of K_d \ K and K \ K_d inside B.
  double excess = 0.0;
  double deficit = 0.0;
  /// Standard errors; zero for exact interval arithmetic.
  double covered_se = 0.0;
  double excess_se = 0.0;
  double deficit_se = 0.0;
  std::vector<Interval> intervals;
  std::string method;
  std::size_t samples = 0;
  std::uint64_t seed = 0;
};

struct VolumeOptions {
  int resolution = kDefaultResolution1d;
  std::size_t samples = kDefaultSamples;
  std::uint64_t seed = kDefaultSeed;
  unsigned jobs = 1;
  /// Samples per pre-assigned random substream.
  std::size_t chunk = 1u << 16;
};

namespace detail {

inline double overlap(const Interval& a, const Interval& b) {
  return std::max(0.0, std::min(a.upper, b.upper) - std::max(a.lower, b.lower));
}

inline double clipped_length(const std::vector<Interval>& ivs, const Interval& box) {
  double s = 0.0;
  for (const auto& iv : ivs) s += overlap(iv, box);
  return s;
}

inline bool in_boxes(const std::vector<std::vector<Interval>>& boxes, std::span<const double> x) {
  for (const auto& b : boxes) {
    bool inside = true;
    for (std::size_t i = 0; i < x.size() && inside; ++i) inside = b[i].contains(x[i]);
    if (inside) return true;
  }
  return false;
}

// Uniform double in [0, 1) from the top 53 bits.
inline double unit_draw(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

}  // namespace detail

inline LevelSetReport volume_metrics(const Polynomial& p, double threshold, const MeasureSpec& truth,
                                     const std::vector<Interval>& box,
                                     const VolumeOptions& opt = {}) {
  const std::size_t n = p.dimension();
  if (box.size() != n || dimension(truth) != n) {
    throw StructuralError("polynomial, truth and box dimensions differ");
  }
  for (const auto& iv : box) require_nondegenerate(iv, "bounding box axis");
  const auto truth_boxes = support_boxes(truth);

  LevelSetReport rep;
  rep.threshold = threshold;
  if (n == 1) {
    rep.method = "exact-intervals";
    rep.intervals = extract_intervals_1d(p, threshold, box[0], opt.resolution);
    std::vector<Interval> k;
    for (const auto& b : truth_boxes) k.push_back(b[0]);
    double both = 0.0;
    for (const auto& a : rep.intervals) {
      for (const auto& b : k) {
        const Interval ab{std::max(a.lower, b.lower), std::min(a.upper, b.upper)};
        if (ab.upper > ab.lower) both += detail::overlap(ab, box[0]);
      }
    }
    rep.covered_volume = detail::clipped_length(rep.intervals, box[0]);
    rep.excess = std::max(0.0, rep.covered_volume - both);
    rep.deficit = std::max(0.0, detail::clipped_length(k, box[0]) - both);
    return rep;
  }

  if (opt.samples == 0 || opt.chunk == 0) throw ParameterError("Monte Carlo needs samples > 0");
  rep.method = "monte-carlo";
  rep.samples = opt.samples;
  rep.seed = opt.seed;
  const std::size_t chunks = (opt.samples + opt.chunk - 1) / opt.chunk;
  struct Counts {
    std::size_t covered = 0, excess = 0, deficit = 0;
  };
  std::vector<Counts> per_chunk(chunks);
  auto run_chunk = [&](std::size_t c) {
    std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                      static_cast<std::uint32_t>(c), static_cast<std::uint32_t>(c >> 32)};
    std::mt19937_64 rng(seq);
    const std::size_t begin = c * opt.chunk;
    const std::size_t end = std::min(opt.samples, begin + opt.chunk);
    std::vector<double> x(n);
    Counts& out = per_chunk[c];
    for (std::size_t s = begin; s < end; ++s) {
      for (std::size_t i = 0; i < n; ++i) x[i] = box[i].lower + box[i].width() * detail::unit_draw(rng);
      const bool in_kd = p(x) >= threshold;
      const bool in_k = detail::in_boxes(truth_boxes, x);
      out.covered += in_kd;
      out.excess += in_kd && !in_k;
      out.deficit += in_k && !in_kd;
    }
  };
  const unsigned jobs = std::max(1u, std::min<unsigned>(opt.jobs, static_cast<unsigned>(chunks)));
  if (jobs == 1) {
    for (std::size_t c = 0; c < chunks; ++c) run_chunk(c);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t c = w; c < chunks; c += jobs) run_chunk(c);
      });
    }
    for (auto& t : pool) t.join();
  }
  Counts total;
  for (const auto& c : per_chunk) {
    total.covered += c.covered;
    total.excess += c.excess;
    total.deficit += c.deficit;
  }
  double volume = 1.0;
  for (const auto& iv : box) volume *= iv.width();
  const double N = static_cast<double>(opt.samples);
  auto estimate = [&](std::size_t count, double& value, double& se) {
    const double f = static_cast<double>(count) / N;
    value = volume * f;
    se = volume * std::sqrt(f * (1.0 - f) / N);
  };
  estimate(total.covered, rep.covered_volume, rep.covered_se);
  estimate(total.excess, rep.excess, rep.excess_se);
  estimate(total.deficit, rep.deficit, rep.deficit_se);
  return rep;
}

// ----------------------------------------------------------------------------
// Grid export

struct GridTable {
  std::size_t dimension = 0;
  double threshold = 1.0;
  /// Each row: coordinates then P(x).
  std::vector<std::vector<double>> rows;
};

/// Rows in lexicographic order of grid indices (first axis slowest).
inline GridTable export_grid(const Polynomial& p, const GridSpec& grid, double threshold = 1.0) {
  grid.validate();
  const std::size_t n = grid.box.size();
  if (n > 2) throw UnsupportedError("grid export supports n <= 2");
  if (p.dimension() != n) throw StructuralError("grid and polynomial dimensions differ");
  GridTable t{n, threshold, {}};
  const int res = grid.resolution;
  std::vector<double> x(n);
  if (n == 1) {
    for (int i = 0; i < res; ++i) {
      x[0] = grid.coordinate(0, i);
      t.rows.push_back({x[0], p(x)});
    }
  } else {
    for (int i = 0; i < res; ++i) {
      for (int j = 0; j < res; ++j) {
        x[0] = grid.coordinate(0, i);
        x[1] = grid.coordinate(1, j);
        t.rows.push_back({x[0], x[1], p(x)});
      }
    }
  }
  return t;
}

/// CSV with header `x1[,x2],P,threshold`.
inline void write_grid_csv(std::ostream& out, const GridTable& t) {
  for (std::size_t i = 0; i < t.dimension; ++i) out << 'x' << (i + 1) << ',';
  out << "P,threshold\n";
  const auto old = out.precision(17);
  for (const auto& row : t.rows) {
    for (double v : row) out << v << ',';
    out << t.threshold << '\n';
  }
  out.precision(old);
}

}  // namespace moment_support
