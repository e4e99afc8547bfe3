#pragma once

// JSON file formats: moment files, measure descriptions, estimates and
// metrics reports.  Multi-indices are written as "[a1,...,an]" keys in basis
// order.

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <type_traits>
#include <variant>
#include <vector>

#include "json.hpp"
#include "moment_support/basis.hpp"
#include "moment_support/errors.hpp"
#include "moment_support/levelset.hpp"
#include "moment_support/moments.hpp"
#include "moment_support/polynomial.hpp"
#include "moment_support/reconstruct.hpp"

namespace moment_support {

using Json = nlohmann::ordered_json;

inline constexpr const char* kMomentFormat = "moment-support-moments/1";
inline constexpr const char* kEstimateFormat = "moment-support-estimate/1";
inline constexpr const char* kMetricsFormat = "moment-support-metrics/1";

inline Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open '" + path.string() + "'");
  try {
    return Json::parse(in);
  } catch (const Json::exception& e) {
    throw ParameterError("'" + path.string() + "' is not valid JSON: " + e.what());
  }
}

inline void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParameterError("cannot write '" + path.string() + "'");
  out << text;
}

inline void write_json_file(const std::filesystem::path& path, const Json& j) {
  write_text_file(path, j.dump(2) + "\n");
}

namespace detail {

template <class T>
T field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw ParameterError(where + ": missing field '" + key + "'");
  }
  try {
    return j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw ParameterError(where + ": field '" + key + "' has the wrong type");
  }
}

}  // namespace detail

// ----------------------------------------------------------------------------
// Intervals and measures

inline Json to_json(const Interval& iv) { return Json::array({iv.lower, iv.upper}); }

inline Interval interval_from_json(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number()) {
    throw ParameterError(where + ": expected an interval [lower, upper]");
  }
  return {j[0].get<double>(), j[1].get<double>()};
}

inline Json to_json(const std::vector<Interval>& ivs) {
  Json out = Json::array();
  for (const auto& iv : ivs) out.push_back(to_json(iv));
  return out;
}

inline std::vector<Interval> intervals_from_json(const Json& j, const std::string& where) {
  if (!j.is_array()) throw ParameterError(where + ": expected a list of intervals");
  std::vector<Interval> out;
  for (const auto& e : j) out.push_back(interval_from_json(e, where));
  return out;
}

inline Json to_json(const MeasureSpec& m) {
  return std::visit(
      [](const auto& f) -> Json {
        using T = std::decay_t<decltype(f)>;
        Json j;
        if constexpr (std::is_same_v<T, UniformInterval>) {
          j["family"] = "uniform_interval";
          j["support"] = to_json(f.support);
        } else if constexpr (std::is_same_v<T, UniformBox>) {
          j["family"] = "uniform_box";
          j["axes"] = to_json(f.axes);
        } else if constexpr (std::is_same_v<T, UniformUnion>) {
          j["family"] = "uniform_union";
          j["pieces"] = to_json(f.pieces);
        } else if constexpr (std::is_same_v<T, BetaDistribution>) {
          j["family"] = "beta";
          j["shape_a"] = f.shape_a;
          j["shape_b"] = f.shape_b;
        } else {
          j["family"] = "empirical";
          j["samples"] = f.samples;
        }
        return j;
      },
      m);
}

inline MeasureSpec measure_from_json(const Json& j) {
  const std::string where = "measure";
  const auto family = detail::field<std::string>(j, "family", where);
  MeasureSpec m;
  if (family == "uniform_interval") {
    m = UniformInterval{interval_from_json(j.value("support", Json()), where + ".support")};
  } else if (family == "uniform_box") {
    m = UniformBox{intervals_from_json(j.value("axes", Json()), where + ".axes")};
  } else if (family == "uniform_union") {
    m = UniformUnion{intervals_from_json(j.value("pieces", Json()), where + ".pieces")};
  } else if (family == "beta") {
    m = BetaDistribution{detail::field<double>(j, "shape_a", where),
                         detail::field<double>(j, "shape_b", where)};
  } else if (family == "empirical") {
    m = Empirical{detail::field<std::vector<std::vector<double>>>(j, "samples", where)};
  } else {
    throw ParameterError("unknown measure family '" + family + "'");
  }
  validate(m);
  return m;
}

// ----------------------------------------------------------------------------
// Moment files

inline Json to_json(const MomentSequence& y) {
  Json j;
  j["format"] = kMomentFormat;
  j["n"] = y.dimension();
  j["max_order"] = y.max_order();
  j["normalization"] = to_string(y.normalization());
  j["provenance"] = y.provenance();
  Json records = Json::object();
  for (std::size_t k = 0; k < y.basis().size(); ++k) {
    records[y.basis()[k].to_string()] = y.at(k);
  }
  j["moments"] = std::move(records);
  return j;
}

/// Every multi-index of the declared basis must appear exactly once.
inline MomentSequence moments_from_json(const Json& j) {
  const std::string where = "moment file";
  const auto format = detail::field<std::string>(j, "format", where);
  if (format != kMomentFormat) {
    throw ParameterError(where + ": unsupported format '" + format + "'");
  }
  const auto n = detail::field<long long>(j, "n", where);
  const auto order = detail::field<int>(j, "max_order", where);
  if (n < 1) throw ParameterError(where + ": n must be >= 1");
  if (order < 0) throw ParameterError(where + ": max_order must be >= 0");
  const auto norm = parse_normalization(detail::field<std::string>(j, "normalization", where));
  const auto provenance = j.value("provenance", std::string());
  if (!j.contains("moments") || !j["moments"].is_object()) {
    throw ParameterError(where + ": missing 'moments' object");
  }
  MonomialBasis basis(static_cast<std::size_t>(n), order);
  std::vector<double> values(basis.size(), 0.0);
  std::vector<bool> seen(basis.size(), false);
  for (const auto& [key, value] : j["moments"].items()) {
    const MultiIndex alpha = MultiIndex::parse(key);
    if (alpha.size() != static_cast<std::size_t>(n)) {
      throw ParameterError(where + ": record " + key + " has the wrong dimension");
    }
    const auto pos = basis.index_of(alpha);
    if (!pos) throw ParameterError(where + ": record " + key + " exceeds max_order");
    if (!value.is_number()) throw ParameterError(where + ": record " + key + " is not a number");
    values[*pos] = value.get<double>();
    seen[*pos] = true;
  }
  for (std::size_t k = 0; k < basis.size(); ++k) {
    if (!seen[k]) throw ParameterError(where + ": missing record " + basis[k].to_string());
  }
  return MomentSequence(std::move(basis), std::move(values), norm, provenance);
}

inline MomentSequence read_moment_file(const std::filesystem::path& path) {
  return moments_from_json(read_json_file(path));
}

inline void write_moment_file(const std::filesystem::path& path, const MomentSequence& y) {
  write_json_file(path, to_json(y));
}

// ----------------------------------------------------------------------------
// Estimates

inline Json coefficients_to_json(const Polynomial& p, const MonomialBasis& basis) {
  Json out = Json::object();
  for (const auto& alpha : basis) out[alpha.to_string()] = p.coefficient(alpha);
  return out;
}

inline Polynomial polynomial_from_json(const Json& coeffs, std::size_t n) {
  if (!coeffs.is_object()) throw ParameterError("coefficients must be an object");
  Polynomial p(n);
  for (const auto& [key, value] : coeffs.items()) {
    const MultiIndex alpha = MultiIndex::parse(key);
    if (alpha.size() != n) throw ParameterError("coefficient " + key + " has the wrong dimension");
    if (!value.is_number()) throw ParameterError("coefficient " + key + " is not a number");
    p.add_term(alpha, value.get<double>());
  }
  return p;
}

inline Json to_json(const BlockCheck& c) {
  return Json{{"label", c.label},
              {"min_eigenvalue", c.min_eigenvalue},
              {"scale", c.scale},
              {"passed", c.passed}};
}

inline Json to_json(const Diagnostics& d) {
  Json j;
  j["verified"] = d.verified;
  Json blocks = Json::array();
  for (const auto& b : d.blocks) blocks.push_back(to_json(b));
  j["psd_blocks"] = std::move(blocks);
  j["localizing_recheck"] = to_json(d.localizing_recheck);
  j["certificate_residual"] = d.certificate_residual;
  j["shift_within_bounds"] = d.shift_within_bounds;
  if (d.boundary_residual) j["boundary_residual"] = *d.boundary_residual;
  if (d.boundary_norm) j["boundary_norm"] = *d.boundary_norm;
  return j;
}

/// `config` is echoed verbatim.
inline Json estimate_to_json(const SupportEstimate& est, int degree, const Json& config,
                             const std::string& solver_name) {
  const std::size_t n = est.polynomial.dimension();
  Json j;
  j["format"] = kEstimateFormat;
  j["config"] = config;
  j["status"] = to_string(est.status);
  j["reliable"] = est.reliable;
  j["objective"] = est.objective_value;
  j["h_star"] = est.h_star;
  j["n"] = n;
  j["degree"] = degree;
  j["relax_order"] = est.relax_order;
  j["coefficients"] = coefficients_to_json(est.polynomial, MonomialBasis(n, degree));
  j["diagnostics"] = to_json(est.diagnostics);
  j["warnings"] = est.warnings;
  j["solver"] = Json{{"name", solver_name},
                     {"iterations", est.iterations},
                     {"seconds", est.solve_seconds},
                     {"message", est.solver_message}};
  return j;
}

struct LoadedEstimate {
  Polynomial polynomial;
  double h_star = 1.0;
  std::string status;
  Json config;
};

inline LoadedEstimate estimate_from_json(const Json& j) {
  const std::string where = "estimate file";
  const auto format = detail::field<std::string>(j, "format", where);
  if (format != kEstimateFormat) {
    throw ParameterError(where + ": unsupported format '" + format + "'");
  }
  const auto n = detail::field<long long>(j, "n", where);
  if (n < 1) throw ParameterError(where + ": n must be >= 1");
  LoadedEstimate out;
  out.polynomial = polynomial_from_json(j.value("coefficients", Json()), static_cast<std::size_t>(n));
  out.h_star = j.value("h_star", 1.0);
  out.status = j.value("status", std::string());
  out.config = j.value("config", Json::object());
  return out;
}

// ----------------------------------------------------------------------------
// Metrics

/// Rounds to 1e-9 so that reports compare byte for byte across runs.
inline double report_round(double v) {
  const double r = std::round(v * 1e9) / 1e9;
  return r == 0.0 ? 0.0 : r;
}

inline Json metrics_to_json(const LevelSetReport& rep) {
  Json j;
  j["format"] = kMetricsFormat;
  j["method"] = rep.method;
  j["threshold"] = report_round(rep.threshold);
  j["covered_volume"] = report_round(rep.covered_volume);
  j["excess"] = report_round(rep.excess);
  j["deficit"] = report_round(rep.deficit);
  j["symmetric_difference"] = report_round(rep.excess + rep.deficit);
  j["standard_error"] = Json{{"covered_volume", report_round(rep.covered_se)},
                             {"excess", report_round(rep.excess_se)},
                             {"deficit", report_round(rep.deficit_se)}};
  if (rep.method == "monte-carlo") {
    j["samples"] = rep.samples;
    j["seed"] = rep.seed;
  } else {
    Json ivs = Json::array();
    for (const auto& iv : rep.intervals) {
      ivs.push_back(Json::array({report_round(iv.lower), report_round(iv.upper)}));
    }
    j["intervals"] = std::move(ivs);
  }
  return j;
}

}  // namespace moment_support
