#pragma once

// Run configuration documents for the command-line tool.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "moment_support/io.hpp"
#include "moment_support/levelset.hpp"
#include "moment_support/reconstruct.hpp"

namespace moment_support {

inline constexpr const char* kRunSchema = "moment-support-run/1";

struct RunConfig {
  /// Exactly one of measure / moments_file provides the data.
  std::optional<MeasureSpec> measure;
  std::optional<std::filesystem::path> moments_file;
  std::vector<Interval> bounding_box;
  BoxEncoding box_encoding = BoxEncoding::per_axis_quadratic;
  Variant variant = Variant::p5;
  int degree = 4;
  /// Degrees visited by the sweep command; empty means {degree}.
  std::vector<int> degrees;
  /// Empty means "auto": the largest r with 2r + d <= max moment order.
  std::optional<int> relax_order;
  /// Empty: 2r + d when r is fixed, 2d otherwise.
  std::optional<int> max_moment_order;
  double omega_h = 1.2;
  double delta_h = 0.2;
  double omega_m = 10.0;
  ObjectiveScaling objective_scaling = ObjectiveScaling::probability;
  bool rescale = false;
  double threshold = 1.0;
  std::uint64_t seed = kDefaultSeed;
  std::size_t samples = kDefaultSamples;
  std::optional<int> grid_resolution;
  unsigned jobs = 1;
  std::optional<double> feasibility_tol;
  std::optional<double> gap_tol;
  std::optional<int> max_iterations;
  std::filesystem::path output_dir = "out";
};

namespace detail {

inline std::optional<int> optional_order(const Json& j, const char* key) {
  if (!j.contains(key) || j[key].is_null()) return std::nullopt;
  if (j[key].is_string() && j[key].get<std::string>() == "auto") return std::nullopt;
  if (!j[key].is_number_integer()) {
    throw ParameterError(std::string("run config: '") + key + "' must be an integer or \"auto\"");
  }
  return j[key].get<int>();
}

template <class T>
void maybe(const Json& j, const char* key, T& out) {
  if (j.contains(key) && !j[key].is_null()) out = field<T>(j, key, "run config");
}

template <class T>
void maybe(const Json& j, const char* key, std::optional<T>& out) {
  if (j.contains(key) && !j[key].is_null()) out = field<T>(j, key, "run config");
}

}  // namespace detail

inline BoxEncoding parse_box_encoding(const std::string& s) {
  if (s == "per_axis_quadratic") return BoxEncoding::per_axis_quadratic;
  if (s == "faces") return BoxEncoding::faces;
  throw ParameterError("unknown box encoding '" + s + "'");
}

inline std::string to_string(BoxEncoding e) {
  return e == BoxEncoding::faces ? "faces" : "per_axis_quadratic";
}

/// Relative paths inside the document resolve against `base_dir`, except
/// output_dir which stays relative to the working directory.
inline RunConfig parse_run_config(const Json& j, const std::filesystem::path& base_dir = {}) {
  if (!j.is_object()) throw ParameterError("run config must be a JSON object");
  const auto schema = detail::field<std::string>(j, "schema", "run config");
  if (schema != kRunSchema) {
    throw ParameterError("run config: unsupported schema '" + schema + "' (expected " +
                         kRunSchema + ")");
  }
  static const char* known[] = {"schema",        "description",     "measure",
                                "moments_file",  "bounding_box",    "box_encoding",
                                "variant",       "degree",          "degrees",
                                "relax_order",   "max_moment_order", "omega_h",
                                "delta_h",       "omega_m",         "objective_scaling",
                                "rescale",       "threshold",       "seed",
                                "samples",       "grid_resolution", "jobs",
                                "solver",        "output_dir"};
  for (const auto& [key, value] : j.items()) {
    if (std::find(std::begin(known), std::end(known), key) == std::end(known)) {
      throw ParameterError("run config: unknown field '" + key + "'");
    }
  }

  RunConfig c;
  if (j.contains("measure")) c.measure = measure_from_json(j["measure"]);
  if (j.contains("moments_file")) {
    std::filesystem::path p = detail::field<std::string>(j, "moments_file", "run config");
    c.moments_file = p.is_relative() ? base_dir / p : p;
  }
  if (c.measure && c.moments_file) {
    throw ParameterError("run config: give either 'measure' or 'moments_file', not both");
  }
  if (!c.measure && !c.moments_file) {
    throw ParameterError("run config: one of 'measure' or 'moments_file' is required");
  }
  c.bounding_box = intervals_from_json(j.value("bounding_box", Json()), "bounding_box");
  if (j.contains("box_encoding")) {
    c.box_encoding = parse_box_encoding(detail::field<std::string>(j, "box_encoding", "run config"));
  }
  if (j.contains("variant")) c.variant = parse_variant(detail::field<std::string>(j, "variant", "run config"));
  detail::maybe(j, "degree", c.degree);
  detail::maybe(j, "degrees", c.degrees);
  c.relax_order = detail::optional_order(j, "relax_order");
  c.max_moment_order = detail::optional_order(j, "max_moment_order");
  detail::maybe(j, "omega_h", c.omega_h);
  detail::maybe(j, "delta_h", c.delta_h);
  detail::maybe(j, "omega_m", c.omega_m);
  if (j.contains("objective_scaling")) {
    c.objective_scaling =
        parse_objective_scaling(detail::field<std::string>(j, "objective_scaling", "run config"));
  }
  detail::maybe(j, "rescale", c.rescale);
  detail::maybe(j, "threshold", c.threshold);
  detail::maybe(j, "seed", c.seed);
  detail::maybe(j, "samples", c.samples);
  detail::maybe(j, "grid_resolution", c.grid_resolution);
  detail::maybe(j, "jobs", c.jobs);
  if (j.contains("solver")) {
    const Json& s = j["solver"];
    if (!s.is_object()) throw ParameterError("run config: 'solver' must be an object");
    detail::maybe(s, "feasibility_tol", c.feasibility_tol);
    detail::maybe(s, "gap_tol", c.gap_tol);
    detail::maybe(s, "max_iterations", c.max_iterations);
  }
  if (j.contains("output_dir")) {
    c.output_dir = detail::field<std::string>(j, "output_dir", "run config");
  }

  if (c.degree < 0) throw ParameterError("run config: degree must be >= 0");
  for (int d : c.degrees) {
    if (d < 0) throw ParameterError("run config: degrees must be >= 0");
  }
  if (c.grid_resolution && *c.grid_resolution < 2) {
    throw ParameterError("run config: grid_resolution must be >= 2");
  }
  if (c.max_iterations && *c.max_iterations < 1) {
    throw ParameterError("run config: solver.max_iterations must be >= 1");
  }
  if (c.samples == 0) throw ParameterError("run config: samples must be > 0");
  if (c.jobs == 0) c.jobs = 1;
  return c;
}

inline RunConfig load_run_config(const std::filesystem::path& path) {
  return parse_run_config(read_json_file(path), path.parent_path());
}

/// The resolved configuration as it is echoed into estimate files.
inline Json to_json(const RunConfig& c) {
  Json j;
  j["schema"] = kRunSchema;
  if (c.measure) j["measure"] = to_json(*c.measure);
  if (c.moments_file) j["moments_file"] = c.moments_file->string();
  j["bounding_box"] = to_json(c.bounding_box);
  j["box_encoding"] = to_string(c.box_encoding);
  j["variant"] = to_string(c.variant);
  j["degree"] = c.degree;
  if (!c.degrees.empty()) j["degrees"] = c.degrees;
  j["relax_order"] = c.relax_order ? Json(*c.relax_order) : Json("auto");
  j["max_moment_order"] = c.max_moment_order ? Json(*c.max_moment_order) : Json("auto");
  j["omega_h"] = c.omega_h;
  j["delta_h"] = c.delta_h;
  j["omega_m"] = c.omega_m;
  j["objective_scaling"] = to_string(c.objective_scaling);
  j["rescale"] = c.rescale;
  j["threshold"] = c.threshold;
  j["seed"] = c.seed;
  j["samples"] = c.samples;
  if (c.grid_resolution) j["grid_resolution"] = *c.grid_resolution;
  Json solver = Json::object();
  if (c.feasibility_tol) solver["feasibility_tol"] = *c.feasibility_tol;
  if (c.gap_tol) solver["gap_tol"] = *c.gap_tol;
  if (c.max_iterations) solver["max_iterations"] = *c.max_iterations;
  if (!solver.empty()) j["solver"] = solver;
  j["output_dir"] = c.output_dir.generic_string();
  return j;
}

inline int measure_order_for(const RunConfig& c, int degree) {
  if (c.max_moment_order) return *c.max_moment_order;
  if (c.relax_order) return 2 * *c.relax_order + degree;
  return 2 * degree;
}

inline std::size_t run_dimension(const RunConfig& c) { return c.bounding_box.size(); }

inline int default_resolution(const RunConfig& c) {
  if (c.grid_resolution) return *c.grid_resolution;
  return run_dimension(c) == 1 ? kDefaultResolution1d : kDefaultResolution2d;
}

inline MomentSequence measure_moments_for(const RunConfig& c, int degree) {
  if (c.moments_file) {
    MomentSequence y = read_moment_file(*c.moments_file);
    if (c.max_moment_order && *c.max_moment_order < y.max_order()) {
      return y.truncated(*c.max_moment_order);
    }
    return y;
  }
  return moments_of(*c.measure, measure_order_for(c, degree));
}

inline ReconstructionConfig reconstruction_config(const RunConfig& c, int degree) {
  ReconstructionConfig r;
  r.variant = c.variant;
  r.degree = degree;
  r.relax_order = c.relax_order;
  r.omega_h = c.omega_h;
  r.delta_h = c.delta_h;
  r.omega_m = c.omega_m;
  r.bounding_box = c.bounding_box;
  r.box_encoding = c.box_encoding;
  r.objective_scaling = c.objective_scaling;
  r.measure_moments = measure_moments_for(c, degree);
  if (r.measure_moments.dimension() != c.bounding_box.size()) {
    throw StructuralError("measure has dimension " +
                          std::to_string(r.measure_moments.dimension()) +
                          " but the bounding box has " +
                          std::to_string(c.bounding_box.size()) + " axes");
  }
  for (const auto& iv : c.bounding_box) require_nondegenerate(iv, "bounding box axis");
  r.objective_moments = lebesgue_box_moments(c.bounding_box, degree);
  return r;
}

inline SolverOptions solver_options(const RunConfig& c, int degree) {
  SolverOptions o = default_solver_options(degree);
  if (c.feasibility_tol) o.feasibility_tol = *c.feasibility_tol;
  if (c.gap_tol) o.gap_tol = *c.gap_tol;
  if (c.max_iterations) o.max_iterations = static_cast<unsigned>(*c.max_iterations);
  return o;
}

inline VolumeOptions volume_options(const RunConfig& c) {
  VolumeOptions v;
  v.resolution = default_resolution(c);
  v.samples = c.samples;
  v.seed = c.seed;
  v.jobs = c.jobs;
  return v;
}

}  // namespace moment_support
