#pragma once

// Command implementations behind the moment_support executable.  Each
// command returns a process exit code:
//   0  solved (optimal or near-optimal) / files written
//   2  invalid configuration or insufficient moment order
//   3  solver failure (status infeasible, unbounded or numerical-failure)

#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "moment_support/io.hpp"
#include "moment_support/levelset.hpp"
#include "moment_support/reconstruct.hpp"
#include "moment_support/run_config.hpp"
#include "moment_support/solver.hpp"

namespace moment_support {

inline constexpr int kExitOk = 0;
inline constexpr int kExitInternal = 1;
inline constexpr int kExitConfig = 2;
inline constexpr int kExitSolver = 3;

/// Runs `body`, mapping library errors to exit codes and printing them.
template <class F>
int guarded(F&& body, std::ostream& err) {
  try {
    return body();
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::filesystem::filesystem_error& e) {
    err << "error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

inline void warn_conditioning(const RunConfig& c, std::ostream& log) {
  if (c.rescale) return;
  for (const auto& iv : c.bounding_box) {
    if (iv.lower < -1.0 || iv.upper > 1.0) {
      log << "warning: bounding box is not inside [-1,1]^n; monomial moment matrices are "
             "poorly conditioned there (consider --rescale)\n";
      return;
    }
  }
}

struct PointResult {
  int degree = 0;
  std::optional<SupportEstimate> estimate;
  std::optional<LevelSetReport> metrics;
  std::string error;
};

/// Metrics need the true support; they are skipped for moment files and
/// empirical measures.
inline std::optional<LevelSetReport> metrics_for(const RunConfig& c, const Polynomial& p,
                                                 VolumeOptions opt) {
  if (!c.measure || std::holds_alternative<Empirical>(*c.measure)) return std::nullopt;
  return volume_metrics(p, c.threshold, *c.measure, c.bounding_box, opt);
}

inline SupportEstimate solve_point(const RunConfig& c, int degree, const SolverAdapter& solver) {
  const ReconstructionConfig rc = reconstruction_config(c, degree);
  const SolverOptions opt = solver_options(c, degree);
  return c.rescale ? reconstruct_rescaled(rc, solver, opt) : reconstruct(rc, solver, opt);
}

inline void write_estimate(const std::filesystem::path& dir, const RunConfig& c, int degree,
                           const SupportEstimate& est, const SolverAdapter& solver) {
  RunConfig echo = c;
  echo.degree = degree;
  write_json_file(dir / "estimate.json", estimate_to_json(est, degree, to_json(echo), solver.name()));
}

inline void write_grid(const std::filesystem::path& path, const Polynomial& p,
                       const RunConfig& c) {
  std::ostringstream csv;
  write_grid_csv(csv, export_grid(p, GridSpec{c.bounding_box, default_resolution(c)}, c.threshold));
  write_text_file(path, csv.str());
}

// ----------------------------------------------------------------------------

/// Writes the measure's moments and the Lebesgue moments of B.
inline int cmd_moments(const RunConfig& c, std::optional<int> order, std::ostream& log) {
  if (!c.measure) throw ParameterError("the moments command needs an analytic 'measure'");
  const int k = order ? *order : measure_order_for(c, c.degree);
  const MomentSequence y = moments_of(*c.measure, k);
  write_moment_file(c.output_dir / "moments.json", y);
  log << "wrote " << (c.output_dir / "moments.json").string() << " (" << y.basis().size()
      << " records)\n";
  if (!c.bounding_box.empty()) {
    const MomentSequence yb = lebesgue_box_moments(c.bounding_box, k);
    write_moment_file(c.output_dir / "box_moments.json", yb);
    log << "wrote " << (c.output_dir / "box_moments.json").string() << '\n';
  }
  return kExitOk;
}

inline int cmd_reconstruct(const RunConfig& c, const SolverAdapter& solver, std::ostream& log) {
  warn_conditioning(c, log);
  const SupportEstimate est = solve_point(c, c.degree, solver);
  for (const auto& w : est.warnings) log << "warning: " << w << '\n';
  write_estimate(c.output_dir, c, c.degree, est, solver);
  log << "variant=" << to_string(c.variant) << " d=" << c.degree << " r=" << est.relax_order
      << " status=" << to_string(est.status) << " objective=" << est.objective_value
      << " h*=" << est.h_star << " verified=" << (est.diagnostics.verified ? "yes" : "no") << '\n';
  if (!est.reliable) {
    log << "solver failure: " << est.solver_message << '\n';
    return kExitSolver;
  }
  if (run_dimension(c) <= 2) write_grid(c.output_dir / "grid.csv", est.polynomial, c);
  if (auto rep = metrics_for(c, est.polynomial, volume_options(c))) {
    write_json_file(c.output_dir / "metrics.json", metrics_to_json(*rep));
    log << "excess=" << rep->excess << " deficit=" << rep->deficit << '\n';
  }
  return kExitOk;
}

namespace detail {

inline std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch == '\n' ? ' ' : ch;
  }
  return out + '"';
}

}  // namespace detail

/// One reconstruction per degree; failures are recorded per row and the
/// sweep continues.  Points run concurrently on up to `jobs` threads.
inline std::vector<PointResult> sweep_points(const RunConfig& c, const SolverAdapter& solver) {
  const std::vector<int> degrees = c.degrees.empty() ? std::vector<int>{c.degree} : c.degrees;
  std::vector<PointResult> rows(degrees.size());
  VolumeOptions vopt = volume_options(c);
  const unsigned jobs = std::max(1u, std::min<unsigned>(c.jobs, static_cast<unsigned>(rows.size())));
  if (jobs > 1) vopt.jobs = 1;
  auto work = [&](std::size_t k) {
    PointResult& row = rows[k];
    row.degree = degrees[k];
    try {
      row.estimate = solve_point(c, row.degree, solver);
      if (row.estimate->reliable) row.metrics = metrics_for(c, row.estimate->polynomial, vopt);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
  };
  if (jobs == 1) {
    for (std::size_t k = 0; k < rows.size(); ++k) work(k);
  } else {
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t k = w; k < rows.size(); k += jobs) work(k);
      });
    }
    for (auto& t : pool) t.join();
  }
  return rows;
}

inline std::string sweep_csv(const std::vector<PointResult>& rows) {
  std::ostringstream out;
  out << std::setprecision(12);
  out << "d,objective,excess,deficit,status,h_star,relax_order,message\n";
  for (const auto& row : rows) {
    out << row.degree << ',';
    if (!row.estimate) {
      out << ",,,error,,," << detail::csv_quote(row.error) << '\n';
      continue;
    }
    const auto& est = *row.estimate;
    out << report_round(est.objective_value) << ',';
    if (row.metrics) {
      out << report_round(row.metrics->excess) << ',' << report_round(row.metrics->deficit) << ',';
    } else {
      out << ",,";
    }
    out << to_string(est.status) << ',' << report_round(est.h_star) << ',' << est.relax_order << ','
        << detail::csv_quote(est.reliable ? "" : est.solver_message) << '\n';
  }
  return out.str();
}

inline int cmd_sweep(const RunConfig& c, const SolverAdapter& solver, std::ostream& log) {
  warn_conditioning(c, log);
  const auto rows = sweep_points(c, solver);
  for (const auto& row : rows) {
    const auto dir = c.output_dir / ("d" + std::to_string(row.degree));
    if (row.estimate) {
      write_estimate(dir, c, row.degree, *row.estimate, solver);
      if (row.metrics) write_json_file(dir / "metrics.json", metrics_to_json(*row.metrics));
      log << "d=" << row.degree << " status=" << to_string(row.estimate->status) << '\n';
    } else {
      log << "d=" << row.degree << " error: " << row.error << '\n';
    }
  }
  write_text_file(c.output_dir / "summary.csv", sweep_csv(rows));
  log << "wrote " << (c.output_dir / "summary.csv").string() << '\n';
  return kExitOk;
}

/// Re-evaluates a stored estimate on a grid over its bounding box.
inline int cmd_eval_grid(const std::filesystem::path& estimate_path, std::optional<int> resolution,
                         std::optional<double> threshold, const std::filesystem::path& out_dir,
                         std::ostream& log) {
  const LoadedEstimate est = estimate_from_json(read_json_file(estimate_path));
  const auto box = intervals_from_json(est.config.value("bounding_box", Json()), "bounding_box");
  const std::size_t n = est.polynomial.dimension();
  if (box.size() != n) throw StructuralError("estimate bounding box does not match the polynomial");
  int res = n == 1 ? kDefaultResolution1d : kDefaultResolution2d;
  if (est.config.contains("grid_resolution")) res = est.config["grid_resolution"].get<int>();
  if (resolution) res = *resolution;
  const double thr = threshold ? *threshold : est.config.value("threshold", 1.0);
  std::ostringstream csv;
  write_grid_csv(csv, export_grid(est.polynomial, GridSpec{box, res}, thr));
  write_text_file(out_dir / "grid.csv", csv.str());
  log << "wrote " << (out_dir / "grid.csv").string() << '\n';
  return kExitOk;
}

}  // namespace moment_support
