// moment_support: moments, reconstruct, sweep and eval-grid commands.

#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "moment_support/commands.hpp"
#include "moment_support/solver_registry.hpp"

using namespace moment_support;

namespace {

struct Overrides {
  std::optional<std::string> variant;
  std::optional<int> degree;
  std::optional<std::string> relax_order;
  std::optional<double> omega_h, delta_h, omega_m;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> jobs;
  std::optional<std::string> out;
  std::optional<std::size_t> samples;
  std::optional<int> resolution;
  std::optional<int> max_order;
  bool rescale = false;

  void attach(CLI::App* app) {
    app->add_option("--variant", variant, "P4, P5 or P6");
    app->add_option("--degree", degree, "polynomial degree d");
    app->add_option("--relax-order", relax_order, "localizing order r, or 'auto'");
    app->add_option("--omega-h", omega_h, "weight of the shift h");
    app->add_option("--delta-h", delta_h, "width of the shift box [1, 1+delta_h]");
    app->add_option("--omega-m", omega_m, "weight of the boundary norm (P6)");
    app->add_option("--max-order", max_order, "highest measure moment order used");
    app->add_option("--seed", seed, "Monte Carlo seed");
    app->add_option("--samples", samples, "Monte Carlo sample count");
    app->add_option("--resolution", resolution, "grid points per axis");
    app->add_option("--jobs", jobs, "parallel workers");
    app->add_option("--out", out, "output directory");
    app->add_flag("--rescale", rescale, "solve in coordinates mapping B onto [-1,1]^n");
  }

  void apply(RunConfig& c) const {
    if (variant) c.variant = parse_variant(*variant);
    if (degree) {
      if (*degree < 0) throw ParameterError("--degree must be >= 0");
      c.degree = *degree;
    }
    if (relax_order) {
      if (*relax_order == "auto") {
        c.relax_order.reset();
      } else {
        std::size_t used = 0;
        int r = -1;
        try {
          r = std::stoi(*relax_order, &used);
        } catch (const std::exception&) {
          used = 0;
        }
        if (used != relax_order->size() || r < 0) {
          throw ParameterError("--relax-order must be a non-negative integer or 'auto'");
        }
        c.relax_order = r;
      }
    }
    if (omega_h) c.omega_h = *omega_h;
    if (delta_h) c.delta_h = *delta_h;
    if (omega_m) c.omega_m = *omega_m;
    if (max_order) c.max_moment_order = *max_order;
    if (seed) c.seed = *seed;
    if (samples) {
      if (*samples == 0) throw ParameterError("--samples must be > 0");
      c.samples = *samples;
    }
    if (resolution) {
      if (*resolution < 2) throw ParameterError("--resolution must be >= 2");
      c.grid_resolution = *resolution;
    }
    if (jobs) c.jobs = std::max(1u, *jobs);
    if (out) c.output_dir = *out;
    if (rescale) c.rescale = true;
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Support reconstruction of a measure from its moments"};
  app.require_subcommand(1);

  std::string config_path;
  Overrides ov;
  std::optional<int> order;
  std::vector<int> degrees;
  std::string estimate_path;
  std::optional<int> grid_resolution;
  std::optional<double> grid_threshold;
  std::string grid_out = ".";

  auto* moments = app.add_subcommand("moments", "write measure and bounding-box moment files");
  moments->add_option("--config", config_path, "run config (JSON)")->required();
  moments->add_option("--order", order, "moment order (default from the config)");
  ov.attach(moments);

  auto* reconstruct = app.add_subcommand("reconstruct", "solve one relaxation");
  reconstruct->add_option("--config", config_path, "run config (JSON)")->required();
  ov.attach(reconstruct);

  auto* sweep = app.add_subcommand("sweep", "solve one relaxation per degree");
  sweep->add_option("--config", config_path, "run config (JSON)")->required();
  sweep->add_option("--degrees", degrees, "degrees to visit")->delimiter(',');
  ov.attach(sweep);

  auto* eval_grid = app.add_subcommand("eval-grid", "evaluate a stored estimate on a grid");
  eval_grid->add_option("--estimate", estimate_path, "estimate file")->required();
  eval_grid->add_option("--resolution", grid_resolution, "grid points per axis");
  eval_grid->add_option("--threshold", grid_threshold, "level recorded in the CSV");
  eval_grid->add_option("--out", grid_out, "output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitConfig;
  }

  return guarded(
      [&]() -> int {
        if (*eval_grid) {
          return cmd_eval_grid(estimate_path, grid_resolution, grid_threshold, grid_out, std::cerr);
        }
        RunConfig cfg = load_run_config(config_path);
        ov.apply(cfg);
        if (*moments) return cmd_moments(cfg, order, std::cerr);
        const auto solver = solver_from_environment();
        if (*sweep) {
          if (!degrees.empty()) cfg.degrees = degrees;
          return cmd_sweep(cfg, *solver, std::cerr);
        }
        return cmd_reconstruct(cfg, *solver, std::cerr);
      },
      std::cerr);
}
