#include <gtest/gtest.h>

#include <filesystem>

#include "moment_support/io.hpp"
#include "moment_support/run_config.hpp"

using namespace moment_support;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("moment_support_test_io_" + name);
  fs::remove_all(p);
  fs::create_directories(p);
  return p;
}

Json minimal_run() {
  return Json::parse(R"({
    "schema": "moment-support-run/1",
    "measure": {"family": "uniform_interval", "support": [-0.5, 0.5]},
    "bounding_box": [[-1, 1]]
  })");
}

}  // namespace

TEST(MomentFile, RoundTripIsExact) {
  const auto dir = scratch_dir("moments");
  for (const auto& y : {beta_moments(4, 4, 12), uniform_box_moments({{-0.5, 0.5}, {0, 1}}, 6),
                        lebesgue_box_moments({{-1, 1}}, 4)}) {
    write_moment_file(dir / "m.json", y);
    const auto z = read_moment_file(dir / "m.json");
    EXPECT_EQ(z.dimension(), y.dimension());
    EXPECT_EQ(z.max_order(), y.max_order());
    EXPECT_EQ(z.normalization(), y.normalization());
    EXPECT_EQ(z.values(), y.values());
  }
  const Json j = to_json(uniform_interval_moments(-0.5, 0.5, 8));
  EXPECT_EQ(j["moments"].size(), 9u);
  EXPECT_EQ(j["moments"]["[0]"], 1.0);
  EXPECT_EQ(to_json(lebesgue_box_moments({{-1, 1}}, 4))["moments"]["[0]"], 2.0);
}

TEST(MomentFile, RejectsIncompleteOrForeignRecords) {
  Json j = to_json(uniform_interval_moments(0, 1, 3));
  Json missing = j;
  missing["moments"].erase("[2]");
  EXPECT_THROW(moments_from_json(missing), ParameterError);
  Json extra = j;
  extra["moments"]["[4]"] = 0.2;
  EXPECT_THROW(moments_from_json(extra), ParameterError);
  Json wrong = j;
  wrong["format"] = "something-else/1";
  EXPECT_THROW(moments_from_json(wrong), ParameterError);
  EXPECT_THROW(read_moment_file("/nonexistent/path/m.json"), ParameterError);
}

TEST(MeasureJson, RoundTrip) {
  const std::vector<MeasureSpec> specs{
      UniformInterval{{-0.5, 0.5}}, UniformBox{{{-0.5, 0.5}, {0, 1}}},
      UniformUnion{{{-0.8, -0.4}, {0.3, 0.7}}}, BetaDistribution{4, 4},
      Empirical{{{0.1, 0.2}, {0.3, 0.4}}}};
  for (const auto& m : specs) {
    const auto back = measure_from_json(to_json(m));
    EXPECT_EQ(describe(back), describe(m));
    EXPECT_EQ(moments_of(back, 4).values(), moments_of(m, 4).values());
  }
  EXPECT_THROW(measure_from_json(Json::parse(R"({"family": "gaussian"})")), ParameterError);
}

TEST(EstimateJson, CoefficientsRoundTrip) {
  SupportEstimate est;
  const auto basis = enumerate_basis(2, 2);
  est.polynomial = Polynomial::from_coefficients(basis, std::vector<double>{1, 0.5, -2, 3, 0, 1e-12});
  est.status = SolverStatus::optimal;
  est.reliable = true;
  est.h_star = 1.1;
  const Json j = estimate_to_json(est, 2, Json::object(), "clarabel");
  EXPECT_EQ(j["format"], kEstimateFormat);
  EXPECT_EQ(j["status"], "optimal");
  EXPECT_EQ(j["coefficients"].size(), 6u);
  const auto back = estimate_from_json(Json::parse(j.dump()));
  EXPECT_EQ(back.h_star, 1.1);
  EXPECT_EQ(back.status, "optimal");
  for (const auto& alpha : basis) {
    EXPECT_EQ(back.polynomial.coefficient(alpha), est.polynomial.coefficient(alpha));
  }
}

TEST(MetricsJson, RoundsForStableComparison) {
  EXPECT_EQ(report_round(0.1234567891234), 0.123456789);
  EXPECT_EQ(report_round(-1e-12), 0.0);
  LevelSetReport rep;
  rep.method = "exact-intervals";
  rep.excess = 0.2 + 1e-13;
  rep.intervals = {{-0.6, 0.6}};
  const Json j = metrics_to_json(rep);
  EXPECT_EQ(j["excess"], 0.2);
  EXPECT_EQ(j["symmetric_difference"], 0.2);
  EXPECT_EQ(j["intervals"][0][1], 0.6);
  EXPECT_FALSE(j.contains("samples"));
}

TEST(RunConfig, DefaultsAndEcho) {
  const auto c = parse_run_config(minimal_run());
  EXPECT_EQ(c.variant, Variant::p5);
  EXPECT_EQ(c.omega_h, 1.2);
  EXPECT_EQ(c.delta_h, 0.2);
  EXPECT_EQ(c.omega_m, 10.0);
  EXPECT_EQ(c.threshold, 1.0);
  EXPECT_FALSE(c.relax_order.has_value());
  EXPECT_EQ(measure_order_for(c, 6), 12);
  EXPECT_EQ(default_resolution(c), kDefaultResolution1d);
  const auto again = parse_run_config(to_json(c));
  EXPECT_EQ(to_json(again).dump(), to_json(c).dump());
}

TEST(RunConfig, RelaxOrderAndOverrides) {
  Json j = minimal_run();
  j["relax_order"] = 4;
  j["degree"] = 6;
  j["variant"] = "p4";
  auto c = parse_run_config(j);
  EXPECT_EQ(c.variant, Variant::p4);
  EXPECT_EQ(measure_order_for(c, 6), 14);
  const auto r = reconstruction_config(c, 6);
  EXPECT_EQ(r.measure_moments.max_order(), 14);
  EXPECT_EQ(resolve_relax_order(r), 4);
  j["relax_order"] = "auto";
  j["max_moment_order"] = 20;
  c = parse_run_config(j);
  EXPECT_FALSE(c.relax_order.has_value());
  EXPECT_EQ(resolve_relax_order(reconstruction_config(c, 6)), 7);
}

TEST(RunConfig, Rejections) {
  Json j = minimal_run();
  j["omega"] = 1.0;
  EXPECT_THROW(parse_run_config(j), ParameterError);
  j = minimal_run();
  j["schema"] = "moment-support-run/0";
  EXPECT_THROW(parse_run_config(j), ParameterError);
  j = minimal_run();
  j.erase("measure");
  EXPECT_THROW(parse_run_config(j), ParameterError);
  j = minimal_run();
  j["moments_file"] = "m.json";
  EXPECT_THROW(parse_run_config(j), ParameterError);
  j = minimal_run();
  j["variant"] = "P7";
  EXPECT_THROW(parse_run_config(j), ParameterError);
  j = minimal_run();
  j["degree"] = "four";
  EXPECT_THROW(parse_run_config(j), ParameterError);
  j = minimal_run();
  j["grid_resolution"] = 1;
  EXPECT_THROW(parse_run_config(j), ParameterError);
}

TEST(RunConfig, MomentsFileResolvesRelativeToConfig) {
  const auto dir = scratch_dir("runcfg");
  write_moment_file(dir / "m.json", uniform_interval_moments(-0.5, 0.5, 8));
  Json j = minimal_run();
  j.erase("measure");
  j["moments_file"] = "m.json";
  write_json_file(dir / "run.json", j);
  const auto c = load_run_config(dir / "run.json");
  ASSERT_TRUE(c.moments_file.has_value());
  EXPECT_EQ(*c.moments_file, dir / "m.json");
  EXPECT_EQ(measure_moments_for(c, 4).max_order(), 8);
}

TEST(RunConfig, ShippedConfigsParse) {
  for (const auto& entry : fs::directory_iterator(fs::path(MS_SOURCE_DIR) / "configs")) {
    if (entry.path().extension() != ".json") continue;
    EXPECT_NO_THROW(load_run_config(entry.path())) << entry.path();
  }
}
