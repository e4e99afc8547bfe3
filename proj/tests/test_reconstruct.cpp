#include <gtest/gtest.h>

#include <cmath>
#include <string>

#include "moment_support/clarabel_adapter.hpp"
#include "moment_support/levelset.hpp"
#include "moment_support/reconstruct.hpp"

using namespace moment_support;

namespace {

const ClarabelAdapter& solver() {
  static const ClarabelAdapter s;
  return s;
}

ReconstructionConfig config(const MeasureSpec& m, std::vector<Interval> box, Variant v, int d,
                            int order, std::optional<int> r = std::nullopt) {
  ReconstructionConfig c;
  c.variant = v;
  c.degree = d;
  c.relax_order = r;
  c.bounding_box = std::move(box);
  c.measure_moments = moments_of(m, order);
  c.objective_moments = lebesgue_box_moments(c.bounding_box, d);
  return c;
}

double at(const Polynomial& p, double x) { return p(std::span<const double>(&x, 1)); }

bool has_warning(const std::vector<std::string>& w, const std::string& needle) {
  for (const auto& s : w) {
    if (s.find(needle) != std::string::npos) return true;
  }
  return false;
}

const MeasureSpec kCentered = UniformInterval{{-0.5, 0.5}};
const std::vector<Interval> kUnit{{-1, 1}};

}  // namespace

TEST(Assemble, P4SizesForUnivariateQuartic) {
  const auto c = config(kCentered, kUnit, Variant::p4, 4, 8, 2);
  const auto L = assemble(c);
  EXPECT_EQ(L.coefficient_vars.size(), 5u);
  ASSERT_EQ(L.blocks.size(), 2u);
  EXPECT_EQ(L.blocks[0].side(), 3u);
  EXPECT_EQ(L.blocks[1].side(), 2u);
  EXPECT_EQ(L.program.equalities().size(), 5u);
  EXPECT_EQ(L.program.psd_constraints().size(), 3u);
  EXPECT_EQ(L.program.variable_count(), 5u + 6u + 3u);
  EXPECT_FALSE(L.shift_var.has_value());
  EXPECT_FALSE(L.epigraph_var.has_value());
  // Localizing matrix M_2((P - 1) y) is 3x3.
  EXPECT_EQ(L.program.psd_constraints()[L.localizing_constraint].matrix.rows(), 3u);
  EXPECT_EQ(L.relax_order, 2);
}

TEST(Assemble, VariantsAddShiftAndEpigraph) {
  const auto p5 = assemble(config(kCentered, kUnit, Variant::p5, 4, 8));
  ASSERT_TRUE(p5.shift_var.has_value());
  EXPECT_EQ(p5.program.cost()[*p5.shift_var], -1.2);
  ASSERT_EQ(p5.program.boxes().size(), 1u);
  EXPECT_EQ(p5.program.boxes()[0].lower, 1.0);
  EXPECT_NEAR(p5.program.boxes()[0].upper, 1.2, 1e-15);
  const auto p6 = assemble(config(kCentered, kUnit, Variant::p6, 4, 8));
  ASSERT_TRUE(p6.epigraph_var.has_value());
  EXPECT_EQ(p6.program.cost()[*p6.epigraph_var], 10.0);
  ASSERT_EQ(p6.program.second_order_cones().size(), 1u);
  EXPECT_THROW(assemble_p4(config(kCentered, kUnit, Variant::p5, 4, 8)), ParameterError);
}

TEST(Assemble, DropsMultipliersAboveDegree) {
  const auto L = assemble(config(kCentered, kUnit, Variant::p4, 1, 3));
  EXPECT_TRUE(L.multipliers.empty());
  EXPECT_TRUE(has_warning(L.warnings, "degree"));
}

TEST(Validate, OrderAndParameterErrors) {
  auto c = config(kCentered, kUnit, Variant::p5, 4, 10, 4);
  try {
    validate(c);
    FAIL() << "expected OrderError";
  } catch (const OrderError& e) {
    EXPECT_NE(std::string(e.what()).find("requires moments up to order 2r+d = 12"), std::string::npos);
    EXPECT_EQ(e.required_order(), 12);
  }
  c = config(kCentered, kUnit, Variant::p6, 4, 6);
  EXPECT_THROW(validate(c), OrderError);
  c = config(kCentered, kUnit, Variant::p5, 4, 8);
  c.omega_h = 0.0;
  EXPECT_THROW(validate(c), ParameterError);
  c = config(kCentered, kUnit, Variant::p5, 4, 8);
  c.delta_h = -0.1;
  EXPECT_THROW(validate(c), ParameterError);
  c = config(kCentered, kUnit, Variant::p6, 4, 8);
  c.omega_m = -1.0;
  EXPECT_THROW(validate(c), ParameterError);
  c = config(kCentered, kUnit, Variant::p4, 4, 8);
  c.bounding_box = {{-1, 1}, {-1, 1}};
  EXPECT_THROW(validate(c), StructuralError);
  c = config(kCentered, kUnit, Variant::p4, 4, 8);
  c.relax_order = -1;
  EXPECT_THROW(validate(c), ParameterError);
  c = config(kCentered, kUnit, Variant::p4, 0, 2);
  c.bounding_box = {{1, 1}};
  EXPECT_THROW(validate(c), ParameterError);
}

TEST(Reconstruct, ConstantDegreeZero) {
  auto c = config(kCentered, kUnit, Variant::p4, 0, 0, 0);
  const auto est = reconstruct(c, solver());
  ASSERT_TRUE(est.diagnostics.verified);
  EXPECT_NEAR(est.polynomial.coefficient(MultiIndex{0}), 1.0, 1e-7);
  EXPECT_NEAR(est.objective_value, 1.0, 1e-7);
  c.objective_scaling = ObjectiveScaling::lebesgue;
  EXPECT_NEAR(reconstruct(c, solver()).objective_value, 2.0, 1e-7);
}

TEST(Reconstruct, PointMassIsCovered) {
  const MeasureSpec dirac = Empirical{{{0.2}}};
  for (Variant v : {Variant::p4, Variant::p5}) {
    const auto est = reconstruct(config(dirac, kUnit, v, 2, 4, 1), solver());
    ASSERT_TRUE(est.reliable) << to_string(v);
    EXPECT_GE(at(est.polynomial, 0.2), 1.0 - 1e-6) << to_string(v);
  }
}

TEST(Reconstruct, ZeroShiftWidthPinsShift) {
  auto c = config(kCentered, kUnit, Variant::p5, 4, 12);
  c.delta_h = 0.0;
  const auto est = reconstruct(c, solver());
  ASSERT_TRUE(est.diagnostics.verified);
  EXPECT_NEAR(est.h_star, 1.0, 1e-7);
}

TEST(Reconstruct, InvalidMomentDataIsReportedNotThrown) {
  // y_2 < 0 cannot come from any measure.
  const auto basis = enumerate_basis(1, 8);
  std::vector<double> v(basis.size(), 0.0);
  v[0] = 1.0;
  v[2] = -1.0;
  ReconstructionConfig c;
  c.variant = Variant::p5;
  c.degree = 4;
  c.bounding_box = kUnit;
  c.measure_moments = MomentSequence(basis, v, Normalization::probability, "invalid");
  c.objective_moments = lebesgue_box_moments(kUnit, 4);
  SupportEstimate est;
  ASSERT_NO_THROW(est = reconstruct(c, solver()));
  EXPECT_EQ(est.status, SolverStatus::infeasible);
  EXPECT_FALSE(est.diagnostics.verified);
  EXPECT_FALSE(est.reliable);
  EXPECT_TRUE(has_warning(est.warnings, "no representing measure"));
}

TEST(Reconstruct, SosCertificateHoldsPointwise) {
  const auto c = config(kCentered, kUnit, Variant::p5, 6, 14);
  const auto L = assemble(c);
  const auto raw = solve(L.program, default_solver_options(6), solver());
  const auto est = extract_estimate(c, L, raw);
  ASSERT_TRUE(est.diagnostics.verified);
  std::vector<Eigen::MatrixXd> grams;
  for (std::size_t b = 0; b < L.blocks.size(); ++b) grams.push_back(L.gram_value(b, raw.values));
  for (int k = 0; k <= 40; ++k) {
    const std::vector<double> x{-1.0 + 0.05 * k};
    const double cert = certify_value(L.blocks, grams, L.multipliers, x);
    EXPECT_NEAR(est.polynomial(x), cert, 1e-6);
    EXPECT_GE(est.polynomial(x), -1e-6);
  }
}

TEST(Reconstruct, TamperedSolutionFailsVerification) {
  const auto c = config(kCentered, kUnit, Variant::p5, 4, 12);
  const auto L = assemble(c);
  auto raw = solve(L.program, default_solver_options(4), solver());
  ASSERT_TRUE(extract_estimate(c, L, raw).diagnostics.verified);
  // Pushing P down breaks both the certificate match and the localizing block.
  raw.values[L.coefficient_vars[0]] -= 0.5;
  const auto bad = extract_estimate(c, L, raw);
  EXPECT_FALSE(bad.diagnostics.verified);
  EXPECT_GT(bad.diagnostics.certificate_residual, 0.4);
}

TEST(Reconstruct, CenteredIntervalP5CoversSupport) {
  const auto est = reconstruct(config(kCentered, kUnit, Variant::p5, 8, 16, 4), solver());
  ASSERT_TRUE(est.diagnostics.verified);
  EXPECT_GE(est.h_star, 1.0 - 1e-9);
  for (int k = 0; k <= 90; ++k) EXPECT_GE(at(est.polynomial, -0.45 + 0.01 * k), 1.0 - 1e-3);
}

TEST(Reconstruct, P6BoundaryResidualIsSmall) {
  const auto est = reconstruct(config(kCentered, kUnit, Variant::p6, 4, 8), solver());
  ASSERT_TRUE(est.diagnostics.verified);
  ASSERT_TRUE(est.diagnostics.boundary_residual && est.diagnostics.boundary_norm);
  EXPECT_LE(*est.diagnostics.boundary_residual, 0.05 * *est.diagnostics.boundary_norm);
  const auto iv = extract_intervals_1d(est.polynomial, 1.0, kUnit[0], kDefaultResolution1d);
  ASSERT_EQ(iv.size(), 1u);
  EXPECT_NEAR(iv[0].lower, -0.5, 1e-4);
  EXPECT_NEAR(iv[0].upper, 0.5, 1e-4);
}

// P5 is invariant under an affine change of coordinates, so both solves target
// the same polynomial.  The P6 boundary penalty is not invariant.
TEST(Reconstruct, RescaledMatchesDirectSolve) {
  const std::vector<Interval> box{{-2, 1}};
  const auto c = config(kCentered, box, Variant::p5, 4, 12);
  const auto direct = reconstruct(c, solver());
  const auto scaled = reconstruct_rescaled(c, solver(), default_solver_options(4));
  ASSERT_TRUE(direct.diagnostics.verified);
  ASSERT_TRUE(scaled.diagnostics.verified);
  EXPECT_TRUE(has_warning(scaled.warnings, "rescaled"));
  const auto a = extract_intervals_1d(direct.polynomial, 1.0, box[0], kDefaultResolution1d);
  const auto b = extract_intervals_1d(scaled.polynomial, 1.0, box[0], kDefaultResolution1d);
  ASSERT_EQ(a.size(), 1u);
  ASSERT_EQ(b.size(), 1u);
  EXPECT_NEAR(a[0].lower, b[0].lower, 1e-3);
  EXPECT_NEAR(a[0].upper, b[0].upper, 1e-3);
  EXPECT_LE(b[0].lower, -0.5 + 1e-6);
  EXPECT_GE(b[0].upper, 0.5 - 1e-6);
}

TEST(Reconstruct, TwoDimensionalSmoke) {
  const MeasureSpec square = UniformBox{{{-0.5, 0.5}, {-0.5, 0.5}}};
  const auto est = reconstruct(config(square, {{-1, 1}, {-1, 1}}, Variant::p5, 4, 8), solver());
  ASSERT_TRUE(est.diagnostics.verified);
  const std::vector<double> centre{0.0, 0.0}, corner{0.95, 0.95};
  EXPECT_GE(est.polynomial(centre), 1.0);
  EXPECT_LT(est.polynomial(corner), 1.0);
}
