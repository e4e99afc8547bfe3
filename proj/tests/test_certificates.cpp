#include <gtest/gtest.h>

#include <random>

#include "moment_support/certificates.hpp"
#include "oracles.hpp"

using namespace moment_support;

namespace {

Polynomial one_minus_x2() {
  Polynomial g(1);
  g.add_term(MultiIndex{0}, 1.0);
  g.add_term(MultiIndex{2}, -1.0);
  return g;
}

// Direct symbolic expansion of v'Qv * g over exponent tuples, independent of
// the library's coefficient matching.
std::map<std::vector<int>, double> expand(const MonomialBasis& half, const Eigen::MatrixXd& q,
                                          const Polynomial& g) {
  std::map<std::vector<int>, double> out;
  const std::size_t n = half.dimension();
  for (std::size_t i = 0; i < half.size(); ++i) {
    for (std::size_t j = 0; j < half.size(); ++j) {
      for (const auto& [gamma, c] : g.terms()) {
        std::vector<int> e(n);
        for (std::size_t k = 0; k < n; ++k) e[k] = half[i][k] + half[j][k] + gamma[k];
        out[e] += q(i, j) * c;
      }
    }
  }
  return out;
}

}  // namespace

TEST(GramBlocks, Sizes) {
  const std::vector<Polynomial> g{one_minus_x2()};
  auto b = gram_blocks(1, 4, g);
  ASSERT_EQ(b.size(), 2u);
  EXPECT_EQ(b[0].side(), 3u);
  EXPECT_EQ(b[1].side(), 2u);
  EXPECT_EQ(b[0].free_entries(), 6u);
  EXPECT_EQ(b[1].free_entries(), 3u);
  b = gram_blocks(1, 2, g);
  EXPECT_EQ(b[0].side(), 2u);
  EXPECT_EQ(b[1].side(), 1u);
  b = gram_blocks(2, 2, {});
  ASSERT_EQ(b.size(), 1u);
  EXPECT_EQ(b[0].side(), 3u);
  EXPECT_THROW(gram_blocks(1, 1, g), DegreeError);
}

TEST(MatchConstraints, HandExpansions) {
  const std::vector<Polynomial> g{one_minus_x2()};
  const auto blocks = gram_blocks(1, 2, g);
  const auto m = match_constraints(blocks, g);
  ASSERT_EQ(m.equations.size(), 3u);
  Eigen::MatrixXd q0(2, 2), q1(1, 1);
  q0 << 1.5, 0.25, 0.25, 3.0;
  q1 << 0.7;
  const std::vector<Eigen::MatrixXd> grams{q0, q1};
  const Polynomial p = m.polynomial(grams);
  EXPECT_DOUBLE_EQ(p.coefficient(MultiIndex{0}), 1.5 + 0.7);
  EXPECT_DOUBLE_EQ(p.coefficient(MultiIndex{1}), 0.5);
  EXPECT_DOUBLE_EQ(p.coefficient(MultiIndex{2}), 3.0 - 0.7);

  const auto plain = match_constraints(gram_blocks(1, 2, {}), {});
  const std::vector<Eigen::MatrixXd> g0{q0};
  const Polynomial p0 = plain.polynomial(g0);
  EXPECT_DOUBLE_EQ(p0.coefficient(MultiIndex{0}), 1.5);
  EXPECT_DOUBLE_EQ(p0.coefficient(MultiIndex{1}), 0.5);
  EXPECT_DOUBLE_EQ(p0.coefficient(MultiIndex{2}), 3.0);

  const auto b4 = gram_blocks(1, 4, g);
  const auto m4 = match_constraints(b4, g);
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3, 3), c = Eigen::MatrixXd::Zero(2, 2);
  a(2, 2) = 2.0;
  c(1, 1) = 0.5;
  const std::vector<Eigen::MatrixXd> g4{a, c};
  EXPECT_DOUBLE_EQ(m4.polynomial(g4).coefficient(MultiIndex{4}), 2.0 - 0.5);
}

TEST(MatchConstraints, EquationCountAndSymbolicOracle) {
  std::mt19937_64 rng(17);
  for (std::size_t n = 1; n <= 2; ++n) {
    for (int d = 0; d <= 6; ++d) {
      std::vector<Interval> box(n, Interval{-0.7, 1.1});
      for (auto enc : {BoxEncoding::per_axis_quadratic, BoxEncoding::faces}) {
        std::vector<Polynomial> g;
        for (const auto& p : box_polynomials(box, enc)) {
          if (p.degree() <= d) g.push_back(p);
        }
        const auto blocks = gram_blocks(n, d, g);
        const auto m = match_constraints(blocks, g);
        EXPECT_EQ(m.equations.size(), basis_size(n, d));
        std::vector<Eigen::MatrixXd> grams;
        for (const auto& b : blocks) grams.push_back(oracle::random_psd<Eigen::MatrixXd>(b.side(), rng));
        std::map<std::vector<int>, double> total;
        for (std::size_t k = 0; k < blocks.size(); ++k) {
          const Polynomial mult =
              blocks[k].multiplier_index == 0 ? Polynomial::constant(n, 1.0)
                                              : g[blocks[k].multiplier_index - 1];
          for (const auto& [e, v] : expand(blocks[k].half_basis, grams[k], mult)) total[e] += v;
        }
        const Polynomial p = m.polynomial(grams);
        for (const auto& [e, v] : total) {
          EXPECT_NEAR(p.coefficient(MultiIndex(e)), v, 1e-12 * (1 + std::abs(v)));
        }
        EXPECT_LE(p.degree(), d);
      }
    }
  }
}

TEST(CertifyValue, Examples) {
  const auto blocks = gram_blocks(1, 2, {});
  const std::vector<Eigen::MatrixXd> zero{Eigen::MatrixXd::Zero(2, 2)};
  const std::vector<double> x{2.0};
  EXPECT_EQ(certify_value(blocks, zero, {}, x), 0.0);
  const std::vector<Eigen::MatrixXd> eye{Eigen::MatrixXd::Identity(2, 2)};
  EXPECT_EQ(certify_value(blocks, eye, {}, x), 5.0);
  const std::vector<double> bad{1.0, 2.0};
  EXPECT_THROW(certify_value(blocks, eye, {}, bad), StructuralError);
}

TEST(BoxPolynomials, Encodings) {
  const auto q = box_polynomials({{-1, 2}}, BoxEncoding::per_axis_quadratic);
  ASSERT_EQ(q.size(), 1u);
  for (double x : {-1.0, 2.0}) EXPECT_NEAR(q[0](std::vector<double>{x}), 0.0, 1e-15);
  EXPECT_GT(q[0](std::vector<double>{0.5}), 0.0);
  EXPECT_LT(q[0](std::vector<double>{3.0}), 0.0);
  const auto f = box_polynomials({{-1, 2}, {0, 1}}, BoxEncoding::faces);
  ASSERT_EQ(f.size(), 4u);
  for (const auto& p : f) EXPECT_EQ(p.degree(), 1);
}
