#include <gtest/gtest.h>

#include <algorithm>
#include <set>

#include "moment_support/basis.hpp"
#include "oracles.hpp"

using namespace moment_support;

namespace {
MultiIndex mi(std::vector<int> e) { return MultiIndex(std::move(e)); }
}  // namespace

TEST(BasisSize, SmallCases) {
  EXPECT_EQ(basis_size(2, 2), 6u);
  EXPECT_EQ(basis_size(1, 0), 1u);
  EXPECT_EQ(basis_size(3, 4), 35u);
}

TEST(BasisSize, MatchesEnumerationOracle) {
  for (std::size_t n = 1; n <= 4; ++n) {
    for (int r = 0; r <= 10; ++r) {
      EXPECT_EQ(basis_size(n, r), oracle::tuples_up_to(n, r).size()) << n << "," << r;
      EXPECT_EQ(enumerate_basis(n, r).size(), basis_size(n, r));
    }
  }
}

TEST(BasisSize, RejectsBadInputAndOverflow) {
  EXPECT_THROW(basis_size(0, 3), ParameterError);
  EXPECT_THROW(basis_size(2, -1), ParameterError);
  EXPECT_THROW(basis_size(200, 1000000), SizingError);
}

TEST(EnumerateBasis, PrintedLayout) {
  const auto b1 = enumerate_basis(2, 1);
  ASSERT_EQ(b1.size(), 3u);
  EXPECT_EQ(b1[0], mi({0, 0}));
  EXPECT_EQ(b1[1], mi({1, 0}));
  EXPECT_EQ(b1[2], mi({0, 1}));

  const auto b2 = enumerate_basis(2, 2);
  const std::vector<MultiIndex> expected{mi({0, 0}), mi({1, 0}), mi({0, 1}),
                                         mi({2, 0}), mi({1, 1}), mi({0, 2})};
  ASSERT_EQ(b2.size(), expected.size());
  for (std::size_t k = 0; k < expected.size(); ++k) EXPECT_EQ(b2[k], expected[k]);

  const auto u = enumerate_basis(1, 3);
  for (int k = 0; k <= 3; ++k) EXPECT_EQ(u[k], mi({k}));
}

TEST(EnumerateBasis, GradedAndComplete) {
  for (std::size_t n = 1; n <= 3; ++n) {
    const auto b = enumerate_basis(n, 5);
    EXPECT_EQ(b[0], MultiIndex(n));
    for (std::size_t k = 1; k < b.size(); ++k) EXPECT_LE(b[k - 1].degree(), b[k].degree());
    std::set<std::vector<int>> got;
    for (const auto& a : b) {
      std::vector<int> e(n);
      for (std::size_t i = 0; i < n; ++i) e[i] = a[i];
      got.insert(e);
    }
    const auto all = oracle::tuples_up_to(n, 5);
    EXPECT_EQ(got, std::set<std::vector<int>>(all.begin(), all.end()));
  }
}

TEST(EnumerateBasis, PrefixProperty) {
  for (std::size_t n = 1; n <= 3; ++n) {
    for (int r = 0; r < 6; ++r) {
      const auto small = enumerate_basis(n, r);
      const auto big = enumerate_basis(n, r + 1);
      for (std::size_t k = 0; k < small.size(); ++k) EXPECT_EQ(small[k], big[k]);
    }
  }
}

TEST(EnumerateBasis, AdditionClosure) {
  const auto b = enumerate_basis(3, 3);
  const auto b2 = enumerate_basis(3, 6);
  for (const auto& a : b) {
    for (const auto& c : b) EXPECT_TRUE(b2.index_of(a + c).has_value());
  }
}

TEST(IndexOf, ExamplesAndRoundTrip) {
  const auto b = enumerate_basis(2, 2);
  EXPECT_EQ(index_of(b, mi({1, 1})), std::optional<std::size_t>(4));
  EXPECT_EQ(index_of(b, mi({0, 0})), std::optional<std::size_t>(0));
  EXPECT_FALSE(index_of(b, mi({3, 0})).has_value());
  EXPECT_THROW(index_of(b, mi({1, 0, 0})), StructuralError);
  const auto big = enumerate_basis(3, 6);
  for (std::size_t p = 0; p < big.size(); ++p) EXPECT_EQ(big.position(big[p]), p);
  EXPECT_THROW(b.position(mi({3, 0})), OrderError);
}

TEST(MultiIndex, TextForm) {
  EXPECT_EQ(mi({2, 0}).to_string(), "[2,0]");
  EXPECT_EQ(MultiIndex::parse("[2,0]"), mi({2, 0}));
  EXPECT_EQ(MultiIndex::parse(" [ 3 , 1 ,0] "), mi({3, 1, 0}));
  EXPECT_THROW(MultiIndex::parse("[2,-1]"), ParameterError);
  EXPECT_THROW(MultiIndex::parse("2,0"), ParameterError);
  EXPECT_THROW(MultiIndex::parse("[]"), ParameterError);
}

TEST(MultiIndex, Arithmetic) {
  const auto a = mi({1, 2});
  const auto b = mi({0, 3});
  EXPECT_EQ(a + b, mi({1, 5}));
  EXPECT_EQ((a + b).degree(), 6);
  EXPECT_TRUE((a + b).dominates(a));
  EXPECT_FALSE(a.dominates(b));
  EXPECT_EQ(MultiIndex::unit(3, 1, 2), mi({0, 2, 0}));
}
