#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cubiclab/littlewood_paley.hpp"

using namespace cubiclab;

namespace {

ComplexField random_field(const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ComplexField f(g);
  for (auto& v : f.values) v = {nd(rng), nd(rng)};
  return f;
}

}  // namespace

TEST(LittlewoodPaley, DyadicRegions) {
  const LPScheme s;
  EXPECT_EQ(region_of(s, 0.0), 0);
  EXPECT_EQ(region_of(s, 1.0), 0);
  EXPECT_EQ(region_of(s, -1.0), 0);
  EXPECT_EQ(region_of(s, 1.5), 1);
  EXPECT_EQ(region_of(s, 2.0), 1);
  EXPECT_EQ(region_of(s, -3.0), 2);
  EXPECT_EQ(region_of(s, 1000.0), 10);
}

TEST(LittlewoodPaley, LatticeRegions) {
  LPScheme s;
  s.kind = LPKind::lattice;
  s.unit = 2.0;
  EXPECT_EQ(region_of(s, 0.0), 0);
  EXPECT_EQ(region_of(s, 0.99), 0);
  EXPECT_EQ(region_of(s, 1.0), 1);
  EXPECT_EQ(region_of(s, -1.0), 0);
  EXPECT_EQ(region_of(s, -1.01), -1);
}

TEST(LittlewoodPaley, PiecesSumToFieldAndAreOrthogonal) {
  const GridSpec g(256, 20.0);
  const auto f = random_field(g, 5);
  for (LPKind kind : {LPKind::dyadic, LPKind::lattice}) {
    LPScheme s;
    s.kind = kind;
    const auto range = region_range(s, g);
    ComplexField sum(g);
    double norm_sq = 0.0;
    for (int k = range.first; k <= range.last; ++k) {
      const auto p = lp_project(f, s, k);
      for (std::size_t i = 0; i < g.size(); ++i) sum.values[i] += p.values[i];
      norm_sq += p.l2_norm() * p.l2_norm();
    }
    for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(sum.values[i] - f.values[i]), 0.0, 1e-12);
    EXPECT_NEAR(norm_sq, f.l2_norm() * f.l2_norm(), 1e-9);
    const auto norms = piece_norms(f, s);
    EXPECT_EQ(norms.size(), range.count());
  }
}

TEST(LittlewoodPaley, OutOfRangeRegionIsZero) {
  const GridSpec g(64, 10.0);
  const auto p = lp_project(random_field(g, 2), LPScheme{}, 40);
  EXPECT_EQ(p.l2_norm(), 0.0);
}

TEST(Envelope, DominatesAndVariesSlowly) {
  const GridSpec g(512, 50.0);
  const auto f = random_field(g, 9);
  const LPScheme s;
  const double eps = 100.0;
  const auto env = compute_envelope(f, s, eps);
  const auto norms = piece_norms(f, s);
  for (std::size_t i = 0; i < norms.size(); ++i) {
    const int k = env.range.first + static_cast<int>(i);
    EXPECT_GE(env.epsilon * env.weight(k) * (1.0 + 1e-12), norms[i]);
    if (i + 1 < norms.size()) {
      const double ratio = env.weight(k + 1) / env.weight(k);
      EXPECT_LE(ratio, std::pow(2.0, s.delta) * (1.0 + 1e-12));
      EXPECT_GE(ratio, std::pow(2.0, -s.delta) * (1.0 - 1e-12));
    }
  }
  EXPECT_LE(env.l2_norm(), 1.0 + 1e-12);
}

TEST(Envelope, RescalesWhenEpsilonTooSmall) {
  const GridSpec g(256, 20.0);
  const auto f = random_field(g, 4);
  const auto env = compute_envelope(f, LPScheme{}, 1e-3);
  EXPECT_NEAR(env.l2_norm(), 1.0, 1e-12);
  EXPECT_GT(env.epsilon, env.requested_epsilon);
}

TEST(Envelope, DyadicRegularizationOfSpike) {
  LPScheme s;
  s.delta = 1.0;
  const auto c = regularize_envelope(s, {0.0, 0.0, 1.0, 0.0});
  EXPECT_NEAR(c[0], 0.25, 1e-15);
  EXPECT_NEAR(c[1], 0.5, 1e-15);
  EXPECT_NEAR(c[2], 1.0, 1e-15);
  EXPECT_NEAR(c[3], 0.5, 1e-15);
}

TEST(Envelope, MaximalFunction) {
  const auto m = maximal_function({0.0, 0.0, 3.0, 0.0, 0.0});
  EXPECT_DOUBLE_EQ(m[2], 3.0);
  EXPECT_DOUBLE_EQ(m[1], 1.0);
  EXPECT_DOUBLE_EQ(m[0], 1.0);
  EXPECT_DOUBLE_EQ(m[4], 1.0);
  for (double v : maximal_function({2.0, 2.0, 2.0})) EXPECT_DOUBLE_EQ(v, 2.0);
}

TEST(Envelope, LatticeFixedPointSatisfiesMaximalBound) {
  LPScheme s;
  s.kind = LPKind::lattice;
  const auto c = regularize_envelope(s, {0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0});
  const auto m = maximal_function(c);
  for (std::size_t i = 0; i < c.size(); ++i) EXPECT_LE(m[i], s.max_function_constant * c[i] * (1.0 + 1e-9));
}
