#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cubiclab/errors.hpp"
#include "cubiclab/symbols.hpp"

using namespace cubiclab;

namespace {

std::vector<double> samples() {
  std::vector<double> xs;
  for (int i = -20; i <= 20; ++i) xs.push_back(0.25 * i);
  return xs;
}

}  // namespace

TEST(Dispersion, SchrodingerAndQuartic) {
  const auto s = schrodinger_dispersion();
  EXPECT_DOUBLE_EQ(s.a(3.0), 9.0);
  EXPECT_DOUBLE_EQ(s.a1(3.0), 6.0);
  EXPECT_DOUBLE_EQ(s.a2(3.0), 2.0);
  const auto q = quartic_dispersion(0.5);
  EXPECT_DOUBLE_EQ(q.a(2.0), 4.0 + 8.0);
  EXPECT_DOUBLE_EQ(q.a1(2.0), 4.0 + 16.0);
  EXPECT_DOUBLE_EQ(q.a2(2.0), 2.0 + 24.0);
}

TEST(Dispersion, CheckFlagsNonConvexSymbol) {
  const auto xs = samples();
  const auto good = check_dispersion(quartic_dispersion(0.1), xs);
  EXPECT_TRUE(good.convex);
  EXPECT_TRUE(good.derivatives_consistent);
  EXPECT_GT(good.min_a2, 0.0);
  const auto bad = check_dispersion(quartic_dispersion(-1.0), xs);
  EXPECT_FALSE(bad.convex);
}

TEST(Dispersion, RescaledVanishesToFirstOrder) {
  const auto q = quartic_dispersion(0.2);
  const double xi0 = 1.3, N = 0.25;
  const auto r = rescaled_dispersion(q, xi0, N);
  EXPECT_NEAR(r.a(0.0), 0.0, 1e-14);
  EXPECT_NEAR(r.a1(0.0), 0.0, 1e-14);
  EXPECT_NEAR(r.a2(0.0), q.a2(xi0), 1e-12);
  const double xi = 0.7;
  const double expect = (q.a(xi0 + N * xi) - q.a(xi0) - N * xi * q.a1(xi0)) / (N * N);
  EXPECT_NEAR(r.a(xi), expect, 1e-12);
  // a(xi) = xi^2 is exactly invariant.
  const auto s = rescaled_dispersion(schrodinger_dispersion(), 5.0, 0.1);
  EXPECT_NEAR(s.a(2.0), 4.0, 1e-9);
  EXPECT_THROW(rescaled_dispersion(q, xi0, 0.0), ConfigError);
}

TEST(Trilinear, SeparableEvaluation) {
  const auto c = smoothed_symbol({2.0, 0.0}, 0.5);
  const double x1 = 1.0, x2 = 2.0, x3 = -1.0;
  const double expect = 2.0 * std::pow((1 + x1 * x1) * (1 + x2 * x2) * (1 + x3 * x3), -0.25);
  EXPECT_NEAR(std::abs(c(x1, x2, x3) - expect), 0.0, 1e-14);
  EXPECT_FALSE(c.is_constant());
  const auto k = constant_symbol({0.5, -1.0});
  EXPECT_TRUE(k.is_constant());
  EXPECT_EQ(k.constant_value(), Complex(0.5, -1.0));
  EXPECT_EQ(negated(k).constant_value(), Complex(-0.5, 1.0));
}

TEST(Trilinear, RescaledSymbol) {
  const auto c = smoothed_symbol({1.0, 0.0}, 1.0);
  const auto r = rescaled_symbol(c, 2.0, 0.5);
  EXPECT_NEAR(std::abs(r(1.0, 0.0, -2.0) - c(2.5, 2.0, 1.0)), 0.0, 1e-14);
}

TEST(Trilinear, MagnitudeBound) {
  const auto xs = samples();
  EXPECT_NEAR(constant_symbol({3.0, 4.0}).magnitude_bound(xs), 5.0, 1e-14);
  EXPECT_NEAR(smoothed_symbol({1.0, 0.0}, 0.5).magnitude_bound(xs), 1.0, 1e-14);
}

TEST(Classify, SignTable) {
  const auto xs = samples();
  const auto d = schrodinger_dispersion();
  const auto def = classify(constant_symbol(1.0), d, xs);
  EXPECT_TRUE(def.conservative);
  EXPECT_TRUE(def.defocusing);
  EXPECT_FALSE(def.focusing);
  const auto foc = classify(constant_symbol(-1.0), d, xs);
  EXPECT_TRUE(foc.focusing);
  EXPECT_FALSE(foc.defocusing);
  const auto lossy = classify(constant_symbol({1.0, 0.1}), d, xs);
  EXPECT_FALSE(lossy.conservative);
  EXPECT_FALSE(lossy.defocusing);
  EXPECT_NEAR(lossy.max_imag_diag, 0.1, 1e-14);
  EXPECT_EQ(lossy.sample_count, xs.size());
}

TEST(Classify, ImaginaryGradientBreaksConservation) {
  // c = 1 + i 0.01 (xi1 - xi2): real on the diagonal, complex gradient.
  TrilinearSpec c = constant_symbol(1.0);
  TrilinearTerm t;
  t.weight = {0.0, 0.01};
  t.f = Multiplier{[](double x) { return Complex{x, 0.0}; }};
  t.g = Multiplier::one();
  t.h = Multiplier::one();
  c.terms.push_back(t);
  TrilinearTerm u = t;
  u.weight = {0.0, -0.01};
  u.f = Multiplier::one();
  u.g = Multiplier{[](double x) { return Complex{x, 0.0}; }};
  c.terms.push_back(u);
  const auto cls = classify(c, schrodinger_dispersion(), samples());
  EXPECT_FALSE(cls.conservative);
  EXPECT_GT(cls.max_imag_gradient, 1e-3);
}

TEST(Legendre, Schrodinger) {
  // a = xi^2: xi_v = v / 2, phi(v) = v^2 / 4.
  const auto p = legendre_point(schrodinger_dispersion(), 3.0, 50.0);
  EXPECT_NEAR(p.xi, 1.5, 1e-12);
  EXPECT_NEAR(p.phi, 2.25, 1e-12);
  EXPECT_THROW(legendre_point(schrodinger_dispersion(), 200.0, 50.0), RangeError);
}

TEST(Legendre, QuarticSatisfiesStationarity) {
  const auto q = quartic_dispersion(0.3);
  const auto p = legendre_point(q, 5.0, 20.0);
  EXPECT_NEAR(q.a1(p.xi), 5.0, 1e-10);
  EXPECT_NEAR(p.phi, 5.0 * p.xi - q.a(p.xi), 1e-12);
}

TEST(Resonance, Residuals) {
  const auto r = resonance_residual({1.0, 2.0, 3.0, 2.0});
  EXPECT_DOUBLE_EQ(r.delta4_xi, 0.0);
  EXPECT_DOUBLE_EQ(r.delta4_xi2, 1.0 - 4.0 + 9.0 - 4.0);
  EXPECT_FALSE(r.resonant());
  // Pairings {x1, x2} = {x4, x3} are the trivial resonances in 1D.
  const auto t = resonance_residual({1.0, 1.0, 3.0, 3.0});
  EXPECT_TRUE(t.resonant());
  EXPECT_FALSE(t.doubly_resonant());
  EXPECT_TRUE(resonance_residual({2.0, 2.0, 2.0, 2.0}).doubly_resonant());
}

TEST(Catalog, NamedSymbols) {
  EXPECT_TRUE(make_dispersion("schrodinger", {}));
  EXPECT_TRUE(make_dispersion("quartic", {}));
  EXPECT_FALSE(make_dispersion("airy3", {}));
  EXPECT_TRUE(make_nonlinearity("const", {}));
  EXPECT_TRUE(make_nonlinearity("smoothed", {}));
  EXPECT_FALSE(make_nonlinearity("quintic", {}));
  EXPECT_EQ(symbol_catalog().size(), 4u);
}

TEST(Multiplier, ApplyIdentityAndShift) {
  const GridSpec g(64, 2.0 * kPi);
  ComplexField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = std::polar(1.0, 2.0 * g.x(i));
  const auto out = apply_multiplier([](double xi) { return Complex{xi, 0.0}; }, f);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(out.values[i] - 2.0 * f.values[i]), 0.0, 1e-12);
}
