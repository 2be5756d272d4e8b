#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "cubiclab/errors.hpp"
#include "cubiclab/fft.hpp"
#include "cubiclab/grid.hpp"

using namespace cubiclab;

namespace {

ComplexField gaussian(const GridSpec& g, double width = 1.0, double center = 0.0) {
  ComplexField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double y = (g.x(i) - center) / width;
    f.values[i] = std::exp(-0.5 * y * y);
  }
  return f;
}

ComplexField random_field(const GridSpec& g, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  ComplexField f(g);
  for (auto& v : f.values) v = {nd(rng), nd(rng)};
  return f;
}

}  // namespace

TEST(GridSpec, RejectsBadShapes) {
  EXPECT_THROW(GridSpec(100, 10.0), ConfigError);
  EXPECT_THROW(GridSpec(8, 10.0), ConfigError);
  EXPECT_THROW(GridSpec(64, 0.0), ConfigError);
  EXPECT_THROW(GridSpec(64, -1.0), ConfigError);
  EXPECT_NO_THROW(GridSpec(16, 1.0));
}

TEST(GridSpec, ModeStorageRoundTrip) {
  const GridSpec g(32, 2.0 * kPi);
  for (std::size_t k = 0; k < g.size(); ++k) {
    EXPECT_EQ(g.storage_index(g.mode(k)), k);
    EXPECT_DOUBLE_EQ(g.wavenumber(k), static_cast<double>(g.mode(k)));
  }
  EXPECT_EQ(g.mode(16), -16);
  const auto f = g.frequencies();
  EXPECT_DOUBLE_EQ(f.front(), -16.0);
  EXPECT_DOUBLE_EQ(f.back(), 15.0);
  EXPECT_DOUBLE_EQ(g.x(0), -kPi);
}

TEST(Fft, MatchesDirectDft) {
  const std::size_t n = 16;
  std::vector<Complex> in(n), out(n);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> nd;
  for (auto& v : in) v = {nd(rng), nd(rng)};
  fft::transform(in, out, fft::Direction::forward);
  for (std::size_t k = 0; k < n; ++k) {
    Complex s{};
    for (std::size_t j = 0; j < n; ++j) s += in[j] * std::polar(1.0, -2.0 * kPi * double(j * k) / double(n));
    EXPECT_NEAR(std::abs(out[k] - s), 0.0, 1e-12);
  }
}

TEST(Transform, RoundTripAndParseval) {
  const GridSpec g(256, 20.0);
  const auto f = random_field(g, 7);
  const auto s = to_spectral(f);
  EXPECT_NEAR(s.l2_norm(), f.l2_norm(), 1e-12 * f.l2_norm());
  const auto back = to_physical(s);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(back.values[i] - f.values[i]), 0.0, 1e-12);
}

TEST(Transform, GaussianIsSelfDual) {
  // Unitary convention: the transform of exp(-x^2/2) is exp(-xi^2/2).
  const GridSpec g(256, 40.0);
  const auto s = to_spectral(gaussian(g));
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double xi = g.wavenumber(k);
    EXPECT_NEAR(std::abs(s.coeffs[k] - Complex{std::exp(-0.5 * xi * xi), 0.0}), 0.0, 1e-12);
  }
  EXPECT_NEAR(std::abs(spectrum_at(gaussian(g), 0.37) - std::exp(-0.5 * 0.37 * 0.37)), 0.0, 1e-12);
}

TEST(Transform, ResizeKeepsLowModes) {
  const GridSpec g(64, 30.0);
  const auto f = gaussian(g, 2.0);
  const auto s = to_spectral(f);
  const auto big = resize_spectrum(g, s.coeffs, 128);
  const GridSpec g2(128, 30.0);
  const auto back = to_physical(SpectralField(g2, big));
  EXPECT_NEAR(back.l2_norm(), f.l2_norm(), 1e-12);
  const auto small = resize_spectrum(g2, big, 64);
  for (std::size_t k = 0; k < 64; ++k) EXPECT_NEAR(std::abs(small[k] - s.coeffs[k]), 0.0, 1e-14);
}

TEST(Interpolation, ExactOnTrigonometricPolynomials) {
  const GridSpec g(32, 2.0 * kPi);
  ComplexField f(g);
  auto exact = [](double x) { return std::polar(1.0, 3.0 * x) + 0.5 * std::polar(1.0, -5.0 * x); };
  for (std::size_t i = 0; i < g.size(); ++i) f.values[i] = exact(g.x(i));
  for (double x : {-3.0, -1.234, 0.0, 0.5, 2.9}) EXPECT_NEAR(std::abs(value_at(f, x) - exact(x)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(value_at(f, g.x(5)) - f.values[5]), 0.0, 1e-12);
}

TEST(Interpolation, TranslateMovesGaussian) {
  const GridSpec g(256, 40.0);
  const auto moved = translate(gaussian(g), 2.5);
  const auto expect = gaussian(g, 1.0, 2.5);
  for (std::size_t i = 0; i < g.size(); ++i) EXPECT_NEAR(std::abs(moved.values[i] - expect.values[i]), 0.0, 1e-12);
}

TEST(Wraparound, DetectsEdgeMass) {
  const GridSpec g(256, 40.0);
  EXPECT_LT(boundary_mass_fraction(gaussian(g)), 1e-30);
  EXPECT_NO_THROW(check_wraparound(gaussian(g)));
  const auto edge = gaussian(g, 1.0, 19.0);
  EXPECT_GT(boundary_mass_fraction(edge), 0.1);
  EXPECT_THROW(check_wraparound(edge), DomainTooSmallError);
}

TEST(Grid, MismatchIsReported) {
  EXPECT_THROW(require_same_grid(GridSpec(64, 1.0), GridSpec(64, 2.0)), GridMismatchError);
  EXPECT_NO_THROW(require_same_grid(GridSpec(64, 1.0), GridSpec(64, 1.0)));
  EXPECT_THROW(ComplexField(GridSpec(64, 1.0), ComplexVector(10)), Error);
}

TEST(Grid, InnerProductMatchesNorm) {
  const GridSpec g(128, 10.0);
  const auto f = random_field(g, 1);
  EXPECT_NEAR(inner_product_re(f, f), f.l2_norm() * f.l2_norm(), 1e-10);
}
