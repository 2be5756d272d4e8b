#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cubiclab/errors.hpp"
#include "cubiclab/linear.hpp"

using namespace cubiclab;

namespace {

ComplexField gaussian(const GridSpec& g, double carrier = 0.0) {
  ComplexField f(g);
  for (std::size_t i = 0; i < g.size(); ++i) {
    const double x = g.x(i);
    f.values[i] = std::exp(-0.5 * x * x) * std::polar(1.0, carrier * x);
  }
  return f;
}

// Free Schrodinger evolution of exp(-x^2/2).
Complex gaussian_exact(double t, double x) {
  const Complex s{1.0, 2.0 * t};
  return std::exp(-x * x / (2.0 * s)) / std::sqrt(s);
}

double max_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace

TEST(Propagator, GaussianClosedForm) {
  const GridSpec g(1024, 200.0);
  const auto u = propagate_linear(gaussian(g), schrodinger_dispersion(), 3.0);
  for (std::size_t i = 0; i < g.size(); i += 7) {
    EXPECT_NEAR(std::abs(u.values[i] - gaussian_exact(3.0, g.x(i))), 0.0, 1e-12);
  }
}

TEST(Propagator, IsometryAndGroupProperty) {
  const GridSpec g(512, 100.0);
  const auto d = quartic_dispersion(0.1);
  const auto u0 = gaussian(g, 1.0);
  const auto a = propagate_linear(propagate_linear(u0, d, 0.7), d, 1.1);
  const auto b = propagate_linear(u0, d, 1.8);
  EXPECT_LT(max_diff(a, b), 1e-12);
  EXPECT_NEAR(b.l2_norm(), u0.l2_norm(), 1e-12);
  const auto back = propagate_linear(b, d, -1.8);
  EXPECT_LT(max_diff(back, u0), 1e-12);
}

TEST(Propagator, GalileanBoost) {
  // For a = xi^2 a boost by xi0 moves the packet with speed 2 xi0.
  const GridSpec g(2048, 200.0);
  const double xi0 = 1.5, t = 4.0;
  const auto u = propagate_linear(gaussian(g, xi0), schrodinger_dispersion(), t);
  for (std::size_t i = 0; i < g.size(); i += 11) {
    const double x = g.x(i);
    const Complex expect = gaussian_exact(t, x - 2.0 * xi0 * t) * std::polar(1.0, xi0 * x - xi0 * xi0 * t);
    EXPECT_NEAR(std::abs(u.values[i] - expect), 0.0, 1e-11);
  }
}

TEST(StationaryPhase, ConvergesToExactSolution) {
  const GridSpec g(4096, 800.0);
  const auto d = schrodinger_dispersion();
  const auto u0 = gaussian(g);
  double prev = 1e300;
  for (double t : {10.0, 40.0}) {
    const double x = 0.3 * t;
    const double err = std::abs(stationary_phase_eval(u0, d, t, x) - gaussian_exact(t, x));
    EXPECT_LT(err, prev / 4.0);
    prev = err;
  }
  EXPECT_THROW(stationary_phase_eval(u0, d, 1.0, 0.0), PreconditionError);
}

TEST(StationaryPhase, ProfileAmplitude) {
  const GridSpec g(1024, 100.0);
  const std::vector<double> v{0.0, 1.0};
  const auto p = asymptotic_profile(gaussian(g), schrodinger_dispersion(), 25.0, v);
  ASSERT_EQ(p.velocities.size(), 2u);
  // a'' = 2, so the factor is 1 / sqrt(50); gamma(0) = e^{-i pi/4} u_hat(0) = e^{-i pi/4}.
  EXPECT_NEAR(p.amplitude_factor[0], 1.0 / std::sqrt(50.0), 1e-14);
  EXPECT_NEAR(std::abs(p.gamma[0] - std::polar(1.0, -kPi / 4.0)), 0.0, 1e-12);
  EXPECT_NEAR(std::abs(p.gamma[1]), std::exp(-0.125), 1e-12);
  EXPECT_NEAR(p.phase[1], 25.0 * 0.25, 1e-12);
  EXPECT_THROW(asymptotic_profile(gaussian(g), schrodinger_dispersion(), 0.0, v), PreconditionError);
}

TEST(DecayMetric, ApproachesConstant) {
  const GridSpec g(4096, 800.0);
  const std::vector<double> times{10.0, 20.0, 40.0};
  const auto s = decay_metric(gaussian(g), schrodinger_dispersion(), times);
  ASSERT_EQ(s.size(), 3u);
  // sup |u| t^{1/2} -> |u_hat(0)| / sqrt(a'') = 1 / sqrt 2.
  for (const auto& x : s) EXPECT_NEAR(x.value, 1.0 / std::sqrt(2.0), 0.01);
}

TEST(DecayMetric, RejectsBadTimes) {
  const GridSpec g(256, 50.0);
  const auto u0 = gaussian(g);
  const std::vector<double> neg{-1.0, 2.0}, unsorted{2.0, 1.0};
  EXPECT_THROW(decay_metric(u0, schrodinger_dispersion(), neg), PreconditionError);
  EXPECT_THROW(decay_metric(u0, schrodinger_dispersion(), unsorted), PreconditionError);
  const std::vector<double> late{100.0};
  EXPECT_THROW(decay_metric(u0, schrodinger_dispersion(), late), DomainTooSmallError);
}

TEST(BilinearProbe, Preconditions) {
  const auto d = schrodinger_dispersion();
  EXPECT_THROW(bilinear_scaling_probe(d, 1, 3, 100.0), PreconditionError);
  EXPECT_THROW(bilinear_scaling_probe(d, -1, 4, 100.0), PreconditionError);
  EXPECT_THROW(bilinear_scaling_probe(d, 1, 5, 0.01), PreconditionError);
  EXPECT_DOUBLE_EQ(dyadic_probe_frequency(0), 0.5);
  EXPECT_DOUBLE_EQ(dyadic_probe_frequency(3), 6.0);
}

TEST(BilinearProbe, ZeroSecondPacketGivesZero) {
  BilinearProbeOptions o;
  o.second_amplitude = 0.0;
  o.min_time_samples = 50;
  const auto d = schrodinger_dispersion();
  const double dv = 2.0 * (dyadic_probe_frequency(4) - dyadic_probe_frequency(1));
  EXPECT_EQ(bilinear_scaling_probe(d, 1, 4, 120.0 / dv, o), 0.0);
}
