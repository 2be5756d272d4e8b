#include <gtest/gtest.h>

#include <cmath>
#include <vector>

#include "cubiclab/errors.hpp"
#include "cubiclab/fit.hpp"
#include "cubiclab/grid.hpp"

using namespace cubiclab;

TEST(FitLine, ExactLine) {
  const std::vector<double> x{0.0, 1.0, 2.0, 3.0}, y{1.0, 3.0, 5.0, 7.0};
  const auto f = fit_line(x, y);
  EXPECT_NEAR(f.intercept, 1.0, 1e-14);
  EXPECT_NEAR(f.slope, 2.0, 1e-14);
  EXPECT_NEAR(f.r_squared, 1.0, 1e-14);
}

TEST(FitLine, Degenerate) {
  const std::vector<double> one{1.0}, same{2.0, 2.0, 2.0}, y{1.0, 2.0, 3.0};
  EXPECT_THROW(fit_line(one, one), PreconditionError);
  EXPECT_THROW(fit_line(same, y), PreconditionError);
}

TEST(FitLogLog, PowerLaw) {
  std::vector<double> x, y;
  for (double t = 1.0; t < 100.0; t *= 1.5) {
    x.push_back(t);
    y.push_back(3.0 * std::pow(t, -0.5));
  }
  const auto f = fit_loglog(x, y);
  EXPECT_NEAR(f.slope, -0.5, 1e-13);
  EXPECT_NEAR(std::exp(f.intercept), 3.0, 1e-12);
  y[0] = -1.0;
  EXPECT_THROW(fit_loglog(x, y), PreconditionError);
}

TEST(LeastSquares, RecoversBasisCoefficients) {
  // alpha + beta log t + delta / t on badly scaled columns.
  std::vector<double> ones, logt, inv, y;
  for (double t = 20.0; t <= 200.0; t += 5.0) {
    ones.push_back(1.0);
    logt.push_back(std::log(t));
    inv.push_back(1.0 / t);
    y.push_back(0.3 - 0.04 * std::log(t) + 2.5 / t);
  }
  const auto b = least_squares({ones, logt, inv}, y);
  ASSERT_EQ(b.size(), 3u);
  EXPECT_NEAR(b[0], 0.3, 1e-9);
  EXPECT_NEAR(b[1], -0.04, 1e-10);
  EXPECT_NEAR(b[2], 2.5, 1e-7);
  EXPECT_THROW(least_squares({ones, ones}, y), PreconditionError);
}

TEST(UnwrapPhase, RemovesJumps) {
  std::vector<double> raw, truth;
  for (int i = 0; i < 50; ++i) {
    const double p = 0.4 * i;
    truth.push_back(p);
    raw.push_back(std::remainder(p, 2.0 * kPi));
  }
  const auto u = unwrap_phase(raw);
  for (std::size_t i = 0; i < u.size(); ++i) EXPECT_NEAR(u[i], truth[i], 1e-12);
  EXPECT_TRUE(unwrap_phase(std::vector<double>{}).empty());
}
