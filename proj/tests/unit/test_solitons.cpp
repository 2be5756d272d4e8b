#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "cubiclab/errors.hpp"
#include "cubiclab/solitons.hpp"

using namespace cubiclab;

namespace {

SolitonProblem nls_problem(double kappa = 2.0) {
  return {schrodinger_dispersion(), 4.0, constant_symbol(kappa), GridSpec(512, 40.0)};
}

double max_diff(const ComplexField& a, const ComplexField& b) {
  double m = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) m = std::max(m, std::abs(a.values[i] - b.values[i]));
  return m;
}

}  // namespace

TEST(Petviashvili, RecoversSechProfile) {
  const auto p = nls_problem();
  const auto sol = petviashvili_solve(p, gaussian_seed(p.grid));
  EXPECT_TRUE(sol.converged);
  EXPECT_LT(sol.residual, 1e-9);
  EXPECT_NEAR(sol.stabilizing_factor, 1.0, 1e-8);
  const auto exact = nls_ground_state(p.grid, 4.0, 2.0);
  EXPECT_LT(max_diff(sol.profile, exact), 1e-10);
  EXPECT_NEAR(exact.values[256].real(), 2.0, 1e-14);
}

TEST(Petviashvili, ScalingInOmega) {
  // Q_omega(x) = sqrt(omega) Q_1(sqrt(omega) x): compare omega = 4 with omega = 1 on a grid twice as long.
  SolitonProblem one{schrodinger_dispersion(), 1.0, constant_symbol(2.0), GridSpec(512, 80.0)};
  const auto q1 = petviashvili_solve(one, gaussian_seed(one.grid));
  EXPECT_LT(q1.residual, 1e-10);
  const auto p4 = nls_problem();
  const auto q4 = petviashvili_solve(p4, gaussian_seed(p4.grid));
  // x_i on the long grid is exactly 2 x_i on the short one.
  for (std::size_t i = 0; i < 512; i += 3) {
    EXPECT_NEAR(q4.profile.values[i].real(), 2.0 * q1.profile.values[i].real(), 1e-8);
  }
}

TEST(Petviashvili, QuarticProfileIsEvenAndSolves) {
  SolitonProblem p{quartic_dispersion(0.2), 1.0, constant_symbol(1.0), GridSpec(512, 60.0)};
  const auto sol = petviashvili_solve(p, gaussian_seed(p.grid));
  EXPECT_TRUE(sol.converged);
  EXPECT_LT(soliton_residual(p, sol.profile), 1e-9);
  for (std::size_t i = 1; i < 256; ++i) EXPECT_NEAR(sol.profile.values[i].real(), sol.profile.values[512 - i].real(), 1e-10);
}

TEST(Petviashvili, DefocusingHasNoSoliton) {
  const auto p = nls_problem(-2.0);
  EXPECT_THROW(petviashvili_solve(p, gaussian_seed(p.grid)), NoSolitonError);
}

TEST(Petviashvili, SeedChecks) {
  const auto p = nls_problem();
  ComplexField zero(p.grid);
  EXPECT_THROW(petviashvili_solve(p, zero), PreconditionError);
  auto complex_seed = gaussian_seed(p.grid);
  complex_seed.values[256] += Complex{0.0, 0.5};
  EXPECT_THROW(petviashvili_solve(p, complex_seed), PreconditionError);
  ComplexField odd(p.grid);
  for (std::size_t i = 0; i < p.grid.size(); ++i) odd.values[i] = p.grid.x(i) * std::exp(-p.grid.x(i) * p.grid.x(i));
  EXPECT_THROW(petviashvili_solve(p, odd), PreconditionError);
  EXPECT_THROW(petviashvili_solve(p, gaussian_seed(p.grid), 1e-12, 0), ConfigError);
}

TEST(Petviashvili, IterationBudget) {
  const auto p = nls_problem();
  const auto sol = petviashvili_solve(p, gaussian_seed(p.grid), 1e-14, 2);
  EXPECT_FALSE(sol.converged);
  EXPECT_EQ(sol.iterations, 2);
}

TEST(SolitonProblem, Validation) {
  auto p = nls_problem();
  EXPECT_NO_THROW(validate(p));
  p.omega = 0.0;
  EXPECT_THROW(validate(p), ConfigError);
  p = nls_problem();
  p.dispersion.a = [](double xi) { return xi * xi + 1.0; };
  EXPECT_THROW(validate(p), ConfigError);
  p = nls_problem();
  p.dispersion = quartic_dispersion(-1.0);
  p.omega = 0.01;
  EXPECT_THROW(validate(p), PreconditionError);
}

TEST(SolitonProblem, EvolutionSideSign) {
  const auto p = nls_problem(2.0);
  EXPECT_EQ(evolution_nonlinearity(p).constant_value(), Complex(-2.0, 0.0));
}

TEST(Embed, NormsAndCentroid) {
  const GridSpec g(2048, 400.0);
  const auto phi = nls_ground_state(GridSpec(512, 40.0), 4.0, 2.0);
  const double N = 0.25, x0 = 10.0, xi0 = 0.5;
  const auto u = embed_soliton(phi, xi0, N, x0, schrodinger_dispersion(), g);
  EXPECT_NEAR(u.l2_norm() * u.l2_norm(), N * phi.l2_norm() * phi.l2_norm(), 1e-9);
  EXPECT_NEAR(u.sup_norm(), N * 2.0, 1e-3);
  double m = 0.0, mx = 0.0;
  for (std::size_t i = 0; i < g.size(); ++i) {
    m += std::norm(u.values[i]);
    mx += g.x(i) * std::norm(u.values[i]);
  }
  EXPECT_NEAR(mx / m, x0, 1e-9);
}

TEST(Embed, Preconditions) {
  const auto phi = nls_ground_state(GridSpec(512, 40.0), 4.0, 2.0);
  const auto d = schrodinger_dispersion();
  EXPECT_THROW(embed_soliton(phi, 0.0, 0.0, 0.0, d), PreconditionError);
  EXPECT_THROW(embed_soliton(phi, 0.0, 10.0, 0.0, d), PreconditionError);
  EXPECT_THROW(embed_soliton(phi, 1.0, 0.5, 0.0, quartic_dispersion(-1.0)), PreconditionError);
  EXPECT_THROW(embed_soliton(phi, 30.0, 0.5, 0.0, d), PreconditionError);
}

TEST(Profile, CsvHasHeaderAndRows) {
  const auto phi = nls_ground_state(GridSpec(16, 4.0), 1.0);
  std::ostringstream os;
  write_profile_csv(os, phi);
  const std::string s = os.str();
  EXPECT_EQ(s.rfind("x,re,im\n", 0), 0u);
  EXPECT_EQ(std::count(s.begin(), s.end(), '\n'), 17);
}
