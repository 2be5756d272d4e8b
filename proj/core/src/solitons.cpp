#include "cubiclab/solitons.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <string>

#include "cubiclab/errors.hpp"
#include "cubiclab/evolve.hpp"

namespace cubiclab {
namespace {

std::vector<double> linear_symbol(const SolitonProblem& p) {
  std::vector<double> l(p.grid.size());
  for (std::size_t k = 0; k < l.size(); ++k) l[k] = p.dispersion.a(p.grid.wavenumber(k)) + p.omega;
  return l;
}

double spectral_dot_re(const GridSpec& g, const ComplexVector& a, const ComplexVector& b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) s += std::real(std::conj(a[k]) * b[k]);
  return s * g.dxi();
}

void require_real_even(const ComplexField& seed) {
  const double sup = seed.sup_norm();
  if (sup == 0.0) throw PreconditionError("petviashvili: seed is zero");
  const std::size_t n = seed.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    if (std::abs(seed.values[i].imag()) > 1e-12 * sup) throw PreconditionError("petviashvili: seed must be real");
    const std::size_t mirror = (n - i) % n;
    if (std::abs(seed.values[i] - seed.values[mirror]) > 1e-10 * sup) {
      throw PreconditionError("petviashvili: seed must be even");
    }
  }
}

}  // namespace

void validate(const SolitonProblem& p) {
  if (std::abs(p.dispersion.a(0.0)) > 1e-10 || std::abs(p.dispersion.a1(0.0)) > 1e-10) {
    throw ConfigError("soliton: dispersion must satisfy a(0) = a'(0) = 0 (use the rescaled dispersion)");
  }
  if (!(p.omega > 0.0)) throw ConfigError("soliton: omega must be positive");
  for (double l : linear_symbol(p)) {
    if (!(l > 0.0)) throw PreconditionError("soliton: a + omega is not positive on the grid");
  }
}

TrilinearSpec evolution_nonlinearity(const SolitonProblem& p) { return negated(p.nonlinearity); }

ComplexField gaussian_seed(const GridSpec& grid) {
  ComplexField f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) f.values[i] = std::exp(-grid.x(i) * grid.x(i));
  return f;
}

SolitonSolution petviashvili_solve(const SolitonProblem& p, const ComplexField& seed, double tol, int max_iter) {
  validate(p);
  require_same_grid(p.grid, seed.grid);
  require_real_even(seed);
  if (max_iter < 1) throw ConfigError("petviashvili: max_iter must be positive");

  const auto l = linear_symbol(p);
  TrilinearOperator op(p.grid, p.nonlinearity, Dealias::pad2x);
  auto phi = to_spectral(seed).coeffs;
  ComplexVector c(phi.size()), next(phi.size());

  SolitonSolution sol{seed, 0.0, 0, false, 0.0};
  for (int it = 1; it <= max_iter; ++it) {
    op.apply(phi, c);
    double lin = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k) lin += l[k] * std::norm(phi[k]);
    lin *= p.grid.dxi();
    const double nl = spectral_dot_re(p.grid, phi, c);
    const double s = lin / nl;
    if (!(nl > 0.0) || !(s > 0.0) || !std::isfinite(s)) {
      throw NoSolitonError("petviashvili: stabilizing factor is not positive; the nonlinearity is not focusing");
    }
    const double factor = std::pow(s, 1.5);
    double diff = 0.0, norm = 0.0;
    for (std::size_t k = 0; k < phi.size(); ++k) {
      next[k] = factor * c[k] / l[k];
      diff += std::norm(next[k] - phi[k]);
      norm += std::norm(next[k]);
    }
    phi.swap(next);
    sol.iterations = it;
    sol.stabilizing_factor = s;
    if (norm == 0.0) throw NoSolitonError("petviashvili: iteration collapsed to zero");
    if (std::sqrt(diff / norm) < tol) {
      sol.converged = true;
      break;
    }
  }
  sol.profile = to_physical(SpectralField(p.grid, phi));
  sol.residual = soliton_residual(p, sol.profile);
  return sol;
}

double soliton_residual(const SolitonProblem& p, const ComplexField& phi) {
  require_same_grid(p.grid, phi.grid);
  const auto l = linear_symbol(p);
  const auto spec = to_spectral(phi);
  TrilinearOperator op(p.grid, p.nonlinearity, Dealias::pad2x);
  ComplexVector c(spec.coeffs.size());
  op.apply(spec.coeffs, c);
  double s = 0.0;
  for (std::size_t k = 0; k < c.size(); ++k) s += std::norm(l[k] * spec.coeffs[k] - c[k]);
  return std::sqrt(s * p.grid.dxi());
}

ComplexField nls_ground_state(const GridSpec& grid, double omega, double kappa) {
  if (!(omega > 0.0) || !(kappa > 0.0)) throw ConfigError("ground state: omega and kappa must be positive");
  const double amp = std::sqrt(2.0 * omega / kappa);
  const double k = std::sqrt(omega);
  ComplexField f(grid);
  for (std::size_t i = 0; i < grid.size(); ++i) f.values[i] = amp / std::cosh(k * grid.x(i));
  return f;
}

ComplexField embed_soliton(const ComplexField& profile, double xi0, double N, double x0, const DispersionSpec& d,
                           std::optional<GridSpec> target) {
  const GridSpec grid = target.value_or(profile.grid);
  if (!(N > 0.0)) throw PreconditionError("embed_soliton: N must be positive");
  if (1.0 / (N * grid.dx()) < 16.0) {
    throw PreconditionError("embed_soliton: fewer than 16 grid points per width 1/N");
  }
  if (!(d.a2(xi0) > 0.0)) throw PreconditionError("embed_soliton: dispersion is not convex at the carrier");
  if (std::abs(xi0) >= 0.5 * grid.max_frequency()) {
    throw PreconditionError("embed_soliton: carrier frequency is not resolved by the grid");
  }

  const auto spec = to_spectral(profile);
  const double half = 0.5 * profile.grid.length();
  ComplexField out(grid, profile.time);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    const double rel = grid.x(i) - x0;
    const double y = N * rel;
    if (y < -half || y >= half) continue;
    out.values[i] = N * value_at(spec, y) * std::polar(1.0, rel * xi0);
  }
  return out;
}

void write_profile_csv(std::ostream& os, const ComplexField& profile) {
  os << "x,re,im\n";
  char buf[96];
  for (std::size_t i = 0; i < profile.grid.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", profile.grid.x(i), profile.values[i].real(),
                  profile.values[i].imag());
    os << buf;
  }
}

}  // namespace cubiclab
