#pragma once

#include <iosfwd>
#include <optional>

#include "cubiclab/grid.hpp"
#include "cubiclab/symbols.hpp"

namespace cubiclab {

/// Rescaled soliton equation  A~(D) phi + omega phi = C~(phi, conj phi, phi).
///
/// Sign table, for constant symbols:
///   soliton side c~ > 0  <=>  focusing  <=>  evolution symbol c = -c~ < 0.
/// u(t, x) = e^{i omega t} phi(x) solves i u_t - a(D) u = c |u|^2 u exactly
/// when phi solves the rescaled equation with c~ = -c.
struct SolitonProblem {
  DispersionSpec dispersion;
  double omega = 1.0;
  TrilinearSpec nonlinearity;
  GridSpec grid;
};

/// Throws ConfigError unless a~(0) = a~'(0) = 0 (to 1e-10) and omega > 0, and
/// PreconditionError when a~ + omega is not positive on the grid.
void validate(const SolitonProblem& p);

/// Evolution-side symbol whose standing waves are the solutions of `p`.
TrilinearSpec evolution_nonlinearity(const SolitonProblem& p);

struct SolitonSolution {
  ComplexField profile;
  double residual = 0.0;   // soliton_residual of the final iterate
  int iterations = 0;
  bool converged = false;  // relative change dropped below tol
  double stabilizing_factor = 0.0;
};

/// Petviashvili iteration phi <- S^{3/2} (A~ + omega)^{-1} C~(phi), with
/// S = <(A~ + omega) phi, phi> / <C~(phi), phi>. The seed must be nonzero, real
/// and even (PreconditionError). S <= 0 raises NoSolitonError. Running out of
/// iterations returns converged = false.
SolitonSolution petviashvili_solve(const SolitonProblem& p, const ComplexField& seed, double tol = 1e-12,
                                   int max_iter = 500);

/// e^{-x^2} on the problem grid.
ComplexField gaussian_seed(const GridSpec& grid);

/// |A~ phi - C~(phi) + omega phi|_{L2}.
double soliton_residual(const SolitonProblem& p, const ComplexField& phi);

/// Closed-form ground state of -Q'' + omega Q = kappa Q^3:
/// Q(x) = sqrt(2 omega / kappa) sech(sqrt(omega) x).
ComplexField nls_ground_state(const GridSpec& grid, double omega, double kappa = 2.0);

/// u(x) = N phi(N (x - x0)) e^{i (x - x0) xi0}, evaluated by band-limited
/// interpolation of the profile (zero outside the profile's box). Lives on
/// `target` (default: the profile grid). Requires at least 16 points per
/// width 1/N and a'' > 0 at the carrier (PreconditionError).
ComplexField embed_soliton(const ComplexField& profile, double xi0, double N, double x0, const DispersionSpec& d,
                           std::optional<GridSpec> target = std::nullopt);

/// Writes "x,re,im" rows with a header line.
void write_profile_csv(std::ostream& os, const ComplexField& profile);

}  // namespace cubiclab
