#pragma once

#include <optional>
#include <vector>

#include "cubiclab/evolve.hpp"
#include "cubiclab/grid.hpp"
#include "cubiclab/littlewood_paley.hpp"
#include "cubiclab/symbols.hpp"

namespace cubiclab {

/// Spectral derivative d/dx.
ComplexField derivative(const ComplexField& u);

/// Pointwise conservation-law densities:
///   mass     M = |u|^2
///   momentum P = 2 Im(conj(u) u_x)
///   energy   E = 4 |u_x|^2
/// For the linear Schrodinger flow they satisfy d_t M + d_x P = 0 and
/// d_t P + d_x (E - d_x^2 M) = 0.
struct Densities {
  std::vector<double> mass;
  std::vector<double> momentum;
  std::vector<double> energy;
};
Densities densities(const ComplexField& u);

double total_mass(const ComplexField& u);
double total_momentum(const ComplexField& u);

/// Residuals of both local conservation laws at interior snapshots, with
/// time derivatives from centred differences and space derivatives spectral:
///   res_m = max_t |d_t M + d_x P|_{L1} / |M|_{L1}
///   res_p = max_t |d_t P + d_x (E - d_x^2 M)|_{L1} / |M|_{L1}
/// The identities hold for the free Schrodinger flow only; for any other
/// dispersion `applicable` is false but the residuals are still computed.
struct FluxResidual {
  double mass_residual = 0.0;
  double momentum_residual = 0.0;
  std::size_t samples = 0;
  bool applicable = true;
};
/// Requires at least three equally spaced snapshots (PreconditionError).
FluxResidual density_flux_residual(const EvolutionTrace& trace, const DispersionSpec& d);

/// Space-time norms over the trace window, by trapezoid rule in time:
///   l6      = |u|_{L6_t L6_x}
///   linf_l2 = |u|_{L_inf_t L2_x}
///   l4_linf = |u|_{L4_t L_inf_x}
struct StrichartzNorms {
  double l6 = 0.0;
  double linf_l2 = 0.0;
  double l4_linf = 0.0;
};
StrichartzNorms strichartz_norms(const EvolutionTrace& trace);

enum class BilinearWeight {
  none,                // |d_x |u|^2|_{L2_t L2_x}
  sobolev_minus_half,  // <xi>^{-1/2} d_x, i.e. the L2_t H^{-1/2}_x norm of the derivative
};

struct BilinearNorm {
  double value = 0.0;
  double x0_used = 0.0;
  bool snapped = false;  // x0 was moved to the nearest grid point
};

/// L2_t norm over the trace window of the derivative of v = u(x) conj(u(x + x0)),
/// optionally smoothed by <xi>^{-1/2}. Off-grid x0 is snapped to the nearest
/// grid point. Requires snapshots.
BilinearNorm bilinear_norm(const EvolutionTrace& trace, double x0, BilinearWeight weight = BilinearWeight::none);

/// Interaction Morawetz functional
///   I(uk, uj) = int_{x < y} M_k(x) P_j(y) - M_j(y) P_k(x) dx dy
/// with strict ordering x < y on the grid, in O(n) via prefix sums. As a
/// quadrature of the ordered integral this is second order in dx.
double interaction_morawetz(const ComplexField& uk, const ComplexField& uj);

struct MorawetzOptions {
  /// Pieces to pair; without a scheme the full field is used for both.
  std::optional<LPScheme> scheme;
  int k = 0;
  int j = 0;
  /// Real diagonal value of the symbol, coefficient of the L6 term.
  double diagonal_c = 0.0;
};

/// dI/dt from centred differences, next to the terms that the identity
///   dI/dt = 4 |d_x (u_k conj u_j)|^2_{L2} + 2 c |u|^6_{L6}   (k = j, constant real c)
/// predicts. For distinct pieces the L6 term is omitted.
struct MorawetzSample {
  double time = 0.0;
  double value = 0.0;
  double rate = 0.0;
  double gradient_term = 0.0;  // |d_x (u_k conj u_j)|^2_{L2}
  double l6_term = 0.0;        // |u_k|^6_{L6} when k == j
  double predicted = 0.0;
  double residual = 0.0;       // rate - predicted
};

/// Requires at least three snapshots.
std::vector<MorawetzSample> morawetz_rate(const EvolutionTrace& trace, const MorawetzOptions& opts = {});

}  // namespace cubiclab
