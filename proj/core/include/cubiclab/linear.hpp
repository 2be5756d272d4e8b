#pragma once

#include <span>
#include <vector>

#include "cubiclab/grid.hpp"
#include "cubiclab/symbols.hpp"

namespace cubiclab {

/// e^{-i t a(D)} u0, applied exactly on the spectrum.
ComplexField propagate_linear(const ComplexField& u0, const DispersionSpec& d, double t);

/// Leading stationary-phase term gamma(v) e^{i t phi(v)} / sqrt(t a''(xi_v)) at
/// the requested velocities, with gamma(v) = e^{-i pi/4} u0_hat(xi_v).
struct AsymptoticProfile {
  double time = 0.0;
  std::vector<double> velocities;
  std::vector<Complex> gamma;
  std::vector<double> phase;             // t phi(v)
  std::vector<double> amplitude_factor;  // 1 / sqrt(t a''(xi_v))

  Complex value(std::size_t i) const;
};

inline constexpr double kDefaultStationaryPhaseTmin = 10.0;

/// Throws RangeError when some v is not a group velocity on the grid's band.
AsymptoticProfile asymptotic_profile(const ComplexField& u0, const DispersionSpec& d, double t,
                                     std::span<const double> velocities);

/// Stationary-phase approximation of (e^{-i t a(D)} u0)(x). Throws
/// PreconditionError for t < t_min and RangeError when x / t is out of range.
Complex stationary_phase_eval(const ComplexField& u0, const DispersionSpec& d, double t, double x,
                              double t_min = kDefaultStationaryPhaseTmin);

struct DecaySample {
  double time = 0.0;
  double value = 0.0;  // sup_x |u(t, x)| t^{1/2}
};

/// Normalized sup norms of the free evolution. Times must be positive and
/// strictly increasing (PreconditionError); wrap-around raises DomainTooSmallError.
std::vector<DecaySample> decay_metric(const ComplexField& u0, const DispersionSpec& d, std::span<const double> times);

struct BilinearProbeOptions {
  double sigma_xi = 0.1;              // frequency width of each packet
  std::size_t min_time_samples = 400;
  double second_amplitude = 1.0;      // scales the second packet (0 gives the zero product)
};

/// Frequency at which the probe centres its packet in dyadic region k.
double dyadic_probe_frequency(int k);

/// |u1 u2|_{L2_{t,x}([0, horizon] x R)} for unit-L2 Gaussian packets sharply
/// localized to dyadic regions j and k, launched so that they cross at
/// t = horizon / 2. The probe sizes its own grid to avoid wrap-around.
/// Throws PreconditionError when |j - k| <= 2, when either index is negative,
/// or when the horizon is too short for the packets to separate before and
/// after the crossing.
double bilinear_scaling_probe(const DispersionSpec& d, int j, int k, double horizon,
                              const BilinearProbeOptions& opts = {});

}  // namespace cubiclab
