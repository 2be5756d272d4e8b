#pragma once

#include <map>
#include <string>
#include <vector>

#include "cubiclab/evolve.hpp"
#include "cubiclab/grid.hpp"
#include "cubiclab/littlewood_paley.hpp"
#include "cubiclab/symbols.hpp"

namespace cubiclab {

/// u0(x) = eps N^{1/2} phi0(N (x - x0)) e^{i x xi0}.
struct WavePacketSpec {
  double xi0 = 1.0;
  double N = 1.0 / 16.0;
  double x0 = 0.0;
  RealFunction envelope;  // phi0; empty means exp(-y^2 / 2)
  double amplitude = 1.0;

  double envelope_at(double y) const;
};

/// Throws PreconditionError unless N > 0 and at least 32 packet widths 1/N fit in the box.
ComplexField wave_packet_data(const GridSpec& grid, const WavePacketSpec& w);

enum class FitStatus { ok, inconclusive, anomaly };
const char* to_string(FitStatus s);

struct FitReport {
  std::string experiment;
  std::map<std::string, double> fitted;
  std::map<std::string, double> predicted;
  double relative_error = 0.0;
  double tolerance = 0.0;
  double t_lo = 0.0;
  double t_hi = 0.0;
  FitStatus status = FitStatus::ok;
  bool pass = false;
  std::vector<std::string> notes;
};

/// Conservative wave packet: fits the nonlinear phase (relative to the free
/// evolution of the same data) against -kappa t |phi(0, y)|^2 along the packet
/// and compares kappa with N Re c(xi0, xi0, xi0). Requires a real diagonal at
/// xi0 and cfg.t_end <= 1/N (PreconditionError). Passes when the relative error
/// is within 10% and the co-moving modulus drifts by less than 5%.
FitReport wave_packet_experiment(const GridSpec& grid, const WavePacketSpec& w, const DispersionSpec& d,
                                 const TrilinearSpec& c, const SolverConfig& cfg, EvolutionTrace* trace_out = nullptr);

/// Non-conservative packet with Im c(xi0, xi0, xi0) > 0: integrates until sup|u|
/// doubles, fits 1 / sup|u|^2 linearly in t and extrapolates its zero, then
/// compares with the reduced-equation time 1 / (2 N Im c max|phi0|^2).
/// No doubling within cfg.t_end gives an inconclusive report.
FitReport blowup_time_experiment(const GridSpec& grid, const WavePacketSpec& w, const DispersionSpec& d,
                                 const TrilinearSpec& c, const SolverConfig& cfg, EvolutionTrace* trace_out = nullptr);

struct ScatteringOptions {
  std::size_t velocity_count = 21;
  double dominance = 0.5;      // keep velocities with |u0_hat(xi_v)| >= dominance * max
  double gamma_floor = 1e-6;   // exclude rays with smaller mean |gamma|
  double slope_floor = 1e-6;   // added to |predicted| in the relative error
  std::size_t time_samples = 200;
};

/// Extracts gamma(t, v) = sqrt(t a''(xi_v)) u(t, v t) e^{-i t phi(v)} along rays,
/// fits arg gamma = alpha + beta log t + delta / t on [t_lo, t_hi], and compares
/// beta with -b(v) |gamma|^2, b = Re c(xi_v, xi_v, xi_v) / a''(xi_v). Requires
/// t_hi / t_lo >= e^2. Passes when the worst relative slope error is within 15%
/// and the modulus of gamma drifts by less than 10%.
FitReport modified_scattering_fit(const ComplexField& u0, const DispersionSpec& d, const TrilinearSpec& c,
                                  const SolverConfig& cfg, double t_lo, double t_hi,
                                  const ScatteringOptions& opts = {}, EvolutionTrace* trace_out = nullptr);

/// max over t and k of |u_k(t)|_{L2} / (eps c_k), with the envelope built from
/// the first snapshot. Passes when the ratio is at most c_target.
FitReport envelope_tracking_test(const EvolutionTrace& trace, const LPScheme& scheme, double epsilon, double c_target);

/// Trace probe filling `envelope_ratio` against a fixed envelope.
Probe envelope_probe(FrequencyEnvelope envelope);

}  // namespace cubiclab
