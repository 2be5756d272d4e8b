#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "cubiclab/grid.hpp"
#include "cubiclab/symbols.hpp"

namespace cubiclab {

enum class Dealias { pad2x, none };
enum class Scheme { ifrk4, strang };

struct SolverConfig {
  double dt = 1e-2;
  double t_end = 1.0;
  Dealias dealias = Dealias::pad2x;
  std::size_t output_stride = 10;
  Scheme scheme = Scheme::ifrk4;
  bool store_snapshots = true;
  /// Abort with DomainTooSmallError when >= 1% of the mass sits within 10 cells
  /// of the box edge (checked on u0 and at every output step).
  bool wrap_guard = true;
  /// Mass growth factor treated as blow-up, alongside non-finite values.
  double blowup_mass_factor = 1e6;
};

/// Throws ConfigError on invalid fields.
void validate(const SolverConfig& cfg);

/// Largest dt for which classical RK4 stays stable on the nonlinear phase rate
/// |c| |u0|_inf^2 (the linear part is integrated exactly).
double stability_cap(const TrilinearSpec& c, const ComplexField& u0);

/// One diagnostics row; optional columns stay empty unless a probe fills them.
struct TraceRow {
  double time = 0.0;
  double mass = 0.0;             // int |u|^2
  double momentum = 0.0;         // int 2 Im(conj(u) u_x)
  double l6_accum = 0.0;         // int_0^t int |u|^6 dx dt (trapezoid over rows)
  double linfty = 0.0;           // sup |u|
  double bilinear_accum = 0.0;   // int_0^t |d_x |u|^2|_{L2}^2 dt (trapezoid over rows)
  std::optional<double> envelope_ratio;
  std::optional<double> morawetz_I;
  std::optional<double> morawetz_rate;
};

/// Output of `run`. When the integration blew up, `blowup_time` is set and the
/// rows/snapshots cover the stretch before the failure.
struct EvolutionTrace {
  std::vector<double> times;
  std::vector<ComplexField> snapshots;
  std::vector<TraceRow> rows;
  std::optional<double> blowup_time;
  double dt = 0.0;
  std::size_t steps = 0;
  // Integrands of the accumulated columns at the last row.
  double last_l6_density = 0.0;
  double last_bilinear_density = 0.0;

  bool has_snapshots() const { return !snapshots.empty(); }
};

using Probe = std::function<void(const ComplexField& u, TraceRow& row)>;

/// C(u, conj u, u) for a separable symbol sampled on a fixed grid:
/// sum_m w_m (f_m(D) u) conj(g_m*(D) u) (h_m(D) u) with g*(xi) = conj(g(xi)).
/// With Dealias::pad2x products are formed on a 2n grid, which is alias-free
/// for cubic terms. Holds scratch buffers: use one instance per thread.
class TrilinearOperator {
 public:
  TrilinearOperator(const GridSpec& grid, const TrilinearSpec& c, Dealias dealias);

  /// Spectral in, spectral out (unitary coefficients on the base grid).
  void apply(std::span<const Complex> coeffs, std::span<Complex> out);

  const GridSpec& grid() const { return grid_; }
  const GridSpec& work_grid() const { return work_grid_; }
  bool is_zero() const { return zero_; }

 private:
  struct SampledTerm {
    Complex weight;
    std::optional<ComplexVector> f, g_conj, h;  // empty == identity
  };

  void to_work_physical(std::span<const Complex> coeffs, const std::optional<ComplexVector>& mult, ComplexVector& out);

  GridSpec grid_;
  GridSpec work_grid_;
  std::vector<SampledTerm> terms_;
  bool zero_ = false;
  ComplexVector plain_, a_, b_, c_, acc_;
};

/// Physical-space convenience wrapper around TrilinearOperator.
ComplexField eval_trilinear(const TrilinearSpec& c, const ComplexField& u, Dealias dealias = Dealias::pad2x);

/// Time stepper for i u_t - a(D) u = C(u, conj u, u), i.e. u_t = -i a(D) u - i C.
///
/// ifrk4: integrating-factor (Lawson) RK4; exp(-i dt a(xi)) is applied exactly.
/// strang: exact linear half steps around an exact pointwise solve of
/// u_t = -i gamma |u|^2 u when c is constant (RK4 on the nonlinear term otherwise).
class Integrator {
 public:
  Integrator(const GridSpec& grid, const DispersionSpec& d, const TrilinearSpec& c, const SolverConfig& cfg);

  /// Advances unitary spectral coefficients by one step from time t.
  /// Throws BlowUpError at t + dt on non-finite values or runaway mass.
  void advance(ComplexVector& coeffs, double t);

  double dt() const { return dt_; }
  void set_reference_mass(double m) { reference_mass_ = m; }

 private:
  void nonlinear_rhs(std::span<const Complex> in, std::span<Complex> out);
  void step_ifrk4(ComplexVector& u);
  void step_strang(ComplexVector& u);
  void check_finite(const ComplexVector& u, double t) const;

  GridSpec grid_;
  SolverConfig cfg_;
  double dt_;
  TrilinearSpec symbol_;
  TrilinearOperator op_;
  ComplexVector half_phase_;  // exp(-i a(xi) dt / 2)
  ComplexVector k1_, k2_, k3_, k4_, tmp_, phys_;
  double reference_mass_ = 0.0;
};

/// Appends a diagnostics row for `u` (and the snapshot when requested),
/// advancing the accumulated columns by the trapezoid rule.
void append_row(EvolutionTrace& trace, const ComplexField& u, bool store_snapshot, std::span<const Probe> probes = {});

/// One step of the configured scheme.
ComplexField step(const ComplexField& u, const DispersionSpec& d, const TrilinearSpec& c, const SolverConfig& cfg);

/// Integrates to cfg.t_end, emitting a diagnostics row (and optionally a
/// snapshot) every `output_stride` steps plus the final step. dt is adjusted
/// down so that t_end is hit exactly.
EvolutionTrace run(const ComplexField& u0, const DispersionSpec& d, const TrilinearSpec& c, const SolverConfig& cfg,
                   std::span<const Probe> probes = {});

}  // namespace cubiclab
