#include "cubiclab/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cubiclab/diagnostics.hpp"
#include "cubiclab/errors.hpp"

namespace cubiclab {
namespace {

constexpr double kRk4StabilityLimit = 2.8;
const Complex kI{0.0, 1.0};

double spectral_mass(const GridSpec& g, const ComplexVector& c) {
  double s = 0.0;
  for (const auto& v : c) s += std::norm(v);
  return s * g.dxi();
}

std::vector<double> sample_points(const GridSpec& g) {
  auto xs = g.wavenumbers();
  xs.push_back(g.max_frequency());
  return xs;
}

double integral_pow(const ComplexField& u, int p) {
  double s = 0.0;
  for (const auto& v : u.values) s += std::pow(std::norm(v), 0.5 * p);
  return s * u.grid.dx();
}

double gradient_of_mass_sq(const ComplexField& u) {
  ComplexField m(u.grid, u.time);
  for (std::size_t i = 0; i < u.values.size(); ++i) m.values[i] = std::norm(u.values[i]);
  const auto dm = derivative(m);
  double s = 0.0;
  for (const auto& v : dm.values) s += std::norm(v);
  return s * u.grid.dx();
}

}  // namespace

void validate(const SolverConfig& cfg) {
  if (!(cfg.dt > 0.0) || !std::isfinite(cfg.dt)) throw ConfigError("solver: dt must be positive");
  if (!(cfg.t_end > 0.0) || !std::isfinite(cfg.t_end)) throw ConfigError("solver: t_end must be positive");
  if (cfg.dt > cfg.t_end) throw ConfigError("solver: dt exceeds t_end");
  if (cfg.output_stride == 0) throw ConfigError("solver: output_stride must be >= 1");
  if (!(cfg.blowup_mass_factor > 1.0)) throw ConfigError("solver: blowup_mass_factor must exceed 1");
}

double stability_cap(const TrilinearSpec& c, const ComplexField& u0) {
  const double bound = c.magnitude_bound(sample_points(u0.grid));
  const double amp = u0.sup_norm();
  const double rate = bound * amp * amp;
  return rate > 0.0 ? kRk4StabilityLimit / rate : std::numeric_limits<double>::infinity();
}

TrilinearOperator::TrilinearOperator(const GridSpec& grid, const TrilinearSpec& c, Dealias dealias)
    : grid_(grid), work_grid_(dealias == Dealias::pad2x ? GridSpec(2 * grid.size(), grid.length()) : grid) {
  const auto xis = grid.wavenumbers();
  auto sample = [&](const Multiplier& m, bool conjugate) -> std::optional<ComplexVector> {
    if (m.identity) return std::nullopt;
    ComplexVector v(xis.size());
    for (std::size_t k = 0; k < xis.size(); ++k) v[k] = conjugate ? std::conj(m(xis[k])) : m(xis[k]);
    return v;
  };
  for (const auto& t : c.terms) {
    if (t.weight == Complex{}) continue;
    terms_.push_back(SampledTerm{t.weight, sample(t.f, false), sample(t.g, true), sample(t.h, false)});
  }
  zero_ = terms_.empty();
  const std::size_t m = work_grid_.size();
  plain_.resize(m);
  a_.resize(m);
  b_.resize(m);
  c_.resize(m);
  acc_.resize(m);
}

void TrilinearOperator::to_work_physical(std::span<const Complex> coeffs, const std::optional<ComplexVector>& mult,
                                         ComplexVector& out) {
  ComplexVector scaled;
  std::span<const Complex> src = coeffs;
  if (mult) {
    scaled.resize(coeffs.size());
    for (std::size_t k = 0; k < coeffs.size(); ++k) scaled[k] = coeffs[k] * (*mult)[k];
    src = scaled;
  }
  if (work_grid_.size() == grid_.size()) {
    std::copy(src.begin(), src.end(), out.begin());
  } else {
    out = resize_spectrum(grid_, src, work_grid_.size());
  }
  inverse_transform(work_grid_, out, out);
}

void TrilinearOperator::apply(std::span<const Complex> coeffs, std::span<Complex> out) {
  if (coeffs.size() != grid_.size() || out.size() != grid_.size()) {
    throw GridMismatchError("trilinear operator: coefficient count does not match grid");
  }
  if (zero_) {
    std::fill(out.begin(), out.end(), Complex{});
    return;
  }
  bool plain_ready = false;
  auto physical = [&](const std::optional<ComplexVector>& mult, ComplexVector& scratch) -> const ComplexVector& {
    if (!mult) {
      if (!plain_ready) {
        to_work_physical(coeffs, std::nullopt, plain_);
        plain_ready = true;
      }
      return plain_;
    }
    to_work_physical(coeffs, mult, scratch);
    return scratch;
  };

  std::fill(acc_.begin(), acc_.end(), Complex{});
  for (const auto& t : terms_) {
    const auto& f = physical(t.f, a_);
    const auto& g = physical(t.g_conj, b_);
    const auto& h = physical(t.h, c_);
    for (std::size_t i = 0; i < acc_.size(); ++i) acc_[i] += t.weight * f[i] * std::conj(g[i]) * h[i];
  }
  forward_transform(work_grid_, acc_, acc_);
  if (work_grid_.size() == grid_.size()) {
    std::copy(acc_.begin(), acc_.end(), out.begin());
  } else {
    const auto truncated = resize_spectrum(work_grid_, acc_, grid_.size());
    std::copy(truncated.begin(), truncated.end(), out.begin());
  }
}

ComplexField eval_trilinear(const TrilinearSpec& c, const ComplexField& u, Dealias dealias) {
  TrilinearOperator op(u.grid, c, dealias);
  auto spec = to_spectral(u);
  ComplexVector out(u.grid.size());
  op.apply(spec.coeffs, out);
  return to_physical(SpectralField(u.grid, std::move(out), u.time));
}

Integrator::Integrator(const GridSpec& grid, const DispersionSpec& d, const TrilinearSpec& c, const SolverConfig& cfg)
    : grid_(grid), cfg_(cfg), dt_(cfg.dt), symbol_(c), op_(grid, c, cfg.dealias) {
  validate(cfg);
  const auto xis = grid.wavenumbers();
  half_phase_.resize(xis.size());
  for (std::size_t k = 0; k < xis.size(); ++k) half_phase_[k] = std::exp(-kI * d.a(xis[k]) * (0.5 * dt_));
  const std::size_t n = grid.size();
  k1_.resize(n);
  k2_.resize(n);
  k3_.resize(n);
  k4_.resize(n);
  tmp_.resize(n);
  phys_.resize(n);
}

void Integrator::nonlinear_rhs(std::span<const Complex> in, std::span<Complex> out) {
  op_.apply(in, out);
  for (auto& v : out) v *= -kI;
}

void Integrator::step_ifrk4(ComplexVector& u) {
  const std::size_t n = u.size();
  const double h = dt_;
  const auto& e = half_phase_;
  if (op_.is_zero()) {
    for (std::size_t k = 0; k < n; ++k) u[k] *= e[k] * e[k];
    return;
  }
  nonlinear_rhs(u, k1_);
  for (std::size_t k = 0; k < n; ++k) tmp_[k] = e[k] * (u[k] + 0.5 * h * k1_[k]);
  nonlinear_rhs(tmp_, k2_);
  for (std::size_t k = 0; k < n; ++k) tmp_[k] = e[k] * u[k] + 0.5 * h * k2_[k];
  nonlinear_rhs(tmp_, k3_);
  for (std::size_t k = 0; k < n; ++k) tmp_[k] = e[k] * e[k] * u[k] + h * e[k] * k3_[k];
  nonlinear_rhs(tmp_, k4_);
  for (std::size_t k = 0; k < n; ++k) {
    const Complex e2 = e[k] * e[k];
    u[k] = e2 * u[k] + (h / 6.0) * (e2 * k1_[k] + 2.0 * e[k] * (k2_[k] + k3_[k]) + k4_[k]);
  }
}

void Integrator::step_strang(ComplexVector& u) {
  const std::size_t n = u.size();
  for (std::size_t k = 0; k < n; ++k) u[k] *= half_phase_[k];
  if (!op_.is_zero()) {
    if (symbol_.is_constant()) {
      const Complex gamma = symbol_.constant_value();
      inverse_transform(grid_, u, phys_);
      for (auto& v : phys_) {
        const double rho0 = std::norm(v);
        if (gamma.imag() == 0.0) {
          v *= std::exp(-kI * gamma.real() * rho0 * dt_);
          continue;
        }
        const double denom = 1.0 - 2.0 * gamma.imag() * rho0 * dt_;
        if (!(denom > 0.0)) {
          v = Complex{std::numeric_limits<double>::infinity(), 0.0};
          continue;
        }
        const double integral = -std::log(denom) / (2.0 * gamma.imag());
        v *= std::exp(-kI * gamma.real() * integral) / std::sqrt(denom);
      }
      forward_transform(grid_, phys_, u);
    } else {
      const double h = dt_;
      nonlinear_rhs(u, k1_);
      for (std::size_t k = 0; k < n; ++k) tmp_[k] = u[k] + 0.5 * h * k1_[k];
      nonlinear_rhs(tmp_, k2_);
      for (std::size_t k = 0; k < n; ++k) tmp_[k] = u[k] + 0.5 * h * k2_[k];
      nonlinear_rhs(tmp_, k3_);
      for (std::size_t k = 0; k < n; ++k) tmp_[k] = u[k] + h * k3_[k];
      nonlinear_rhs(tmp_, k4_);
      for (std::size_t k = 0; k < n; ++k) u[k] += (h / 6.0) * (k1_[k] + 2.0 * (k2_[k] + k3_[k]) + k4_[k]);
    }
  }
  for (std::size_t k = 0; k < n; ++k) u[k] *= half_phase_[k];
}

void Integrator::check_finite(const ComplexVector& u, double t) const {
  const double m = spectral_mass(grid_, u);
  if (!std::isfinite(m)) throw BlowUpError("evolution: non-finite values at t = " + std::to_string(t), t);
  if (reference_mass_ > 0.0 && m > cfg_.blowup_mass_factor * reference_mass_) {
    throw BlowUpError("evolution: mass grew past the blow-up threshold at t = " + std::to_string(t), t);
  }
}

void Integrator::advance(ComplexVector& coeffs, double t) {
  if (coeffs.size() != grid_.size()) throw GridMismatchError("integrator: coefficient count does not match grid");
  if (reference_mass_ <= 0.0) reference_mass_ = spectral_mass(grid_, coeffs);
  if (cfg_.scheme == Scheme::ifrk4) {
    step_ifrk4(coeffs);
  } else {
    step_strang(coeffs);
  }
  check_finite(coeffs, t + dt_);
}

void append_row(EvolutionTrace& trace, const ComplexField& u, bool store_snapshot, std::span<const Probe> probes) {
  TraceRow row;
  row.time = u.time;
  const auto m = densities(u);
  for (double v : m.mass) row.mass += v;
  for (double v : m.momentum) row.momentum += v;
  row.mass *= u.grid.dx();
  row.momentum *= u.grid.dx();
  row.linfty = u.sup_norm();
  const double l6 = integral_pow(u, 6);
  const double bil = gradient_of_mass_sq(u);
  if (!trace.rows.empty()) {
    const auto& prev = trace.rows.back();
    const double h = u.time - prev.time;
    row.l6_accum = prev.l6_accum + 0.5 * h * (trace.last_l6_density + l6);
    row.bilinear_accum = prev.bilinear_accum + 0.5 * h * (trace.last_bilinear_density + bil);
  }
  trace.last_l6_density = l6;
  trace.last_bilinear_density = bil;
  for (const auto& p : probes) p(u, row);
  trace.times.push_back(u.time);
  trace.rows.push_back(row);
  if (store_snapshot) trace.snapshots.push_back(u);
}

ComplexField step(const ComplexField& u, const DispersionSpec& d, const TrilinearSpec& c, const SolverConfig& cfg) {
  SolverConfig one = cfg;
  one.t_end = std::max(cfg.t_end, cfg.dt);
  Integrator integ(u.grid, d, c, one);
  auto spec = to_spectral(u);
  integ.advance(spec.coeffs, u.time);
  spec.time = u.time + cfg.dt;
  return to_physical(spec);
}

EvolutionTrace run(const ComplexField& u0, const DispersionSpec& d, const TrilinearSpec& c, const SolverConfig& cfg,
                   std::span<const Probe> probes) {
  validate(cfg);
  const auto steps = static_cast<std::size_t>(std::max<long long>(1, std::llround(std::ceil(cfg.t_end / cfg.dt - 1e-9))));
  SolverConfig eff = cfg;
  eff.dt = cfg.t_end / static_cast<double>(steps);

  if (eff.scheme == Scheme::ifrk4) {
    const double cap = stability_cap(c, u0);
    if (eff.dt > cap) {
      throw ConfigError("solver: dt = " + std::to_string(eff.dt) + " exceeds the stability cap " + std::to_string(cap));
    }
  }
  if (eff.wrap_guard) check_wraparound(u0);

  EvolutionTrace trace;
  trace.dt = eff.dt;
  Integrator integ(u0.grid, d, c, eff);
  auto coeffs = to_spectral(u0).coeffs;
  const double t0 = u0.time;

  auto record = [&](const ComplexField& u) { append_row(trace, u, cfg.store_snapshots, probes); };

  record(u0);
  for (std::size_t s = 1; s <= steps; ++s) {
    const double t = t0 + static_cast<double>(s - 1) * eff.dt;
    try {
      integ.advance(coeffs, t);
    } catch (const BlowUpError& e) {
      trace.blowup_time = e.time();
      trace.steps = s - 1;
      return trace;
    }
    if (s % cfg.output_stride == 0 || s == steps) {
      auto u = to_physical(SpectralField(u0.grid, coeffs, t0 + static_cast<double>(s) * eff.dt));
      if (eff.wrap_guard) check_wraparound(u);
      record(u);
    }
  }
  trace.steps = steps;
  return trace;
}

}  // namespace cubiclab
