#include "cubiclab/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "cubiclab/errors.hpp"

namespace cubiclab {
namespace {

const Complex kI{0.0, 1.0};

double l1(const std::vector<double>& v, double dx) {
  double s = 0.0;
  for (double x : v) s += std::abs(x);
  return s * dx;
}

/// Spectral derivative of a real sampled array.
std::vector<double> derivative_real(const GridSpec& g, const std::vector<double>& f) {
  ComplexField c(g);
  for (std::size_t i = 0; i < f.size(); ++i) c.values[i] = f[i];
  const auto d = derivative(c);
  std::vector<double> out(f.size());
  for (std::size_t i = 0; i < f.size(); ++i) out[i] = d.values[i].real();
  return out;
}

void require_snapshots(const EvolutionTrace& trace, std::size_t count, const char* who) {
  if (trace.snapshots.size() < count) {
    throw PreconditionError(std::string(who) + ": needs at least " + std::to_string(count) + " snapshots");
  }
}

double uniform_spacing(const EvolutionTrace& trace, const char* who) {
  const auto& s = trace.snapshots;
  const double h = s[1].time - s[0].time;
  if (!(h > 0.0)) throw PreconditionError(std::string(who) + ": snapshot times must increase");
  for (std::size_t i = 2; i < s.size(); ++i) {
    if (std::abs((s[i].time - s[i - 1].time) - h) > 1e-9 * std::max(1.0, std::abs(h))) {
      throw PreconditionError(std::string(who) + ": snapshots must be equally spaced");
    }
  }
  return h;
}

double trapezoid(const std::vector<double>& t, const std::vector<double>& f) {
  double s = 0.0;
  for (std::size_t i = 1; i < t.size(); ++i) s += 0.5 * (t[i] - t[i - 1]) * (f[i] + f[i - 1]);
  return s;
}

double gradient_term(const ComplexField& uk, const ComplexField& uj) {
  ComplexField prod(uk.grid);
  for (std::size_t i = 0; i < prod.values.size(); ++i) prod.values[i] = uk.values[i] * std::conj(uj.values[i]);
  const auto d = derivative(prod);
  double s = 0.0;
  for (const auto& v : d.values) s += std::norm(v);
  return s * uk.grid.dx();
}

}  // namespace

ComplexField derivative(const ComplexField& u) {
  auto spec = to_spectral(u);
  for (std::size_t k = 0; k < spec.coeffs.size(); ++k) {
    // The Nyquist mode has no symmetric partner; dropping it keeps the
    // derivative of a real field real.
    const bool nyquist = k == spec.coeffs.size() / 2;
    spec.coeffs[k] *= nyquist ? Complex{} : kI * u.grid.wavenumber(k);
  }
  return to_physical(spec);
}

Densities densities(const ComplexField& u) {
  const auto ux = derivative(u);
  const std::size_t n = u.values.size();
  Densities d;
  d.mass.resize(n);
  d.momentum.resize(n);
  d.energy.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    d.mass[i] = std::norm(u.values[i]);
    d.momentum[i] = 2.0 * std::imag(std::conj(u.values[i]) * ux.values[i]);
    d.energy[i] = 4.0 * std::norm(ux.values[i]);
  }
  return d;
}

double total_mass(const ComplexField& u) {
  double s = 0.0;
  for (const auto& v : u.values) s += std::norm(v);
  return s * u.grid.dx();
}

double total_momentum(const ComplexField& u) {
  const auto d = densities(u);
  double s = 0.0;
  for (double v : d.momentum) s += v;
  return s * u.grid.dx();
}

FluxResidual density_flux_residual(const EvolutionTrace& trace, const DispersionSpec& d) {
  require_snapshots(trace, 3, "density_flux_residual");
  const double h = uniform_spacing(trace, "density_flux_residual");
  FluxResidual out;
  for (double xi : {0.3, 1.0, 2.7}) {
    if (std::abs(d.a(xi) - xi * xi) > 1e-12 * (1.0 + xi * xi)) out.applicable = false;
  }

  const GridSpec& g = trace.snapshots.front().grid;
  const double dx = g.dx();
  std::vector<Densities> dens;
  dens.reserve(trace.snapshots.size());
  for (const auto& s : trace.snapshots) {
    require_same_grid(g, s.grid);
    dens.push_back(densities(s));
  }
  const std::size_t n = g.size();
  for (std::size_t i = 1; i + 1 < dens.size(); ++i) {
    const double mass_l1 = l1(dens[i].mass, dx);
    if (mass_l1 == 0.0) continue;
    const auto dp = derivative_real(g, dens[i].momentum);
    const auto mxx = derivative_real(g, derivative_real(g, dens[i].mass));
    std::vector<double> flux(n);
    for (std::size_t x = 0; x < n; ++x) flux[x] = dens[i].energy[x] - mxx[x];
    const auto dflux = derivative_real(g, flux);
    std::vector<double> rm(n), rp(n);
    for (std::size_t x = 0; x < n; ++x) {
      const double mt = (dens[i + 1].mass[x] - dens[i - 1].mass[x]) / (2.0 * h);
      const double pt = (dens[i + 1].momentum[x] - dens[i - 1].momentum[x]) / (2.0 * h);
      rm[x] = mt + dp[x];
      rp[x] = pt + dflux[x];
    }
    out.mass_residual = std::max(out.mass_residual, l1(rm, dx) / mass_l1);
    out.momentum_residual = std::max(out.momentum_residual, l1(rp, dx) / mass_l1);
    ++out.samples;
  }
  return out;
}

StrichartzNorms strichartz_norms(const EvolutionTrace& trace) {
  StrichartzNorms out;
  if (trace.has_snapshots()) {
    std::vector<double> t, p6, p4;
    for (const auto& s : trace.snapshots) {
      double l6 = 0.0;
      for (const auto& v : s.values) l6 += std::pow(std::norm(v), 3);
      const double sup = s.sup_norm();
      t.push_back(s.time);
      p6.push_back(l6 * s.grid.dx());
      p4.push_back(std::pow(sup, 4));
      out.linf_l2 = std::max(out.linf_l2, s.l2_norm());
    }
    out.l6 = std::pow(trapezoid(t, p6), 1.0 / 6.0);
    out.l4_linf = std::pow(trapezoid(t, p4), 0.25);
    return out;
  }
  if (trace.rows.empty()) throw PreconditionError("strichartz_norms: empty trace");
  std::vector<double> t, p4;
  for (const auto& r : trace.rows) {
    t.push_back(r.time);
    p4.push_back(std::pow(r.linfty, 4));
    out.linf_l2 = std::max(out.linf_l2, std::sqrt(r.mass));
  }
  out.l6 = std::pow(trace.rows.back().l6_accum, 1.0 / 6.0);
  out.l4_linf = std::pow(trapezoid(t, p4), 0.25);
  return out;
}

BilinearNorm bilinear_norm(const EvolutionTrace& trace, double x0, BilinearWeight weight) {
  require_snapshots(trace, 1, "bilinear_norm");
  const GridSpec& g = trace.snapshots.front().grid;
  const double dx = g.dx();
  const long n = static_cast<long>(g.size());
  const long shift = std::lround(x0 / dx);
  BilinearNorm out;
  out.x0_used = static_cast<double>(shift) * dx;
  out.snapped = std::abs(out.x0_used - x0) > 1e-12 * std::max(1.0, std::abs(x0));

  std::vector<double> mult(g.size());
  for (std::size_t k = 0; k < g.size(); ++k) {
    const double xi = g.wavenumber(k);
    double m = xi * xi;
    if (weight == BilinearWeight::sobolev_minus_half) m /= std::sqrt(1.0 + xi * xi);
    mult[k] = m;
  }
  std::vector<double> t, f;
  ComplexField v(g);
  for (const auto& s : trace.snapshots) {
    require_same_grid(g, s.grid);
    for (long i = 0; i < n; ++i) {
      const long j = ((i + shift) % n + n) % n;
      v.values[static_cast<std::size_t>(i)] = s.values[static_cast<std::size_t>(i)] * std::conj(s.values[static_cast<std::size_t>(j)]);
    }
    const auto spec = to_spectral(v);
    double acc = 0.0;
    for (std::size_t k = 0; k < g.size(); ++k) acc += mult[k] * std::norm(spec.coeffs[k]);
    t.push_back(s.time);
    f.push_back(acc * g.dxi());
  }
  out.value = t.size() > 1 ? std::sqrt(trapezoid(t, f)) : std::sqrt(f.front());
  return out;
}

double interaction_morawetz(const ComplexField& uk, const ComplexField& uj) {
  require_same_grid(uk.grid, uj.grid);
  const auto dk = densities(uk);
  const auto dj = densities(uj);
  const double dx = uk.grid.dx();
  double cum_m = 0.0, cum_p = 0.0, total = 0.0;
  for (std::size_t y = 0; y < dk.mass.size(); ++y) {
    total += dj.momentum[y] * cum_m - dj.mass[y] * cum_p;
    cum_m += dk.mass[y];
    cum_p += dk.momentum[y];
  }
  return total * dx * dx;
}

std::vector<MorawetzSample> morawetz_rate(const EvolutionTrace& trace, const MorawetzOptions& opts) {
  require_snapshots(trace, 3, "morawetz_rate");
  const double h = uniform_spacing(trace, "morawetz_rate");
  const std::size_t count = trace.snapshots.size();

  std::vector<ComplexField> pk, pj;
  pk.reserve(count);
  pj.reserve(count);
  for (const auto& s : trace.snapshots) {
    if (opts.scheme) {
      pk.push_back(lp_project(s, *opts.scheme, opts.k));
      pj.push_back(opts.k == opts.j ? pk.back() : lp_project(s, *opts.scheme, opts.j));
    } else {
      pk.push_back(s);
      pj.push_back(s);
    }
  }
  std::vector<double> value(count);
  for (std::size_t i = 0; i < count; ++i) value[i] = interaction_morawetz(pk[i], pj[i]);

  const bool diagonal = !opts.scheme || opts.k == opts.j;
  std::vector<MorawetzSample> out;
  for (std::size_t i = 1; i + 1 < count; ++i) {
    MorawetzSample m;
    m.time = trace.snapshots[i].time;
    m.value = value[i];
    m.rate = (value[i + 1] - value[i - 1]) / (2.0 * h);
    m.gradient_term = gradient_term(pk[i], pj[i]);
    if (diagonal) {
      double s = 0.0;
      for (const auto& v : pk[i].values) s += std::pow(std::norm(v), 3);
      m.l6_term = s * pk[i].grid.dx();
    }
    m.predicted = 4.0 * m.gradient_term + 2.0 * opts.diagonal_c * m.l6_term;
    m.residual = m.rate - m.predicted;
    out.push_back(m);
  }
  return out;
}

}  // namespace cubiclab
