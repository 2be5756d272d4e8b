#include "cubiclab/linear.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cubiclab/errors.hpp"
#include "cubiclab/littlewood_paley.hpp"

namespace cubiclab {
namespace {

const Complex kI{0.0, 1.0};

void propagate_in_place(const GridSpec& g, const DispersionSpec& d, double t, std::span<Complex> coeffs) {
  for (std::size_t k = 0; k < coeffs.size(); ++k) coeffs[k] *= std::exp(-kI * (t * d.a(g.wavenumber(k))));
}

struct Packet {
  double xi_center = 0.0;
  double velocity = 0.0;
};

}  // namespace

ComplexField propagate_linear(const ComplexField& u0, const DispersionSpec& d, double t) {
  auto spec = to_spectral(u0);
  propagate_in_place(u0.grid, d, t, spec.coeffs);
  spec.time = u0.time + t;
  return to_physical(spec);
}

Complex AsymptoticProfile::value(std::size_t i) const {
  return gamma[i] * std::exp(kI * phase[i]) * amplitude_factor[i];
}

AsymptoticProfile asymptotic_profile(const ComplexField& u0, const DispersionSpec& d, double t,
                                     std::span<const double> velocities) {
  if (!(t > 0.0)) throw PreconditionError("asymptotic_profile: t must be positive");
  AsymptoticProfile p;
  p.time = t;
  const Complex rot = std::exp(-kI * (kPi / 4.0));
  for (double v : velocities) {
    const auto lp = legendre_point(d, v, u0.grid.max_frequency());
    const double curv = d.a2(lp.xi);
    if (!(curv > 0.0)) throw RangeError("asymptotic_profile: a'' vanishes at the stationary point");
    p.velocities.push_back(v);
    p.gamma.push_back(rot * spectrum_at(u0, lp.xi));
    p.phase.push_back(t * lp.phi);
    p.amplitude_factor.push_back(1.0 / std::sqrt(t * curv));
  }
  return p;
}

Complex stationary_phase_eval(const ComplexField& u0, const DispersionSpec& d, double t, double x, double t_min) {
  if (t < t_min) {
    throw PreconditionError("stationary_phase_eval: t = " + std::to_string(t) + " is below t_min = " +
                            std::to_string(t_min));
  }
  const double v = x / t;
  return asymptotic_profile(u0, d, t, std::span<const double>(&v, 1)).value(0);
}

std::vector<DecaySample> decay_metric(const ComplexField& u0, const DispersionSpec& d, std::span<const double> times) {
  for (std::size_t i = 0; i < times.size(); ++i) {
    if (!(times[i] > 0.0)) throw PreconditionError("decay_metric: times must be positive");
    if (i > 0 && !(times[i] > times[i - 1])) throw PreconditionError("decay_metric: times must be increasing");
  }
  const auto spec0 = to_spectral(u0);
  std::vector<DecaySample> out;
  out.reserve(times.size());
  for (double t : times) {
    auto spec = spec0;
    propagate_in_place(u0.grid, d, t, spec.coeffs);
    spec.time = u0.time + t;
    const auto u = to_physical(spec);
    check_wraparound(u);
    out.push_back(DecaySample{t, u.sup_norm() * std::sqrt(t)});
  }
  return out;
}

double dyadic_probe_frequency(int k) {
  if (k < 0) throw PreconditionError("dyadic region index must be nonnegative");
  return k == 0 ? 0.5 : 0.75 * std::ldexp(1.0, k);
}

double bilinear_scaling_probe(const DispersionSpec& d, int j, int k, double horizon, const BilinearProbeOptions& opts) {
  if (j < 0 || k < 0) throw PreconditionError("bilinear probe: region indices must be nonnegative");
  if (std::abs(j - k) <= 2) {
    throw PreconditionError("bilinear probe: regions " + std::to_string(j) + " and " + std::to_string(k) +
                            " are not separated (need |j - k| > 2)");
  }
  if (!(horizon > 0.0)) throw PreconditionError("bilinear probe: horizon must be positive");
  if (!(opts.sigma_xi > 0.0)) throw PreconditionError("bilinear probe: sigma_xi must be positive");

  const Packet pj{dyadic_probe_frequency(j), d.a1(dyadic_probe_frequency(j))};
  const Packet pk{dyadic_probe_frequency(k), d.a1(dyadic_probe_frequency(k))};
  const double dv = std::abs(pk.velocity - pj.velocity);
  const double sigma_x = 1.0 / (2.0 * opts.sigma_xi);
  if (!(dv * horizon / 2.0 >= 8.0 * sigma_x)) {
    throw PreconditionError("bilinear probe: horizon too short for the packets to separate (need " +
                            std::to_string(16.0 * sigma_x / std::max(dv, 1e-300)) + ")");
  }

  // Box: both trajectories cross at x = 0, t = horizon / 2, plus room for dispersive spreading.
  double curvature = 0.0;
  for (const auto* p : {&pj, &pk}) {
    for (double s = -5.0; s <= 5.0; s += 0.5) curvature = std::max(curvature, std::abs(d.a2(p->xi_center + s * opts.sigma_xi)));
  }
  const double spread = std::sqrt(sigma_x * sigma_x + std::pow(curvature * opts.sigma_xi * horizon, 2));
  double lo = 0.0, hi = 0.0;
  for (const auto* p : {&pj, &pk}) {
    lo = std::min({lo, -p->velocity * horizon / 2.0, p->velocity * horizon / 2.0});
    hi = std::max({hi, -p->velocity * horizon / 2.0, p->velocity * horizon / 2.0});
  }
  const double centre = 0.5 * (lo + hi);
  const double length = (hi - lo) + 24.0 * spread;
  const double xi_need = std::max(pj.xi_center, pk.xi_center) + 10.0 * opts.sigma_xi;
  const double dx_max = 0.9 * kPi / xi_need;
  const auto n = std::bit_ceil(std::max<std::size_t>(64, static_cast<std::size_t>(std::ceil(length / dx_max))));
  const GridSpec grid(n, length);

  const LPScheme dyadic{};
  auto packet = [&](const Packet& p, int region, double amplitude) {
    const double x_start = -p.velocity * horizon / 2.0 - centre;
    ComplexVector c(n);
    for (std::size_t m = 0; m < n; ++m) {
      const double xi = grid.wavenumber(m);
      if (region_of(dyadic, xi) != region) continue;
      const double z = (xi - p.xi_center) / (2.0 * opts.sigma_xi);
      c[m] = std::exp(-z * z) * std::exp(-kI * xi * x_start);
    }
    const double norm = SpectralField(grid, c).l2_norm();
    if (norm == 0.0) throw PreconditionError("bilinear probe: region " + std::to_string(region) + " is not resolved");
    for (auto& v : c) v *= amplitude / norm;
    return c;
  };
  const auto cj = packet(pj, j, 1.0);
  const auto ck = packet(pk, k, opts.second_amplitude);
  if (opts.second_amplitude == 0.0) return 0.0;

  const auto steps = std::max(opts.min_time_samples,
                              static_cast<std::size_t>(std::ceil(4.0 * horizon * dv / sigma_x)));
  const double dt = horizon / static_cast<double>(steps);
  std::vector<double> integrand(steps + 1);
  ComplexVector a(n), b(n);
  for (std::size_t s = 0; s <= steps; ++s) {
    const double t = dt * static_cast<double>(s);
    std::copy(cj.begin(), cj.end(), a.begin());
    std::copy(ck.begin(), ck.end(), b.begin());
    propagate_in_place(grid, d, t, a);
    propagate_in_place(grid, d, t, b);
    inverse_transform(grid, a, a);
    inverse_transform(grid, b, b);
    if (s == 0 || s == steps) {
      check_wraparound(ComplexField(grid, a, t));
      check_wraparound(ComplexField(grid, b, t));
    }
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) acc += std::norm(a[i]) * std::norm(b[i]);
    integrand[s] = acc * grid.dx();
  }
  double total = 0.0;
  for (std::size_t s = 1; s <= steps; ++s) total += 0.5 * dt * (integrand[s] + integrand[s - 1]);
  return std::sqrt(total);
}

}  // namespace cubiclab
