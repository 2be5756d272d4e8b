#include "cubiclab/symbols.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "cubiclab/errors.hpp"

namespace cubiclab {

DispersionSpec schrodinger_dispersion() {
  return DispersionSpec{
      "schrodinger",
      [](double xi) { return xi * xi; },
      [](double xi) { return 2.0 * xi; },
      [](double) { return 2.0; },
  };
}

DispersionSpec quartic_dispersion(double beta) {
  return DispersionSpec{
      "quartic",
      [beta](double xi) { return xi * xi + beta * xi * xi * xi * xi; },
      [beta](double xi) { return 2.0 * xi + 4.0 * beta * xi * xi * xi; },
      [beta](double xi) { return 2.0 + 12.0 * beta * xi * xi; },
  };
}

DispersionSpec rescaled_dispersion(const DispersionSpec& d, double xi0, double N) {
  if (!(N > 0.0)) throw ConfigError("rescaled dispersion: N must be positive");
  const double a0 = d.a(xi0);
  const double v0 = d.a1(xi0);
  return DispersionSpec{
      d.name + "~",
      [=, a = d.a](double xi) { return (a(xi0 + N * xi) - a0 - N * xi * v0) / (N * N); },
      [=, a1 = d.a1](double xi) { return (a1(xi0 + N * xi) - v0) / N; },
      [=, a2 = d.a2](double xi) { return a2(xi0 + N * xi); },
  };
}

DispersionCheck check_dispersion(const DispersionSpec& d, std::span<const double> xi_samples) {
  constexpr double h = 1e-4;
  DispersionCheck out;
  out.min_a2 = std::numeric_limits<double>::infinity();
  for (double xi : xi_samples) {
    out.min_a2 = std::min(out.min_a2, d.a2(xi));
    const double fd = (d.a(xi + h) - d.a(xi - h)) / (2.0 * h);
    const double a1 = d.a1(xi);
    out.max_derivative_error = std::max(out.max_derivative_error, std::abs(fd - a1) / (1.0 + std::abs(a1)));
  }
  out.convex = out.min_a2 > 0.0;
  out.derivatives_consistent = out.max_derivative_error <= 1e-6;
  return out;
}

Complex TrilinearSpec::operator()(double xi1, double xi2, double xi3) const {
  Complex s{};
  for (const auto& t : terms) s += t.weight * t.f(xi1) * t.g(xi2) * t.h(xi3);
  return s;
}

bool TrilinearSpec::is_constant() const {
  return std::all_of(terms.begin(), terms.end(),
                     [](const TrilinearTerm& t) { return t.f.identity && t.g.identity && t.h.identity; });
}

Complex TrilinearSpec::constant_value() const {
  Complex s{};
  for (const auto& t : terms) s += t.weight;
  return s;
}

double TrilinearSpec::magnitude_bound(std::span<const double> xi_samples) const {
  double total = 0.0;
  for (const auto& t : terms) {
    double mf = 0.0, mg = 0.0, mh = 0.0;
    for (double xi : xi_samples) {
      mf = std::max(mf, std::abs(t.f(xi)));
      mg = std::max(mg, std::abs(t.g(xi)));
      mh = std::max(mh, std::abs(t.h(xi)));
    }
    total += std::abs(t.weight) * mf * mg * mh;
  }
  return total;
}

TrilinearSpec constant_symbol(Complex gamma) {
  return TrilinearSpec{"const", {TrilinearTerm{gamma, Multiplier::one(), Multiplier::one(), Multiplier::one()}}};
}

TrilinearSpec smoothed_symbol(Complex gamma, double sigma) {
  Multiplier bracket{[sigma](double xi) { return Complex{std::pow(1.0 + xi * xi, -0.5 * sigma), 0.0}; }, false};
  return TrilinearSpec{"smoothed", {TrilinearTerm{gamma, bracket, bracket, bracket}}};
}

TrilinearSpec negated(const TrilinearSpec& c) {
  TrilinearSpec out = c;
  out.name = "-" + c.name;
  for (auto& t : out.terms) t.weight = -t.weight;
  return out;
}

TrilinearSpec rescaled_symbol(const TrilinearSpec& c, double xi0, double N) {
  auto rescale = [xi0, N](const Multiplier& m) {
    if (m.identity) return m;
    return Multiplier{[fn = m.fn, xi0, N](double xi) { return fn(xi0 + N * xi); }, false};
  };
  TrilinearSpec out{c.name + "~", {}};
  for (const auto& t : c.terms) out.terms.push_back({t.weight, rescale(t.f), rescale(t.g), rescale(t.h)});
  return out;
}

SymbolClassification classify(const TrilinearSpec& c, const DispersionSpec& d, std::span<const double> xi_samples) {
  constexpr double h = 1e-5;
  SymbolClassification out;
  out.sample_count = xi_samples.size();
  if (xi_samples.empty()) return out;

  double min_signed = std::numeric_limits<double>::infinity();
  double max_signed = -std::numeric_limits<double>::infinity();
  out.min_real_diag = std::numeric_limits<double>::infinity();
  out.max_real_diag = -std::numeric_limits<double>::infinity();
  for (double xi : xi_samples) {
    const Complex diag = c.diagonal(xi);
    out.max_imag_diag = std::max(out.max_imag_diag, std::abs(diag.imag()));
    const std::array<Complex, 3> grad{
        (c(xi + h, xi, xi) - c(xi - h, xi, xi)) / (2.0 * h),
        (c(xi, xi + h, xi) - c(xi, xi - h, xi)) / (2.0 * h),
        (c(xi, xi, xi + h) - c(xi, xi, xi - h)) / (2.0 * h),
    };
    for (const auto& g : grad) out.max_imag_gradient = std::max(out.max_imag_gradient, std::abs(g.imag()));

    out.min_real_diag = std::min(out.min_real_diag, diag.real());
    out.max_real_diag = std::max(out.max_real_diag, diag.real());
    // The defocusing sign is tied to the convexity convention a'' > 0.
    const double sign = d.a2(xi) >= 0.0 ? 1.0 : -1.0;
    min_signed = std::min(min_signed, sign * diag.real());
    max_signed = std::max(max_signed, sign * diag.real());
  }
  out.max_imag_diag = std::max(out.max_imag_diag, out.max_imag_gradient);
  out.conservative = out.max_imag_diag <= kConservativeTolerance;
  out.defocusing = out.conservative && min_signed > 0.0;
  out.focusing = out.conservative && max_signed < 0.0;
  return out;
}

LegendrePoint legendre_point(const DispersionSpec& d, double v, double xi_max) {
  double lo = -xi_max;
  double hi = xi_max;
  const double f_lo = d.a1(lo) - v;
  const double f_hi = d.a1(hi) - v;
  if (f_lo > 0.0 || f_hi < 0.0) {
    throw RangeError("legendre_point: velocity " + std::to_string(v) + " is outside a'([-" +
                     std::to_string(xi_max) + ", " + std::to_string(xi_max) + "])");
  }
  const double tol = 1e-14 * (1.0 + std::abs(v));
  double xi = std::clamp(0.0, lo, hi);
  for (int iter = 0; iter < 100; ++iter) {
    const double f = d.a1(xi) - v;
    if (std::abs(f) <= tol) return LegendrePoint{v * xi - d.a(xi), xi};
    if (f > 0.0) hi = xi; else lo = xi;
    const double slope = d.a2(xi);
    double next = slope > 0.0 ? xi - f / slope : 0.5 * (lo + hi);
    if (!(next > lo && next < hi)) next = 0.5 * (lo + hi);
    if (next == xi || hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * (1.0 + std::abs(xi))) {
      return LegendrePoint{v * next - d.a(next), next};
    }
    xi = next;
  }
  throw ConvergenceError("legendre_point: no convergence after 100 iterations for v=" + std::to_string(v));
}

bool ResonanceQuad::resonant(double tol) const {
  return std::abs(delta4_xi) <= tol && std::abs(delta4_xi2) <= tol;
}

bool ResonanceQuad::doubly_resonant(double tol) const {
  return std::abs(xi[0] - xi[1]) <= tol && std::abs(xi[0] - xi[2]) <= tol && std::abs(xi[0] - xi[3]) <= tol;
}

ResonanceQuad resonance_residual(const std::array<double, 4>& xi) {
  ResonanceQuad q;
  q.xi = xi;
  q.delta4_xi = xi[0] - xi[1] + xi[2] - xi[3];
  q.delta4_xi2 = xi[0] * xi[0] - xi[1] * xi[1] + xi[2] * xi[2] - xi[3] * xi[3];
  return q;
}

ComplexField apply_multiplier(const ComplexFunction& m, const ComplexField& f) {
  auto g = to_spectral(f);
  for (std::size_t k = 0; k < g.coeffs.size(); ++k) g.coeffs[k] *= m(g.grid.wavenumber(k));
  return to_physical(g);
}

std::optional<DispersionSpec> make_dispersion(std::string_view name, const SymbolParams& p) {
  if (name == "schrodinger") return schrodinger_dispersion();
  if (name == "quartic") return quartic_dispersion(p.beta);
  return std::nullopt;
}

std::optional<TrilinearSpec> make_nonlinearity(std::string_view name, const SymbolParams& p) {
  if (name == "const") return constant_symbol(p.gamma);
  if (name == "smoothed") return smoothed_symbol(p.gamma, p.sigma);
  return std::nullopt;
}

std::vector<CatalogEntry> symbol_catalog() {
  return {
      {"dispersion", "schrodinger", "a(xi) = xi^2"},
      {"dispersion", "quartic", "a(xi) = xi^2 + beta xi^4 (parameter: beta)"},
      {"nonlinearity", "const", "c = gamma (parameters: gamma_re, gamma_im)"},
      {"nonlinearity", "smoothed", "c = gamma <xi1>^-s <xi2>^-s <xi3>^-s (parameters: gamma_re, gamma_im, sigma)"},
  };
}

}  // namespace cubiclab
