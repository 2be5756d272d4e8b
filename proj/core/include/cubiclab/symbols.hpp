#pragma once

#include <array>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "cubiclab/grid.hpp"

namespace cubiclab {

using RealFunction = std::function<double(double)>;
using ComplexFunction = std::function<Complex(double)>;

/// Dispersion relation a(xi) with analytic first and second derivatives.
struct DispersionSpec {
  std::string name;
  RealFunction a;
  RealFunction a1;
  RealFunction a2;
};

/// a(xi) = xi^2, i.e. A(D) = -d^2/dx^2.
DispersionSpec schrodinger_dispersion();
/// a(xi) = xi^2 + beta xi^4.
DispersionSpec quartic_dispersion(double beta);

/// Galilean shift plus rescaling around a carrier:
/// a~(xi) = N^{-2} [a(xi0 + N xi) - a(xi0) - N xi a'(xi0)], so a~(0) = a~'(0) = 0.
DispersionSpec rescaled_dispersion(const DispersionSpec& d, double xi0, double N);

struct DispersionCheck {
  double min_a2 = 0.0;
  double max_derivative_error = 0.0;  // |FD(a) - a1| / (1 + |a1|), h = 1e-4
  bool convex = false;
  bool derivatives_consistent = false;
};

/// Samples the convexity and derivative-consistency invariants.
DispersionCheck check_dispersion(const DispersionSpec& d, std::span<const double> xi_samples);

/// Fourier multiplier m(xi). `identity` marks m == 1 so callers can skip work.
struct Multiplier {
  ComplexFunction fn;
  bool identity = false;

  static Multiplier one() { return Multiplier{nullptr, true}; }
  Complex operator()(double xi) const { return identity ? Complex{1.0, 0.0} : fn(xi); }
};

struct TrilinearTerm {
  Complex weight{1.0, 0.0};
  Multiplier f;
  Multiplier g;
  Multiplier h;
};

/// Cubic symbol in separable form, c(x1, x2, x3) = sum_m w_m f_m(x1) g_m(x2) h_m(x3).
struct TrilinearSpec {
  std::string name;
  std::vector<TrilinearTerm> terms;

  std::size_t rank() const { return terms.size(); }
  Complex operator()(double xi1, double xi2, double xi3) const;
  Complex diagonal(double xi) const { return (*this)(xi, xi, xi); }
  /// True when every multiplier is the identity: c is the constant sum of weights.
  bool is_constant() const;
  Complex constant_value() const;
  /// sum_m |w_m| sup|f_m| sup|g_m| sup|h_m| over the sample set.
  double magnitude_bound(std::span<const double> xi_samples) const;
};

TrilinearSpec constant_symbol(Complex gamma);
/// c = gamma * <x1>^{-s} <x2>^{-s} <x3>^{-s}, <x> = (1 + x^2)^{1/2}.
TrilinearSpec smoothed_symbol(Complex gamma, double sigma);
TrilinearSpec negated(const TrilinearSpec& c);
/// c~(x1, x2, x3) = c(xi0 + N x1, xi0 + N x2, xi0 + N x3).
TrilinearSpec rescaled_symbol(const TrilinearSpec& c, double xi0, double N);

struct SymbolClassification {
  bool conservative = false;
  bool defocusing = false;
  bool focusing = false;
  double max_imag_diag = 0.0;      // max of |Im c(xi,xi,xi)| and |Im d_j c(xi,xi,xi)|
  double max_imag_gradient = 0.0;  // gradient part alone
  double min_real_diag = 0.0;
  double max_real_diag = 0.0;
  std::size_t sample_count = 0;
};

inline constexpr double kConservativeTolerance = 1e-8;

/// Conservative: Im c and Im grad c vanish on the sampled diagonal (to 1e-8).
/// Defocusing / focusing: conservative and the diagonal has a strict sign,
/// measured relative to the sign of a''.
SymbolClassification classify(const TrilinearSpec& c, const DispersionSpec& d, std::span<const double> xi_samples);

struct LegendrePoint {
  double phi = 0.0;  // sup_xi { v xi - a(xi) }
  double xi = 0.0;   // a'(xi) = v
};

/// Solves a'(xi) = v on [-xi_max, xi_max] by safeguarded Newton and returns the
/// Legendre transform phi(v) = v xi_v - a(xi_v). Throws RangeError when v is not
/// attained on the bracket, ConvergenceError after 100 iterations.
LegendrePoint legendre_point(const DispersionSpec& d, double v, double xi_max);

struct ResonanceQuad {
  std::array<double, 4> xi{};
  double delta4_xi = 0.0;   // x1 - x2 + x3 - x4
  double delta4_xi2 = 0.0;  // x1^2 - x2^2 + x3^2 - x4^2

  bool resonant(double tol = 0.0) const;
  bool doubly_resonant(double tol = 0.0) const;
};

ResonanceQuad resonance_residual(const std::array<double, 4>& xi);

/// Pointwise spectral multiplication.
ComplexField apply_multiplier(const ComplexFunction& m, const ComplexField& f);

/// Parameters shared by the named symbol library.
struct SymbolParams {
  double beta = 0.1;
  Complex gamma{1.0, 0.0};
  double sigma = 0.5;
};

/// "schrodinger", "quartic".
std::optional<DispersionSpec> make_dispersion(std::string_view name, const SymbolParams& p);
/// "const", "smoothed".
std::optional<TrilinearSpec> make_nonlinearity(std::string_view name, const SymbolParams& p);

struct CatalogEntry {
  std::string kind;
  std::string name;
  std::string description;
};
std::vector<CatalogEntry> symbol_catalog();

}  // namespace cubiclab
