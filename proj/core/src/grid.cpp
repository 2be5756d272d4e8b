#include "cubiclab/grid.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <string>

#include "cubiclab/errors.hpp"
#include "cubiclab/fft.hpp"

namespace cubiclab {
namespace {

const double kInvSqrt2Pi = 1.0 / std::sqrt(2.0 * kPi);

}  // namespace

GridSpec::GridSpec(std::size_t n_points, double length) : n_(n_points), length_(length) {
  if (n_points < 16 || !std::has_single_bit(n_points)) {
    throw ConfigError("grid: n_points must be a power of two >= 16, got " + std::to_string(n_points));
  }
  if (!(length > 0.0) || !std::isfinite(length)) {
    throw ConfigError("grid: length must be positive, got " + std::to_string(length));
  }
}

GridSpec make_grid(std::size_t n_points, double length) { return GridSpec(n_points, length); }

std::vector<double> GridSpec::positions() const {
  std::vector<double> xs(n_);
  for (std::size_t i = 0; i < n_; ++i) xs[i] = x(i);
  return xs;
}

std::vector<double> GridSpec::wavenumbers() const {
  std::vector<double> ks(n_);
  for (std::size_t k = 0; k < n_; ++k) ks[k] = wavenumber(k);
  return ks;
}

std::vector<double> GridSpec::frequencies() const {
  std::vector<double> out(n_);
  const long half = static_cast<long>(n_ / 2);
  for (long j = -half; j < half; ++j) out[static_cast<std::size_t>(j + half)] = dxi() * static_cast<double>(j);
  return out;
}

ComplexField::ComplexField(GridSpec g, ComplexVector v, double t)
    : grid(g), values(std::move(v)), time(t) {
  if (values.size() != grid.size()) {
    throw ConfigError("field: value count " + std::to_string(values.size()) +
                      " does not match grid size " + std::to_string(grid.size()));
  }
}

ComplexField::ComplexField(GridSpec g, double t) : grid(g), values(g.size()), time(t) {}

double ComplexField::l2_norm() const {
  double s = 0.0;
  for (const auto& v : values) s += std::norm(v);
  return std::sqrt(s * grid.dx());
}

double ComplexField::sup_norm() const {
  double m = 0.0;
  for (const auto& v : values) m = std::max(m, std::abs(v));
  return m;
}

SpectralField::SpectralField(GridSpec g, ComplexVector c, double t)
    : grid(g), coeffs(std::move(c)), time(t) {
  if (coeffs.size() != grid.size()) {
    throw ConfigError("spectral field: coefficient count does not match grid size");
  }
}

double SpectralField::l2_norm() const {
  double s = 0.0;
  for (const auto& c : coeffs) s += std::norm(c);
  return std::sqrt(s * grid.dxi());
}

void forward_transform(const GridSpec& grid, std::span<const Complex> in, std::span<Complex> out) {
  fft::transform(in, out, fft::Direction::forward);
  // exp(-i xi_j x_0) with x_0 = -L/2 contributes (-1)^j; n is even so the sign
  // depends only on the storage index.
  const double scale = grid.dx() * kInvSqrt2Pi;
  for (std::size_t k = 0; k < out.size(); ++k) out[k] *= (k % 2 == 0) ? scale : -scale;
}

void inverse_transform(const GridSpec& grid, std::span<const Complex> in, std::span<Complex> out) {
  const double scale = grid.dxi() * kInvSqrt2Pi;
  for (std::size_t k = 0; k < in.size(); ++k) out[k] = in[k] * ((k % 2 == 0) ? scale : -scale);
  fft::transform(out, out, fft::Direction::backward);
}

SpectralField to_spectral(const ComplexField& f) {
  ComplexVector c(f.values.size());
  forward_transform(f.grid, f.values, c);
  return SpectralField(f.grid, std::move(c), f.time);
}

ComplexField to_physical(const SpectralField& g) {
  ComplexVector v(g.coeffs.size());
  inverse_transform(g.grid, g.coeffs, v);
  return ComplexField(g.grid, std::move(v), g.time);
}

ComplexVector resize_spectrum(const GridSpec& from, std::span<const Complex> coeffs, std::size_t to_size) {
  ComplexVector out(to_size, Complex{});
  const long half = static_cast<long>(std::min(from.size(), to_size) / 2);
  const long n_from = static_cast<long>(from.size());
  const long n_to = static_cast<long>(to_size);
  for (long j = -half; j < half; ++j) {
    const long src = j >= 0 ? j : j + n_from;
    const long dst = j >= 0 ? j : j + n_to;
    out[static_cast<std::size_t>(dst)] = coeffs[static_cast<std::size_t>(src)];
  }
  return out;
}

Complex spectrum_at(const ComplexField& f, double xi) {
  Complex s{};
  for (std::size_t i = 0; i < f.values.size(); ++i) s += f.values[i] * std::polar(1.0, -xi * f.grid.x(i));
  return s * (f.grid.dx() * kInvSqrt2Pi);
}

Complex value_at(const SpectralField& g, double x) {
  // Walk the modes in ascending order with a unit-modulus recurrence,
  // re-anchoring every 64 modes to bound the accumulated rounding.
  const std::size_t n = g.coeffs.size();
  const long half = static_cast<long>(n / 2);
  const Complex step = std::polar(1.0, g.grid.dxi() * x);
  Complex s{};
  Complex w{};
  for (long j = -half; j < half; ++j) {
    if ((j + half) % 64 == 0) w = std::polar(1.0, g.grid.dxi() * static_cast<double>(j) * x);
    s += g.coeffs[g.grid.storage_index(j)] * w;
    w *= step;
  }
  return s * (g.grid.dxi() * kInvSqrt2Pi);
}

Complex value_at(const ComplexField& f, double x) { return value_at(to_spectral(f), x); }

ComplexField translate(const ComplexField& f, double shift) {
  auto g = to_spectral(f);
  for (std::size_t k = 0; k < g.coeffs.size(); ++k) g.coeffs[k] *= std::polar(1.0, -g.grid.wavenumber(k) * shift);
  return to_physical(g);
}

double boundary_mass_fraction(const ComplexField& f, std::size_t cells) {
  const std::size_t n = f.values.size();
  cells = std::min(cells, n / 2);
  double total = 0.0;
  double edge = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double m = std::norm(f.values[i]);
    total += m;
    if (i < cells || i >= n - cells) edge += m;
  }
  return total > 0.0 ? edge / total : 0.0;
}

void check_wraparound(const ComplexField& f, double threshold, std::size_t cells) {
  const double frac = boundary_mass_fraction(f, cells);
  if (frac >= threshold) {
    throw DomainTooSmallError("wrap-around: " + std::to_string(100.0 * frac) +
                                  "% of the mass lies near the box edge at t=" + std::to_string(f.time),
                              f.time, frac);
  }
}

void require_same_grid(const GridSpec& a, const GridSpec& b) {
  if (!(a == b)) throw GridMismatchError("fields live on different grids");
}

double inner_product_re(const ComplexField& a, const ComplexField& b) {
  require_same_grid(a.grid, b.grid);
  double s = 0.0;
  for (std::size_t i = 0; i < a.values.size(); ++i) s += std::real(std::conj(a.values[i]) * b.values[i]);
  return s * a.grid.dx();
}

}  // namespace cubiclab
