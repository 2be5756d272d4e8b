#pragma once

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace cubiclab {

using Complex = std::complex<double>;
using ComplexVector = std::vector<Complex>;

inline constexpr double kPi = 3.14159265358979323846;

/// Periodic grid on [-L/2, L/2) and its frequency lattice xi_j = 2 pi j / L,
/// j in [-n/2, n/2).
///
/// Spectral arrays are stored in FFT order: storage index k holds the signed
/// mode j = k for k < n/2 and j = k - n otherwise. `wavenumber(k)` maps a
/// storage index to its frequency, `frequencies()` lists them ascending.
class GridSpec {
 public:
  /// Throws ConfigError unless n_points is a power of two >= 16 and length > 0.
  GridSpec(std::size_t n_points, double length);

  std::size_t size() const noexcept { return n_; }
  double length() const noexcept { return length_; }
  double dx() const noexcept { return length_ / static_cast<double>(n_); }
  double dxi() const noexcept { return 2.0 * kPi / length_; }
  double x(std::size_t i) const noexcept { return -0.5 * length_ + static_cast<double>(i) * dx(); }

  long mode(std::size_t k) const noexcept {
    return k < n_ / 2 ? static_cast<long>(k) : static_cast<long>(k) - static_cast<long>(n_);
  }
  std::size_t storage_index(long mode) const noexcept {
    return mode >= 0 ? static_cast<std::size_t>(mode) : static_cast<std::size_t>(mode + static_cast<long>(n_));
  }
  double wavenumber(std::size_t k) const noexcept { return dxi() * static_cast<double>(mode(k)); }
  double max_frequency() const noexcept { return dxi() * static_cast<double>(n_ / 2); }

  std::vector<double> positions() const;
  /// Frequencies in storage order.
  std::vector<double> wavenumbers() const;
  /// Frequencies ascending, j = -n/2 ... n/2 - 1.
  std::vector<double> frequencies() const;

  bool operator==(const GridSpec&) const = default;

 private:
  std::size_t n_;
  double length_;
};

GridSpec make_grid(std::size_t n_points, double length);

/// u(t, x_i) sampled on a grid.
struct ComplexField {
  ComplexField(GridSpec g, ComplexVector v, double t = 0.0);
  explicit ComplexField(GridSpec g, double t = 0.0);

  GridSpec grid;
  ComplexVector values;
  double time = 0.0;

  /// sqrt(sum |u|^2 dx)
  double l2_norm() const;
  double sup_norm() const;
};

/// Unitary-normalized Fourier coefficients u_hat(xi_j), stored in FFT order.
struct SpectralField {
  SpectralField(GridSpec g, ComplexVector c, double t = 0.0);

  GridSpec grid;
  ComplexVector coeffs;
  double time = 0.0;

  /// sqrt(sum |u_hat|^2 * 2 pi / L)
  double l2_norm() const;
};

/// Forward transform, u_hat(xi) = dx / sqrt(2 pi) * sum_i u(x_i) exp(-i xi x_i).
SpectralField to_spectral(const ComplexField& f);
/// Inverse of to_spectral.
ComplexField to_physical(const SpectralField& g);

/// Raw-array versions used by the time steppers; `out` may alias `in`.
void forward_transform(const GridSpec& grid, std::span<const Complex> in, std::span<Complex> out);
void inverse_transform(const GridSpec& grid, std::span<const Complex> in, std::span<Complex> out);

/// Zero-pad (or truncate) unitary coefficients from grid `from` onto a grid with the
/// same length and `to_size` points, keeping signed modes in [-n/2, n/2) of the smaller grid.
ComplexVector resize_spectrum(const GridSpec& from, std::span<const Complex> coeffs, std::size_t to_size);

/// Continuous Fourier transform of the sampled field at an arbitrary frequency.
/// For a field supported inside the box this is the band-limited interpolant of
/// the discrete spectrum.
Complex spectrum_at(const ComplexField& f, double xi);

/// Trigonometric interpolant of the field at an arbitrary position (periodic).
Complex value_at(const SpectralField& g, double x);
Complex value_at(const ComplexField& f, double x);

/// Periodic translate by an arbitrary distance: result(x) = f(x - shift).
ComplexField translate(const ComplexField& f, double shift);

/// Fraction of the L2 mass that lies within `cells` grid cells of either end of the box.
double boundary_mass_fraction(const ComplexField& f, std::size_t cells = 10);

/// Throws DomainTooSmallError when boundary_mass_fraction exceeds `threshold`.
void check_wraparound(const ComplexField& f, double threshold = 0.01, std::size_t cells = 10);

/// Throws GridMismatchError when the grids differ.
void require_same_grid(const GridSpec& a, const GridSpec& b);

/// Real part of the L2 inner product sum conj(a) b dx.
double inner_product_re(const ComplexField& a, const ComplexField& b);

}  // namespace cubiclab
