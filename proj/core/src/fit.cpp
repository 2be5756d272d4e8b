#include "cubiclab/fit.hpp"

#include <cmath>
#include <cstddef>

#include "cubiclab/errors.hpp"
#include "cubiclab/grid.hpp"

namespace cubiclab {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionError("fit_line: size mismatch");
  if (x.size() < 2) throw PreconditionError("fit_line: need at least two points");
  const double n = static_cast<double>(x.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
    syy += (y[i] - my) * (y[i] - my);
  }
  if (sxx <= 0.0) throw PreconditionError("fit_line: abscissae are all equal");
  LineFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  fit.r_squared = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
  return fit;
}

LineFit fit_loglog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw PreconditionError("fit_loglog: size mismatch");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw PreconditionError("fit_loglog: data must be positive");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  return fit_line(lx, ly);
}

std::vector<double> least_squares(const std::vector<std::vector<double>>& columns, std::span<const double> y) {
  const std::size_t p = columns.size();
  if (p == 0) throw PreconditionError("least_squares: no columns");
  for (const auto& c : columns) {
    if (c.size() != y.size()) throw PreconditionError("least_squares: size mismatch");
  }
  if (y.size() < p) throw PreconditionError("least_squares: underdetermined system");

  // Normal equations, scaled by column norms for conditioning.
  std::vector<double> scale(p, 1.0);
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (double v : columns[j]) s += v * v;
    scale[j] = s > 0.0 ? 1.0 / std::sqrt(s) : 1.0;
  }
  std::vector<std::vector<double>> a(p, std::vector<double>(p + 1, 0.0));
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      double s = 0.0;
      for (std::size_t i = 0; i < y.size(); ++i) s += columns[r][i] * columns[c][i];
      a[r][c] = s * scale[r] * scale[c];
    }
    double s = 0.0;
    for (std::size_t i = 0; i < y.size(); ++i) s += columns[r][i] * y[i];
    a[r][p] = s * scale[r];
  }
  for (std::size_t col = 0; col < p; ++col) {
    std::size_t piv = col;
    for (std::size_t r = col + 1; r < p; ++r) {
      if (std::abs(a[r][col]) > std::abs(a[piv][col])) piv = r;
    }
    if (std::abs(a[piv][col]) < 1e-13) throw PreconditionError("least_squares: singular design");
    std::swap(a[piv], a[col]);
    for (std::size_t r = 0; r < p; ++r) {
      if (r == col) continue;
      const double f = a[r][col] / a[col][col];
      for (std::size_t c = col; c <= p; ++c) a[r][c] -= f * a[col][c];
    }
  }
  std::vector<double> beta(p);
  for (std::size_t j = 0; j < p; ++j) beta[j] = a[j][p] / a[j][j] * scale[j];
  return beta;
}

std::vector<double> unwrap_phase(std::span<const double> phase) {
  std::vector<double> out(phase.begin(), phase.end());
  double offset = 0.0;
  for (std::size_t i = 1; i < out.size(); ++i) {
    double jump = phase[i] - phase[i - 1];
    offset -= 2.0 * kPi * std::round(jump / (2.0 * kPi));
    out[i] = phase[i] + offset;
  }
  return out;
}

}  // namespace cubiclab
