#pragma once

#include <span>
#include <vector>

namespace cubiclab {

struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y = intercept + slope * x. Throws PreconditionError
/// for fewer than two points or degenerate abscissae.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Slope of log y against log x. Requires positive data.
LineFit fit_loglog(std::span<const double> x, std::span<const double> y);

/// Least squares for y = sum_j beta_j * columns[j], solved through the normal
/// equations with partial pivoting. Throws PreconditionError when singular.
std::vector<double> least_squares(const std::vector<std::vector<double>>& columns, std::span<const double> y);

/// Removes 2 pi jumps from a phase sequence.
std::vector<double> unwrap_phase(std::span<const double> phase);

}  // namespace cubiclab
