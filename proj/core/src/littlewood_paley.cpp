#include "cubiclab/littlewood_paley.hpp"

#include <algorithm>
#include <cmath>

#include "cubiclab/errors.hpp"

namespace cubiclab {

int region_of(const LPScheme& scheme, double xi) {
  if (scheme.kind == LPKind::lattice) return static_cast<int>(std::floor(xi / scheme.unit + 0.5));
  const double a = std::abs(xi);
  int k = 0;
  double top = 1.0;
  while (a > top) {
    top *= 2.0;
    ++k;
  }
  return k;
}

RegionRange region_range(const LPScheme& scheme, const GridSpec& grid) {
  if (scheme.kind == LPKind::lattice && !(scheme.unit > 0.0)) throw ConfigError("lattice unit must be positive");
  RegionRange r{region_of(scheme, 0.0), region_of(scheme, 0.0)};
  for (std::size_t k = 0; k < grid.size(); ++k) {
    const int idx = region_of(scheme, grid.wavenumber(k));
    r.first = std::min(r.first, idx);
    r.last = std::max(r.last, idx);
  }
  return r;
}

ComplexField lp_project(const ComplexField& f, const LPScheme& scheme, int k) {
  auto g = to_spectral(f);
  for (std::size_t i = 0; i < g.coeffs.size(); ++i) {
    if (region_of(scheme, g.grid.wavenumber(i)) != k) g.coeffs[i] = 0.0;
  }
  return to_physical(g);
}

std::vector<double> piece_norms(const ComplexField& f, const LPScheme& scheme) {
  const auto range = region_range(scheme, f.grid);
  const auto g = to_spectral(f);
  std::vector<double> sq(range.count(), 0.0);
  for (std::size_t i = 0; i < g.coeffs.size(); ++i) {
    sq[static_cast<std::size_t>(region_of(scheme, g.grid.wavenumber(i)) - range.first)] += std::norm(g.coeffs[i]);
  }
  for (auto& s : sq) s = std::sqrt(s * f.grid.dxi());
  return sq;
}

double FrequencyEnvelope::weight(int k) const {
  if (k < range.first || k > range.last) return 0.0;
  return weights[static_cast<std::size_t>(k - range.first)];
}

double FrequencyEnvelope::l2_norm() const {
  double s = 0.0;
  for (double w : weights) s += w * w;
  return std::sqrt(s);
}

std::vector<double> maximal_function(const std::vector<double>& c) {
  const std::size_t n = c.size();
  std::vector<double> prefix(n + 1, 0.0);
  for (std::size_t i = 0; i < n; ++i) prefix[i + 1] = prefix[i] + c[i];
  std::vector<double> m(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double best = c[k];
    const std::size_t rmax = std::max(k, n - 1 - k);
    for (std::size_t r = 1; r <= rmax; ++r) {
      const std::size_t lo = k >= r ? k - r : 0;
      const std::size_t hi = std::min(n - 1, k + r);
      best = std::max(best, (prefix[hi + 1] - prefix[lo]) / static_cast<double>(hi - lo + 1));
    }
    m[k] = best;
  }
  return m;
}

std::vector<double> regularize_envelope(const LPScheme& scheme, std::vector<double> raw) {
  const std::size_t n = raw.size();
  if (scheme.kind == LPKind::dyadic) {
    std::vector<double> c(n, 0.0);
    for (std::size_t k = 0; k < n; ++k) {
      for (std::size_t j = 0; j < n; ++j) {
        const double dist = std::abs(static_cast<double>(j) - static_cast<double>(k));
        c[k] = std::max(c[k], raw[j] * std::exp2(-scheme.delta * dist));
      }
    }
    return c;
  }

  const double K = scheme.max_function_constant;
  if (!(K >= 1.0)) throw ConfigError("maximal-function constant K must be >= 1");
  std::vector<double> c = std::move(raw);
  for (int iter = 0; iter < 10000; ++iter) {
    const auto m = maximal_function(c);
    double change = 0.0;
    double scale = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
      const double next = std::max(c[k], m[k] / K);
      change = std::max(change, next - c[k]);
      scale = std::max(scale, next);
      c[k] = next;
    }
    if (change <= 1e-15 * scale) break;
  }
  return c;
}

FrequencyEnvelope compute_envelope(const ComplexField& f, const LPScheme& scheme, double epsilon) {
  if (!(epsilon > 0.0)) throw ConfigError("envelope: epsilon must be positive");
  FrequencyEnvelope env;
  env.scheme = scheme;
  env.range = region_range(scheme, f.grid);
  env.requested_epsilon = epsilon;
  env.epsilon = epsilon;

  auto raw = piece_norms(f, scheme);
  for (auto& a : raw) a /= epsilon;
  env.weights = regularize_envelope(scheme, std::move(raw));

  const double norm = env.l2_norm();
  if (norm > 1.0) {
    for (auto& w : env.weights) w /= norm;
    env.epsilon = epsilon * norm;
  }
  for (auto& w : env.weights) w = std::max(w, kEnvelopeFloor);
  // The max with a constant keeps dyadic slow variation; the lattice condition
  // needs one more pass to restore M c <= K c near floored entries.
  if (scheme.kind == LPKind::lattice) env.weights = regularize_envelope(scheme, std::move(env.weights));
  return env;
}

}  // namespace cubiclab
