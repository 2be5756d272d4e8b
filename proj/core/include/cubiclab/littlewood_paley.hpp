#pragma once

#include <vector>

#include "cubiclab/grid.hpp"

namespace cubiclab {

enum class LPKind { dyadic, lattice };

/// Frequency partition used for Littlewood-Paley pieces.
///
/// Dyadic: region 0 is |xi| <= 1 and region k >= 1 is 2^{k-1} < |xi| <= 2^k.
/// Lattice: region k is the interval [(k - 1/2) unit, (k + 1/2) unit).
/// Cutoffs are sharp, so the pieces of a field are spectrally disjoint and sum
/// back to the field exactly.
struct LPScheme {
  LPKind kind = LPKind::dyadic;
  double delta = 0.5;                  // slow-variation exponent (dyadic)
  double unit = 1.0;                   // interval width (lattice)
  double max_function_constant = 4.0;  // K in M c <= K c (lattice)
};

int region_of(const LPScheme& scheme, double xi);

/// First and last region index met by the grid's frequency lattice.
struct RegionRange {
  int first = 0;
  int last = 0;
  std::size_t count() const { return static_cast<std::size_t>(last - first + 1); }
};
RegionRange region_range(const LPScheme& scheme, const GridSpec& grid);

/// Sharp projection onto region k. Regions outside the grid give the zero field.
ComplexField lp_project(const ComplexField& f, const LPScheme& scheme, int k);

/// L2 norms of every piece, indexed by region - range.first.
std::vector<double> piece_norms(const ComplexField& f, const LPScheme& scheme);

/// Slowly varying l2 sequence c_k with epsilon * c_k >= |u_k|_{L2}.
struct FrequencyEnvelope {
  LPScheme scheme;
  RegionRange range;
  std::vector<double> weights;  // c_k for k in range
  double epsilon = 1.0;          // effective data size the envelope is paired with
  double requested_epsilon = 1.0;

  double weight(int k) const;
  double l2_norm() const;
};

inline constexpr double kEnvelopeFloor = 1e-8;

/// Minimal slowly varying envelope of the piece norms of f.
///
/// Dyadic: c_k = max_j (|u_j| / eps) 2^{-delta |j - k|}. Lattice: iterate
/// c <- max(c, M c / K) to a fixed point, M the discrete centred maximal
/// function. If the result has l2 norm above one it is rescaled to unit norm
/// and `epsilon` is raised by the same factor, so domination is preserved.
/// Entries are finally floored at kEnvelopeFloor.
FrequencyEnvelope compute_envelope(const ComplexField& f, const LPScheme& scheme, double epsilon);

/// Same regularization applied to a raw sequence a_k (= |u_k| / eps).
std::vector<double> regularize_envelope(const LPScheme& scheme, std::vector<double> raw);

/// Discrete centred maximal function: sup over r >= 0 of the mean of c on
/// [k - r, k + r] clipped to the index range.
std::vector<double> maximal_function(const std::vector<double>& c);

}  // namespace cubiclab
