#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace cubiclab::fft {

enum class Direction { forward, backward };

/// Unnormalized complex DFT of length in.size():
/// out[k] = sum_j in[j] exp(-+ 2 pi i j k / n). In-place calls are allowed.
/// Plans are created once per (size, direction) and shared between threads.
void transform(std::span<const std::complex<double>> in,
               std::span<std::complex<double>> out, Direction dir);

}  // namespace cubiclab::fft
