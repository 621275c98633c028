#pragma once

// Thin RAII layer over FFTW. Planning is serialized (FFTW's planner is not
// thread-safe); execution runs on per-call buffers.

#include <complex>
#include <cstddef>
#include <span>
#include <vector>

namespace lrd::fft {

using Complex = std::complex<double>;

/// Unnormalized forward DFT: X_k = sum_t x_t exp(-2 pi i t k / n).
std::vector<Complex> forward(std::span<const Complex> in);

/// Forward DFT of a real sequence; returns bins 0..n/2.
std::vector<Complex> forward_real(std::span<const double> in);

/// Unnormalized inverse of forward_real for a length-n real output.
std::vector<double> inverse_real(std::span<const Complex> half, std::size_t n);

/// Smallest 2^a 3^b 5^c >= n.
std::size_t good_size(std::size_t n);

}  // namespace lrd::fft
