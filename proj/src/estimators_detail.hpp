#pragma once

#include <cstddef>
#include <numbers>
#include <span>
#include <vector>

namespace lrd::detail {

bool is_constant(std::span<const double> values);

/// Throws ConstantSeries, then TooShort.
void require_usable(std::span<const double> values, std::size_t min_length, const char* method);

/// Geometric ladder lo, lo*ratio, ... <= hi, rounded to integers, deduplicated.
std::vector<std::size_t> geometric_ladder(double lo, double hi, double ratio);

inline double fourier_frequency(std::size_t j, std::size_t n) {
    return 2.0 * std::numbers::pi * static_cast<double>(j) / static_cast<double>(n);
}

}  // namespace lrd::detail
