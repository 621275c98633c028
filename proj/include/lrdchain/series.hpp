#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

namespace lrd {

struct ModelParams;

enum class Generator { Markov, ItMap, FgnThresholded, Fgn, External };

std::string_view to_string(Generator g) noexcept;

/// Finite run of {0,1} symbols. One byte per symbol; packing only happens
/// at the I/O boundary.
struct BinarySeries {
    std::vector<std::uint8_t> symbols;
    Generator generator = Generator::External;
    std::optional<double> pi0;    // provenance when generator == Markov
    std::optional<double> alpha;
    std::optional<std::uint64_t> seed;

    std::size_t length() const noexcept { return symbols.size(); }
    double mean() const noexcept;
};

struct RealSeries {
    std::vector<double> values;
    Generator generator = Generator::External;

    std::size_t length() const noexcept { return values.size(); }
};

/// Identity conversion of symbols to reals.
RealSeries to_real(const BinarySeries& series);

/// Non-overlapping block sums; a trailing partial block is dropped.
RealSeries aggregate(std::span<const double> values, std::size_t block);
RealSeries aggregate(const BinarySeries& series, std::size_t block);

/// Throws OutOfRange if any value is NaN or infinite.
void require_finite(std::span<const double> values);

}  // namespace lrd
