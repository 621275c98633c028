#include "lrdchain/series.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "lrdchain/error.hpp"

namespace lrd {

std::string_view to_string(Generator g) noexcept {
    switch (g) {
        case Generator::Markov: return "markov";
        case Generator::ItMap: return "itmap";
        case Generator::FgnThresholded: return "fgn-thresholded";
        case Generator::Fgn: return "fgn";
        case Generator::External: return "external";
    }
    return "external";
}

double BinarySeries::mean() const noexcept {
    if (symbols.empty()) return 0.0;
    std::size_t ones = 0;
    for (auto s : symbols) ones += s;
    return static_cast<double>(ones) / static_cast<double>(symbols.size());
}

RealSeries to_real(const BinarySeries& series) {
    RealSeries out;
    out.generator = series.generator;
    out.values.assign(series.symbols.begin(), series.symbols.end());
    return out;
}

RealSeries aggregate(std::span<const double> values, std::size_t block) {
    if (block == 0) throw Error(ErrorCode::OutOfRange, "aggregation block must be >= 1");
    if (values.size() < block)
        throw Error(ErrorCode::TooShort, "series shorter than aggregation block");
    RealSeries out;
    const std::size_t blocks = values.size() / block;
    out.values.resize(blocks);
    for (std::size_t b = 0; b < blocks; ++b) {
        auto first = values.begin() + static_cast<std::ptrdiff_t>(b * block);
        out.values[b] = std::accumulate(first, first + static_cast<std::ptrdiff_t>(block), 0.0);
    }
    return out;
}

RealSeries aggregate(const BinarySeries& series, std::size_t block) {
    if (block == 0) throw Error(ErrorCode::OutOfRange, "aggregation block must be >= 1");
    if (series.length() < block)
        throw Error(ErrorCode::TooShort, "series shorter than aggregation block");
    RealSeries out;
    out.generator = series.generator;
    const std::size_t blocks = series.length() / block;
    out.values.resize(blocks);
    const auto* p = series.symbols.data();
    for (std::size_t b = 0; b < blocks; ++b) {
        std::size_t ones = 0;
        for (std::size_t i = 0; i < block; ++i) ones += p[b * block + i];
        out.values[b] = static_cast<double>(ones);
    }
    return out;
}

void require_finite(std::span<const double> values) {
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i]))
            throw Error(ErrorCode::OutOfRange, "non-finite value at index " + std::to_string(i));
    }
}

}  // namespace lrd
