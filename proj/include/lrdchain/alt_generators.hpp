#pragma once

// Reference long-range-dependent generators: the double intermittency map
// and fractional Gaussian noise.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>

#include "lrdchain/rng.hpp"
#include "lrdchain/series.hpp"

namespace lrd {

/// Double intermittency map
///
///   x' = x + ((1-d)/d^m1) x^m1        x <= d
///   x' = x - (d/(1-d)^m2) (1-x)^m2    x >  d
///
/// thresholded at d: y = 0 if x < d, 1 otherwise.
struct MapParams {
    double d = 0.5;
    double m1 = 5.0 / 3.0;
    double m2 = 5.0 / 3.0;
    std::optional<double> x0;  // drawn uniformly from (0.1, 0.9) when unset
    std::uint64_t seed = 0;
};

inline constexpr double kMapClamp = 1e-15;
inline constexpr std::size_t kMapTransient = 10'000;

/// Throws OutOfRange unless d, x0 lie in (0,1) and m1, m2 in (3/2, 2).
void validate(const MapParams& params);

/// One iteration, clamped to [kMapClamp, 1 - kMapClamp]. x == d takes the
/// left branch.
double map_step(double x, const MapParams& params);

/// m = (4 - 2H) / (3 - 2H), the inverse of H = (3m - 4) / (2m - 2).
double hurst_to_m(double hurst);
double m_to_hurst(double m);

/// Symmetric map (m1 = m2 = hurst_to_m(H)) with the default threshold.
MapParams map_params_for_hurst(double hurst, std::uint64_t seed, double d = 0.5);

/// Streaming map generator. Mathematically identical to iterating
/// map_step; near 1 the orbit is tracked through 1 - x, which doubles
/// could not otherwise resolve (x = 1 - u is stuck once b u^m2 drops below
/// half an ulp of 1).
class ItMapSource {
public:
    /// Discards kMapTransient iterations before the first emitted symbol.
    explicit ItMapSource(const MapParams& params);

    double x() const noexcept;
    std::uint8_t next();
    void fill(std::span<std::uint8_t> out);
    void fill_block_sums(std::span<double> out, std::size_t block);

private:
    void advance();

    MapParams params_;
    double left_coef_;
    double right_coef_;
    // The orbit is stored as its distance from the nearer marginal fixed
    // point, so both laminar phases keep full relative precision.
    double z_ = 0.0;
    bool right_ = false;
};

BinarySeries map_generate(const MapParams& params, std::size_t n);

/// Autocovariance of unit-variance FGN at lag k.
double fgn_autocovariance(std::size_t k, double hurst);

/// Exact FGN by circulant embedding (embedding size 2n). Throws
/// EmbeddingNotPSD if an eigenvalue falls below -1e-10.
RealSeries fgn_generate(double hurst, std::size_t n, std::uint64_t seed);

}  // namespace lrd
