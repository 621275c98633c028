#include "lrdchain/alt_generators.hpp"

#include <algorithm>
#include <cmath>
#include <complex>

#include "fft.hpp"
#include "lrdchain/error.hpp"

namespace lrd {

namespace {

bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }
bool in_exponent_range(double m) { return m > 1.5 && m < 2.0; }

}  // namespace

void validate(const MapParams& p) {
    if (!in_open_unit(p.d)) throw Error(ErrorCode::OutOfRange, "map threshold d must lie in (0,1)");
    if (!in_exponent_range(p.m1) || !in_exponent_range(p.m2))
        throw Error(ErrorCode::OutOfRange, "map exponents must lie in (3/2, 2)");
    if (p.x0 && !in_open_unit(*p.x0))
        throw Error(ErrorCode::OutOfRange, "map starting point must lie in (0,1)");
}

double map_step(double x, const MapParams& p) {
    double next;
    if (x <= p.d)
        next = x + (1.0 - p.d) / std::pow(p.d, p.m1) * std::pow(x, p.m1);
    else
        next = x - p.d / std::pow(1.0 - p.d, p.m2) * std::pow(1.0 - x, p.m2);
    return std::clamp(next, kMapClamp, 1.0 - kMapClamp);
}

double hurst_to_m(double hurst) {
    if (!(hurst > 0.5 && hurst < 1.0))
        throw Error(ErrorCode::OutOfRange, "Hurst parameter must lie in (1/2, 1)");
    return (4.0 - 2.0 * hurst) / (3.0 - 2.0 * hurst);
}

double m_to_hurst(double m) {
    if (!in_exponent_range(m)) throw Error(ErrorCode::OutOfRange, "map exponent must lie in (3/2, 2)");
    return (3.0 * m - 4.0) / (2.0 * m - 2.0);
}

MapParams map_params_for_hurst(double hurst, std::uint64_t seed, double d) {
    const double m = hurst_to_m(hurst);
    MapParams p;
    p.d = d;
    p.m1 = m;
    p.m2 = m;
    p.seed = seed;
    validate(p);
    return p;
}

ItMapSource::ItMapSource(const MapParams& params)
    : params_(params),
      left_coef_((1.0 - params.d) / std::pow(params.d, params.m1)),
      right_coef_(params.d / std::pow(1.0 - params.d, params.m2)) {
    validate(params_);
    double x;
    if (params_.x0) {
        x = *params_.x0;
    } else {
        Rng rng(params_.seed, 0);
        x = 0.1 + 0.8 * rng.uniform();
    }
    right_ = x > params_.d;
    z_ = std::max(right_ ? 1.0 - x : x, kMapClamp);
    for (std::size_t i = 0; i < kMapTransient; ++i) advance();
}

double ItMapSource::x() const noexcept { return right_ ? 1.0 - z_ : z_; }

// Left half: z = x <= d. Right half: z = 1 - x < 1 - d. Each branch grows z
// away from its marginal fixed point; crossing d switches representation.
void ItMapSource::advance() {
    if (!right_) {
        const double inc = left_coef_ * std::pow(z_, params_.m1);
        if (z_ + inc <= params_.d) {
            z_ = std::max(z_ + inc, kMapClamp);
        } else {
            right_ = true;
            z_ = std::max((1.0 - z_) - inc, kMapClamp);
        }
    } else {
        const double dec = right_coef_ * std::pow(z_, params_.m2);
        if (z_ + dec < 1.0 - params_.d) {
            z_ = std::max(z_ + dec, kMapClamp);
        } else {
            right_ = false;
            z_ = std::max((1.0 - z_) - dec, kMapClamp);
        }
    }
}

std::uint8_t ItMapSource::next() {
    const std::uint8_t y = right_ || z_ >= params_.d;
    advance();
    return y;
}

void ItMapSource::fill(std::span<std::uint8_t> out) {
    for (auto& y : out) y = next();
}

void ItMapSource::fill_block_sums(std::span<double> out, std::size_t block) {
    for (auto& sum : out) {
        std::size_t ones = 0;
        for (std::size_t i = 0; i < block; ++i) ones += next();
        sum = static_cast<double>(ones);
    }
}

BinarySeries map_generate(const MapParams& params, std::size_t n) {
    if (n == 0) throw Error(ErrorCode::OutOfRange, "series length must be >= 1");
    ItMapSource source(params);
    BinarySeries out;
    out.symbols.resize(n);
    source.fill(out.symbols);
    out.generator = Generator::ItMap;
    out.seed = params.seed;
    return out;
}

double fgn_autocovariance(std::size_t k, double hurst) {
    const double h2 = 2.0 * hurst;
    const double kk = static_cast<double>(k);
    if (k == 0) return 1.0;
    return 0.5 * (std::pow(kk + 1.0, h2) - 2.0 * std::pow(kk, h2) + std::pow(kk - 1.0, h2));
}

RealSeries fgn_generate(double hurst, std::size_t n, std::uint64_t seed) {
    if (!in_open_unit(hurst)) throw Error(ErrorCode::OutOfRange, "Hurst parameter must lie in (0,1)");
    if (n < 2) throw Error(ErrorCode::TooShort, "FGN length must be >= 2");

    const std::size_t m = 2 * n;
    std::vector<double> row(m, 0.0);
    for (std::size_t k = 0; k <= n; ++k) row[k] = fgn_autocovariance(k, hurst);
    for (std::size_t k = 1; k < n; ++k) row[m - k] = row[k];

    // Symmetric row: its DFT is real and gives the circulant eigenvalues.
    const auto spectrum = fft::forward_real(row);
    std::vector<double> eig(m);
    for (std::size_t k = 0; k <= m / 2; ++k) eig[k] = spectrum[k].real();
    for (std::size_t k = m / 2 + 1; k < m; ++k) eig[k] = eig[m - k];
    for (double& e : eig) {
        if (e < -1e-10) throw Error(ErrorCode::EmbeddingNotPSD, "circulant embedding is not PSD", e);
        e = std::max(e, 0.0);
    }

    Rng rng(seed, 0);
    std::vector<fft::Complex> w(m);
    const double scale = 1.0 / static_cast<double>(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double re = rng.normal();
        const double im = rng.normal();
        w[k] = std::sqrt(eig[k] * scale) * fft::Complex(re, im);
    }
    const auto y = fft::forward(w);

    RealSeries out;
    out.generator = Generator::Fgn;
    out.values.resize(n);
    for (std::size_t j = 0; j < n; ++j) out.values[j] = y[j].real();
    return out;
}

}  // namespace lrd
