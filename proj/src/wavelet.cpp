#include <array>
#include <bit>
#include <cmath>
#include <numbers>

#include "estimators_detail.hpp"
#include "lrdchain/estimators.hpp"

namespace lrd {

namespace {

// Daubechies 4-tap filters rescaled for the maximal-overlap transform
// (divided by sqrt 2).
struct D4 {
    std::array<double, 4> scaling;
    std::array<double, 4> wavelet;

    D4() {
        const double r3 = std::sqrt(3.0);
        const double norm = 4.0 * std::numbers::sqrt2 * std::numbers::sqrt2;
        scaling = {(1.0 + r3) / norm, (3.0 + r3) / norm, (3.0 - r3) / norm, (1.0 - r3) / norm};
        for (std::size_t l = 0; l < 4; ++l)
            wavelet[l] = (l % 2 == 0 ? 1.0 : -1.0) * scaling[3 - l];
    }
};

constexpr unsigned kFirstOctave = 3;
constexpr unsigned kOctavesDropped = 4;

}  // namespace

// Logscale diagram from an undecimated (circular) D4 transform. The energy
// mu_j = 2^j mean(W_j^2) equals the decimated-DWT detail energy averaged over
// all 2^j shifts; circular filtering keeps it invariant under time reversal.
HurstEstimate wavelet_estimate(std::span<const double> values) {
    detail::require_usable(values, kMinLengthWavelet, "wavelet");
    const std::size_t n = values.size();
    const unsigned last_octave = static_cast<unsigned>(std::bit_width(n) - 1) - kOctavesDropped;

    static const D4 filters;
    std::vector<double> approx(values.begin(), values.end());
    std::vector<double> next(n);
    std::vector<double> xs, ys, weights;
    const double ln2 = std::numbers::ln2;

    for (unsigned j = 1; j <= last_octave; ++j) {
        const std::size_t stride = std::size_t{1} << (j - 1);
        double energy = 0.0;
        for (std::size_t t = 0; t < n; ++t) {
            double w = 0.0, v = 0.0;
            for (std::size_t l = 0; l < 4; ++l) {
                const std::size_t shift = (l * stride) % n;
                const double x = approx[t >= shift ? t - shift : t + n - shift];
                w += filters.wavelet[l] * x;
                v += filters.scaling[l] * x;
            }
            energy += w * w;
            next[t] = v;
        }
        approx.swap(next);
        if (j < kFirstOctave) continue;

        const double mu = std::ldexp(energy / static_cast<double>(n), static_cast<int>(j));
        const double coefficients = std::floor(static_cast<double>(n) / std::ldexp(1.0, static_cast<int>(j)));
        xs.push_back(static_cast<double>(j));
        ys.push_back(std::log2(mu));
        // Var(log2 mu_j) ~ 2 / (n_j ln^2 2)
        weights.push_back(coefficients * ln2 * ln2 / 2.0);
    }

    HurstEstimate est;
    est.method = Method::Wavelet;
    auto fit = fit_weighted(std::move(xs), std::move(ys), weights);
    est.h = (fit.slope + 1.0) / 2.0;
    const double half_width = 1.959963984540054 * fit.slope_stderr / 2.0;
    est.ci_low = est.h - half_width;
    est.ci_high = est.h + half_width;
    est.n_used = n;
    est.fit = std::move(fit);
    return est;
}

}  // namespace lrd
