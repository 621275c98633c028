#include <algorithm>
#include <cmath>
#include <numeric>

#include "estimators_detail.hpp"
#include "fft.hpp"
#include "lrdchain/estimators.hpp"

#include <boost/math/tools/toms748_solve.hpp>

namespace lrd {

std::vector<double> acf(std::span<const double> values, std::size_t max_lag) {
    const std::size_t n = values.size();
    if (max_lag < 1 || n <= max_lag)
        throw Error(ErrorCode::TooShort, "acf requires length > max_lag >= 1");
    if (detail::is_constant(values)) throw Error(ErrorCode::ConstantSeries, "acf of a constant series");

    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    const std::size_t size = fft::good_size(n + max_lag);
    std::vector<double> padded(size, 0.0);
    for (std::size_t i = 0; i < n; ++i) padded[i] = values[i] - mean;

    auto spectrum = fft::forward_real(padded);
    for (auto& c : spectrum) c = fft::Complex(std::norm(c), 0.0);
    const auto autocov = fft::inverse_real(spectrum, size);

    std::vector<double> rho(max_lag + 1);
    for (std::size_t k = 0; k <= max_lag; ++k) rho[k] = autocov[k] / autocov[0];
    rho[0] = 1.0;
    return rho;
}

std::vector<double> acf(const BinarySeries& series, std::size_t max_lag) {
    const RealSeries real = to_real(series);
    return acf(real.values, max_lag);
}

std::vector<double> periodogram(std::span<const double> values) {
    const std::size_t n = values.size();
    if (n < 2) throw Error(ErrorCode::TooShort, "periodogram requires at least 2 values");
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(n);
    std::vector<double> centered(values.begin(), values.end());
    for (double& v : centered) v -= mean;

    const auto half = fft::forward_real(centered);
    std::vector<double> out(n);
    const double scale = 1.0 / static_cast<double>(n);
    for (std::size_t j = 0; j < half.size(); ++j) out[j] = std::norm(half[j]) * scale;
    for (std::size_t j = half.size(); j < n; ++j) out[j] = out[n - j];
    return out;
}

HurstEstimate periodogram_estimate(std::span<const double> values) {
    detail::require_usable(values, kMinLengthSpectral, "periodogram");
    const std::size_t n = values.size();
    const auto ordinates = periodogram(values);

    const std::size_t count = std::max<std::size_t>(3, (n / 2) / 10);
    std::vector<double> xs, ys;
    xs.reserve(count);
    ys.reserve(count);
    for (std::size_t j = 1; j <= count; ++j) {
        if (!(ordinates[j] > 0.0)) continue;
        xs.push_back(std::log10(detail::fourier_frequency(j, n)));
        ys.push_back(std::log10(ordinates[j]));
    }

    HurstEstimate est;
    est.method = Method::Periodogram;
    auto fit = fit_ols(std::move(xs), std::move(ys));
    est.h = (1.0 - fit.slope) / 2.0;
    est.n_used = n;
    est.fit = std::move(fit);
    return est;
}

namespace {

// Local Whittle in terms of d = 2H - 1 over frequencies lambda_1..lambda_m:
//   R(d) = log(mean_j lambda_j^d I_j) - d mean_j log lambda_j.
// R is convex in d, so its minimizer is the unique root of
//   R'(d) = sum_j c_j w_j / sum_j w_j,  c_j = log lambda_j - mean log lambda,
//   w_j = exp(d c_j) I_j.
struct WhittleBand {
    std::vector<double> centered_log_freq;
    std::vector<double> ordinates;
    double mean_log_freq = 0.0;

    WhittleBand(std::span<const double> values, std::size_t m) {
        const std::size_t n = values.size();
        const auto ordinates_all = periodogram(values);
        centered_log_freq.resize(m);
        ordinates.resize(m);
        for (std::size_t j = 1; j <= m; ++j) {
            centered_log_freq[j - 1] = std::log(detail::fourier_frequency(j, n));
            ordinates[j - 1] = ordinates_all[j];
        }
        mean_log_freq = std::accumulate(centered_log_freq.begin(), centered_log_freq.end(), 0.0) /
                        static_cast<double>(m);
        for (double& c : centered_log_freq) c -= mean_log_freq;
    }

    double objective(double d) const {
        double sum = 0.0;
        for (std::size_t j = 0; j < ordinates.size(); ++j)
            sum += std::exp(d * centered_log_freq[j]) * ordinates[j];
        // log(mean lambda^d I) - d mean log lambda, with lambda^d = e^{d mean} e^{d c}
        return std::log(sum / static_cast<double>(ordinates.size()));
    }

    double derivative(double d) const {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t j = 0; j < ordinates.size(); ++j) {
            const double w = std::exp(d * centered_log_freq[j]) * ordinates[j];
            num += centered_log_freq[j] * w;
            den += w;
        }
        return num / den;
    }
};

constexpr double kWhittleLowerH = 0.01;
constexpr double kWhittleUpperH = 0.99;

std::size_t whittle_bandwidth(std::size_t n) {
    return static_cast<std::size_t>(std::floor(std::pow(static_cast<double>(n), 0.65)));
}

}  // namespace

double local_whittle_objective(std::span<const double> values, double h) {
    detail::require_usable(values, kMinLengthSpectral, "local_whittle");
    const WhittleBand band(values, whittle_bandwidth(values.size()));
    return band.objective(2.0 * h - 1.0);
}

HurstEstimate local_whittle_estimate(std::span<const double> values) {
    detail::require_usable(values, kMinLengthSpectral, "local_whittle");
    const std::size_t n = values.size();
    const std::size_t m = whittle_bandwidth(n);
    const WhittleBand band(values, m);

    const double d_lo = 2.0 * kWhittleLowerH - 1.0;
    const double d_hi = 2.0 * kWhittleUpperH - 1.0;
    const double g_lo = band.derivative(d_lo);
    const double g_hi = band.derivative(d_hi);
    if (!(g_lo < 0.0 && g_hi > 0.0))
        throw Error(ErrorCode::NoConvergence, "local Whittle objective has no interior minimum");

    std::uintmax_t iterations = 200;
    const auto [a, b] = boost::math::tools::toms748_solve(
        [&band](double d) { return band.derivative(d); }, d_lo, d_hi, g_lo, g_hi,
        boost::math::tools::eps_tolerance<double>(50), iterations);
    if (iterations >= 200)
        throw Error(ErrorCode::NoConvergence, "local Whittle root search did not converge");

    HurstEstimate est;
    est.method = Method::LocalWhittle;
    est.h = (0.5 * (a + b) + 1.0) / 2.0;
    const double half_width = 1.959963984540054 / (2.0 * std::sqrt(static_cast<double>(m)));
    est.ci_low = est.h - half_width;
    est.ci_high = est.h + half_width;
    est.n_used = n;
    return est;
}

}  // namespace lrd
