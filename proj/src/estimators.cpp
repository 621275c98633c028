#include "lrdchain/estimators.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "estimators_detail.hpp"

namespace lrd {

namespace detail {

bool is_constant(std::span<const double> values) {
    return std::all_of(values.begin(), values.end(),
                       [first = values.empty() ? 0.0 : values.front()](double v) { return v == first; });
}

void require_usable(std::span<const double> values, std::size_t min_length, const char* method) {
    if (is_constant(values))
        throw Error(ErrorCode::ConstantSeries, std::string(method) + ": series is constant");
    if (values.size() < min_length)
        throw Error(ErrorCode::TooShort, std::string(method) + ": need at least " +
                                             std::to_string(min_length) + " values");
}

std::vector<std::size_t> geometric_ladder(double lo, double hi, double ratio) {
    std::vector<std::size_t> out;
    for (double s = lo; s <= hi * (1.0 + 1e-12); s *= ratio) {
        const auto v = static_cast<std::size_t>(std::llround(s));
        if (out.empty() || v > out.back()) out.push_back(v);
    }
    return out;
}

}  // namespace detail

std::string_view to_string(Method m) noexcept {
    switch (m) {
        case Method::RS: return "rs";
        case Method::RSModified: return "rs_modified";
        case Method::AggVar: return "aggvar";
        case Method::Periodogram: return "periodogram";
        case Method::LocalWhittle: return "local_whittle";
        case Method::Wavelet: return "wavelet";
    }
    return "rs";
}

std::optional<Method> parse_method(std::string_view name) noexcept {
    for (Method m : kAllMethods)
        if (to_string(m) == name) return m;
    return std::nullopt;
}

namespace {

constexpr double kMinScale = 10.0;
constexpr double kLadderRatio = 1.4142135623730951;
// R/S windows run up to n/4. Aggregated variance keeps >= 100 blocks per
// level (at least three levels in all).
constexpr double kRsMaxFraction = 4.0;
constexpr double kAggVarMinBlocks = 100.0;
constexpr double kAggVarMinTop = 20.0;
// Modified R/S keeps the middle of the log-scale range.
constexpr double kModifiedTrim = 0.15;

// Mean rescaled adjusted range over all disjoint windows of length s.
std::optional<double> mean_rescaled_range(std::span<const double> x, std::size_t s) {
    const std::size_t windows = x.size() / s;
    double total = 0.0;
    std::size_t used = 0;
    for (std::size_t w = 0; w < windows; ++w) {
        const auto win = x.subspan(w * s, s);
        double mean = 0.0;
        for (double v : win) mean += v;
        mean /= static_cast<double>(s);
        double cum = 0.0, hi = 0.0, lo = 0.0, ss = 0.0;
        for (double v : win) {
            const double dev = v - mean;
            cum += dev;
            hi = std::max(hi, cum);
            lo = std::min(lo, cum);
            ss += dev * dev;
        }
        if (ss <= 0.0) continue;
        total += (hi - lo) / std::sqrt(ss / static_cast<double>(s));
        ++used;
    }
    if (used == 0) return std::nullopt;
    return total / static_cast<double>(used);
}

// Sample variance of the means of the n / m disjoint blocks starting at offset.
double block_mean_variance(std::span<const double> x, std::size_t m, std::size_t offset) {
    const std::size_t k = (x.size() - offset) / m;
    std::vector<double> means(k);
    for (std::size_t b = 0; b < k; ++b) {
        double sum = 0.0;
        for (std::size_t i = 0; i < m; ++i) sum += x[offset + b * m + i];
        means[b] = sum / static_cast<double>(m);
    }
    double grand = 0.0;
    for (double v : means) grand += v;
    grand /= static_cast<double>(k);
    double var = 0.0;
    for (double v : means) var += (v - grand) * (v - grand);
    return var / static_cast<double>(k - 1);
}

}  // namespace

HurstEstimate rs_estimate(std::span<const double> values, RsVariant variant) {
    detail::require_usable(values, kMinLengthRS, "rs");
    const std::size_t n = values.size();
    const double max_scale = static_cast<double>(n) / kRsMaxFraction;
    const auto scales = detail::geometric_ladder(kMinScale, max_scale, kLadderRatio);

    double log_lo = std::log10(kMinScale);
    double log_hi = std::log10(max_scale);
    if (variant == RsVariant::Modified) {
        const double trim = kModifiedTrim * (log_hi - log_lo);
        log_lo += trim;
        log_hi -= trim;
    }

    std::vector<double> xs, ys;
    for (std::size_t s : scales) {
        const double ls = std::log10(static_cast<double>(s));
        if (ls < log_lo - 1e-12 || ls > log_hi + 1e-12) continue;
        if (auto rs = mean_rescaled_range(values, s); rs && *rs > 0.0) {
            xs.push_back(ls);
            ys.push_back(std::log10(*rs));
        }
    }

    HurstEstimate est;
    est.method = variant == RsVariant::Classic ? Method::RS : Method::RSModified;
    auto fit = fit_ols(std::move(xs), std::move(ys));
    est.h = fit.slope;
    est.n_used = n;
    est.fit = std::move(fit);
    return est;
}

HurstEstimate aggvar_estimate(std::span<const double> values) {
    detail::require_usable(values, kMinLengthSpectral, "aggvar");
    const std::size_t n = values.size();
    const auto blocks = detail::geometric_ladder(
        kMinScale, std::max(kAggVarMinTop, static_cast<double>(n) / kAggVarMinBlocks), kLadderRatio);

    std::vector<double> xs, ys;
    for (std::size_t m : blocks) {
        // Blocks aligned to the start and to the end of the series; their
        // average is unchanged by time reversal.
        const double var = 0.5 * (block_mean_variance(values, m, 0) +
                                  block_mean_variance(values, m, n % m));
        if (var <= 0.0) continue;
        xs.push_back(std::log10(static_cast<double>(m)));
        ys.push_back(std::log10(var));
    }

    HurstEstimate est;
    est.method = Method::AggVar;
    auto fit = fit_ols(std::move(xs), std::move(ys));
    est.h = 1.0 + fit.slope / 2.0;
    est.n_used = n;
    est.fit = std::move(fit);
    return est;
}

HurstEstimate estimate(Method method, std::span<const double> values) {
    switch (method) {
        case Method::RS: return rs_estimate(values, RsVariant::Classic);
        case Method::RSModified: return rs_estimate(values, RsVariant::Modified);
        case Method::AggVar: return aggvar_estimate(values);
        case Method::Periodogram: return periodogram_estimate(values);
        case Method::LocalWhittle: return local_whittle_estimate(values);
        case Method::Wavelet: return wavelet_estimate(values);
    }
    throw Error(ErrorCode::OutOfRange, "unknown estimator");
}

std::vector<MethodOutcome> estimate_all(std::span<const double> values,
                                        std::span<const Method> methods) {
    std::vector<MethodOutcome> out;
    out.reserve(methods.size());
    for (Method m : methods) {
        MethodOutcome outcome;
        outcome.method = m;
        try {
            outcome.estimate = estimate(m, values);
        } catch (const Error& e) {
            outcome.error = e.code();
            outcome.message = e.what();
        }
        out.push_back(std::move(outcome));
    }
    return out;
}

}  // namespace lrd
