#pragma once

// Hurst-parameter estimators and the shared series utilities they rely on.
// Every estimator is a pure function of an immutable series.

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "lrdchain/error.hpp"
#include "lrdchain/regression.hpp"
#include "lrdchain/series.hpp"

namespace lrd {

enum class Method { RS, RSModified, AggVar, Periodogram, LocalWhittle, Wavelet };

inline constexpr std::array<Method, 6> kAllMethods{Method::RS,          Method::RSModified,
                                                   Method::AggVar,      Method::Periodogram,
                                                   Method::LocalWhittle, Method::Wavelet};

/// Machine name: rs, rs_modified, aggvar, periodogram, local_whittle, wavelet.
std::string_view to_string(Method m) noexcept;
std::optional<Method> parse_method(std::string_view name) noexcept;

struct HurstEstimate {
    Method method = Method::RS;
    double h = 0.0;
    std::optional<double> ci_low;   // 95%
    std::optional<double> ci_high;
    std::optional<ScalingFit> fit;  // regression-based methods only
    std::size_t n_used = 0;
};

/// Minimum lengths per method.
inline constexpr std::size_t kMinLengthRS = 1u << 9;
inline constexpr std::size_t kMinLengthSpectral = 1u << 10;
inline constexpr std::size_t kMinLengthWavelet = 1u << 12;

/// Sample autocorrelation rho(0..max_lag), biased (1/n) autocovariance
/// normalized by the lag-0 value. Throws ConstantSeries.
std::vector<double> acf(std::span<const double> values, std::size_t max_lag);
std::vector<double> acf(const BinarySeries& series, std::size_t max_lag);

/// Periodogram of the centered series at all Fourier frequencies
/// lambda_j = 2 pi j / n, j = 0..n-1, scaled so that its mean equals the
/// (1/n) sample variance.
std::vector<double> periodogram(std::span<const double> values);

enum class RsVariant { Classic, Modified };

HurstEstimate rs_estimate(std::span<const double> values, RsVariant variant);
HurstEstimate aggvar_estimate(std::span<const double> values);
HurstEstimate periodogram_estimate(std::span<const double> values);
HurstEstimate local_whittle_estimate(std::span<const double> values);
HurstEstimate wavelet_estimate(std::span<const double> values);

/// Local Whittle objective at the given H with the default bandwidth.
double local_whittle_objective(std::span<const double> values, double h);

HurstEstimate estimate(Method method, std::span<const double> values);

/// Outcome of one method in a battery run: either an estimate or an error.
struct MethodOutcome {
    Method method = Method::RS;
    std::optional<HurstEstimate> estimate;
    std::optional<ErrorCode> error;
    std::string message;
};

/// Runs each method independently; a failure in one never affects another.
std::vector<MethodOutcome> estimate_all(std::span<const double> values,
                                        std::span<const Method> methods = kAllMethods);

}  // namespace lrd
