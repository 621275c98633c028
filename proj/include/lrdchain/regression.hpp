#pragma once

#include <span>
#include <vector>

namespace lrd {

/// A straight-line fit in log-log (or log-linear) coordinates.
struct ScalingFit {
    std::vector<double> xs;
    std::vector<double> ys;
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    /// Standard error of the slope (model-based for weighted fits).
    double slope_stderr = 0.0;

    bool flagged() const noexcept { return r2 < 0.9; }
};

/// Ordinary least squares. Requires >= 3 points and strictly increasing xs.
ScalingFit fit_ols(std::vector<double> xs, std::vector<double> ys);

/// Weighted least squares with known per-point variances 1/weight; the
/// slope standard error is sqrt(1 / sum w (x - xbar_w)^2).
ScalingFit fit_weighted(std::vector<double> xs, std::vector<double> ys,
                        std::span<const double> weights);

}  // namespace lrd
