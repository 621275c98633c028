#include "lrdchain/regression.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "lrdchain/error.hpp"

namespace lrd {

namespace {

void check_shape(const std::vector<double>& xs, const std::vector<double>& ys) {
    if (xs.size() != ys.size()) throw Error(ErrorCode::OutOfRange, "fit: xs and ys differ in length");
    if (xs.size() < 3) throw Error(ErrorCode::TooShort, "fit: need at least 3 points");
    for (std::size_t i = 1; i < xs.size(); ++i)
        if (!(xs[i] > xs[i - 1]))
            throw Error(ErrorCode::OrderingViolation, "fit: xs must be strictly increasing");
}

}  // namespace

ScalingFit fit_ols(std::vector<double> xs, std::vector<double> ys) {
    const std::vector<double> ones(xs.size(), 1.0);
    ScalingFit fit = fit_weighted(std::move(xs), std::move(ys), ones);
    // Replace the unit-variance stderr with the residual-based one.
    const std::size_t n = fit.xs.size();
    double xbar = 0.0;
    for (double x : fit.xs) xbar += x;
    xbar /= static_cast<double>(n);
    double sxx = 0.0;
    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        sxx += (fit.xs[i] - xbar) * (fit.xs[i] - xbar);
        const double r = fit.ys[i] - (fit.intercept + fit.slope * fit.xs[i]);
        sse += r * r;
    }
    fit.slope_stderr = std::sqrt(sse / static_cast<double>(n - 2) / sxx);
    return fit;
}

ScalingFit fit_weighted(std::vector<double> xs, std::vector<double> ys,
                        std::span<const double> weights) {
    check_shape(xs, ys);
    if (weights.size() != xs.size())
        throw Error(ErrorCode::OutOfRange, "fit: weights differ in length");

    double sw = 0.0, swx = 0.0, swy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sw += weights[i];
        swx += weights[i] * xs[i];
        swy += weights[i] * ys[i];
    }
    const double xbar = swx / sw;
    const double ybar = swy / sw;
    double sxx = 0.0, sxy = 0.0, syy = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = xs[i] - xbar;
        const double dy = ys[i] - ybar;
        sxx += weights[i] * dx * dx;
        sxy += weights[i] * dx * dy;
        syy += weights[i] * dy * dy;
    }

    ScalingFit fit;
    fit.slope = sxy / sxx;
    fit.intercept = ybar - fit.slope * xbar;
    fit.r2 = syy > 0.0 ? std::min(1.0, sxy * sxy / (sxx * syy)) : 1.0;
    fit.slope_stderr = std::sqrt(1.0 / sxx);
    fit.xs = std::move(xs);
    fit.ys = std::move(ys);
    return fit;
}

}  // namespace lrd
