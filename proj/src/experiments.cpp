#include "lrdchain/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <string>
#include <thread>

#include "estimators_detail.hpp"
#include "lrdchain/error.hpp"
#include "parallel.hpp"

namespace lrd {

std::size_t thread_count() {
    if (const char* env = std::getenv("LRD_THREADS")) {
        char* end = nullptr;
        const long v = std::strtol(env, &end, 10);
        if (end != env && *end == '\0' && v > 0) return static_cast<std::size_t>(v);
    }
    return std::max(1u, std::thread::hardware_concurrency());
}

ScalingFit tail_check(const ModelParams& params, std::span<const std::uint64_t> ns) {
    std::vector<double> xs, ys;
    xs.reserve(ns.size());
    ys.reserve(ns.size());
    for (std::uint64_t n : ns) {
        if (n == 0 || n > 100'000'000)
            throw Error(ErrorCode::OutOfRange, "tail_check: n must lie in [1, 1e8]");
        // 1 - F(n) = P(recurrence time > n) = P(jump >= n)
        xs.push_back(std::log(static_cast<double>(n)));
        ys.push_back(std::log(jump_tail(n, params)));
    }
    return fit_ols(std::move(xs), std::move(ys));
}

double tail_prefactor_ratio(const ModelParams& params, std::uint64_t n) {
    const double nd = static_cast<double>(n);
    const double c = (1.0 - params.pi0) / params.pi0;
    return jump_tail(n, params) * std::pow(nd, 1.0 + params.alpha) / (c * params.alpha);
}

double count_variance_prefactor(const ModelParams& params) {
    const double a = params.alpha;
    const double p = params.pi0;
    return 2.0 * a * p * p * (1.0 - p) / ((1.0 - a) * (2.0 - a));
}

namespace {

constexpr std::size_t kMinReplicas = 100;
constexpr double kLadderSpan = 1000.0;
constexpr int kLadderPerDecade = 4;

std::vector<std::uint64_t> count_ladder(std::uint64_t n_max) {
    if (n_max < 10) throw Error(ErrorCode::OutOfRange, "count_variance_check: n_max must be >= 10");
    std::vector<std::uint64_t> ns;
    const double lo = std::max(1.0, static_cast<double>(n_max) / kLadderSpan);
    const double ratio = std::pow(10.0, 1.0 / kLadderPerDecade);
    for (double v = lo; v < static_cast<double>(n_max) * (1.0 - 1e-9); v *= ratio) {
        const auto n = static_cast<std::uint64_t>(std::llround(v));
        if (ns.empty() || n > ns.back()) ns.push_back(n);
    }
    if (ns.empty() || ns.back() != n_max) ns.push_back(n_max);
    return ns;
}

// Counts visits to state 0 at times 1..n for every n on the ladder, for a
// chain started in state 0. `jump` draws the state entered after leaving 0;
// the next visit to 0 then happens jump + 1 steps later.
template <class Jump>
void count_visits(std::span<const std::uint64_t> ladder, std::span<double> out, Jump&& jump) {
    std::uint64_t t = 0;  // time of the most recent visit to 0
    std::uint64_t visits = 0;
    std::size_t next = 0;
    while (next < ladder.size()) {
        const std::uint64_t arrival = t + jump() + 1;
        while (next < ladder.size() && ladder[next] < arrival) out[next++] = static_cast<double>(visits);
        ++visits;
        t = arrival;
    }
}

CountVarianceResult reduce_counts(std::vector<std::uint64_t> ladder,
                                  const std::vector<double>& counts, std::size_t replicas) {
    CountVarianceResult result;
    const std::size_t m = ladder.size();
    result.means.assign(m, 0.0);
    result.variances.assign(m, 0.0);
    // Welford in replica order: the reduction is independent of scheduling.
    for (std::size_t j = 0; j < m; ++j) {
        double mean = 0.0, m2 = 0.0;
        for (std::size_t r = 0; r < replicas; ++r) {
            const double v = counts[r * m + j];
            const double d = v - mean;
            mean += d / static_cast<double>(r + 1);
            m2 += d * (v - mean);
        }
        result.means[j] = mean;
        result.variances[j] = m2 / static_cast<double>(replicas - 1);
    }
    std::vector<double> xs, ys;
    for (std::size_t j = 0; j < m; ++j) {
        if (result.variances[j] <= 0.0) continue;
        xs.push_back(std::log(static_cast<double>(ladder[j])));
        ys.push_back(std::log(result.variances[j]));
    }
    result.fit = fit_ols(std::move(xs), std::move(ys));
    result.ns = std::move(ladder);
    return result;
}

void require_replicas(std::size_t replicas) {
    if (replicas < kMinReplicas)
        throw Error(ErrorCode::OutOfRange, "count_variance_check: need at least 100 replicas");
}

}  // namespace

CountVarianceResult count_variance_check(const ModelParams& params, std::uint64_t n_max,
                                         std::size_t replicas) {
    require_replicas(replicas);
    auto ladder = count_ladder(n_max);
    const std::size_t m = ladder.size();
    const JumpSampler sampler(params);
    std::vector<double> counts(replicas * m);
    detail::parallel_for(replicas, thread_count(), [&](std::size_t r) {
        Rng rng(derive_seed(params.seed, r), 1);
        count_visits(ladder, std::span(counts).subspan(r * m, m),
                     [&] { return sampler.sample_jump(rng); });
    });
    auto result = reduce_counts(std::move(ladder), counts, replicas);
    const double nm = static_cast<double>(n_max);
    result.prefactor_measured = result.variances.back() / std::pow(nm, 2.0 - params.alpha);
    result.prefactor_predicted = count_variance_prefactor(params);
    return result;
}

CountVarianceResult count_variance_check(std::span<const double> jump_law, std::uint64_t seed,
                                         std::uint64_t n_max, std::size_t replicas) {
    require_replicas(replicas);
    if (jump_law.empty()) throw Error(ErrorCode::OutOfRange, "jump law must not be empty");
    std::vector<double> cdf(jump_law.size());
    double total = 0.0;
    for (std::size_t k = 0; k < jump_law.size(); ++k) {
        if (!(jump_law[k] >= 0.0)) throw Error(ErrorCode::OutOfRange, "jump law must be non-negative");
        total += jump_law[k];
        cdf[k] = total;
    }
    if (std::abs(total - 1.0) > 1e-9) throw Error(ErrorCode::OutOfRange, "jump law must sum to 1");
    cdf.back() = 1.0;

    auto ladder = count_ladder(n_max);
    const std::size_t m = ladder.size();
    std::vector<double> counts(replicas * m);
    detail::parallel_for(replicas, thread_count(), [&](std::size_t r) {
        Rng rng(derive_seed(seed, r), 1);
        count_visits(ladder, std::span(counts).subspan(r * m, m), [&] {
            const double u = rng.uniform();
            return static_cast<std::uint64_t>(std::upper_bound(cdf.begin(), cdf.end(), u) - cdf.begin());
        });
    });
    return reduce_counts(std::move(ladder), counts, replicas);
}

AcfSlopeResult acf_slope_check(std::span<const double> values, std::size_t lag_min,
                               std::size_t lag_max) {
    if (lag_min == 0 || lag_max <= lag_min)
        throw Error(ErrorCode::OutOfRange, "acf_slope_check: need 0 < lag_min < lag_max");
    if (values.size() <= lag_max)
        throw Error(ErrorCode::TooShort, "acf_slope_check: series shorter than lag_max");
    if (detail::is_constant(values))
        throw Error(ErrorCode::ConstantSeries, "acf_slope_check: series is constant");

    const auto rho = acf(values, lag_max);
    const auto lags = detail::geometric_ladder(static_cast<double>(lag_min),
                                               static_cast<double>(lag_max), std::pow(10.0, 0.05));
    AcfSlopeResult result;
    std::vector<double> xs, ys;
    for (std::size_t k : lags) {
        if (k > lag_max) break;
        if (rho[k] <= 0.0) {
            result.excluded.push_back(k);
            continue;
        }
        xs.push_back(std::log(static_cast<double>(k)));
        ys.push_back(std::log(rho[k]));
    }
    if (xs.size() < 3)
        throw Error(ErrorCode::NegativeACF, "acf_slope_check: fewer than 3 lags with positive correlation (" +
                                                std::to_string(result.excluded.size()) + " excluded)");
    result.fit = fit_ols(std::move(xs), std::move(ys));
    result.rejected = !result.excluded.empty() || result.fit.flagged();
    return result;
}

AcfSlopeResult acf_slope_check(const BinarySeries& series, std::size_t lag_min, std::size_t lag_max) {
    return acf_slope_check(to_real(series).values, lag_min, lag_max);
}

}  // namespace lrd
