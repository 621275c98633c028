#include <algorithm>
#include <cmath>
#include <sstream>

#include <boost/math/distributions/chi_squared.hpp>

#include "lrdchain/error.hpp"
#include "lrdchain/experiments.hpp"

namespace lrd {

namespace {

// Compensated (Neumaier) running sum.
class Neumaier {
public:
    void add(double v) {
        const double t = sum_ + v;
        comp_ += std::abs(sum_) >= std::abs(v) ? (sum_ - t) + v : (v - t) + sum_;
        sum_ = t;
    }
    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

double rel_err(double got, double want) {
    if (want == 0.0) return std::abs(got);
    return std::abs(got - want) / std::abs(want);
}

CheckResult bounded(std::string name, double measured, double limit, std::string detail = {}) {
    return CheckResult{std::move(name), measured <= limit, measured, limit, std::move(detail)};
}

std::string params_tag(const ModelParams& p) {
    std::ostringstream s;
    s.precision(6);
    s << "pi0=" << p.pi0 << " alpha=" << p.alpha;
    return s.str();
}

constexpr std::uint64_t kAsymptoticPoint = 1'000'000;
constexpr double kAsymptoticTolerance = 1e-3;
constexpr double kBoundaryOffset = 1e-9;
constexpr double kChiSquareLevel = 1e-3;
constexpr double kTailSigmas = 4.0;
constexpr double kMinExpected = 5.0;
constexpr double kScalingTolerance = 0.1;

}  // namespace

std::vector<CheckResult> law_checks(const ModelParams& params, std::uint64_t k_max, double tolerance) {
    validate_params(params.pi0, params.alpha, params.seed);
    const std::string tag = params_tag(params);
    std::vector<CheckResult> out;

    // One pass over k: f_k >= 0, sum_{k<=K} f_k + P(jump > K) = 1, and the
    // balance pi_k = pi_{k+1} + pi0 f_k.
    std::vector<double> pi(k_max + 2);
    pi[0] = equilibrium_pi(0, params);
    Neumaier f_sum;
    double f_min = 1.0;
    double worst = 0.0;
    for (std::uint64_t k = 0; k <= k_max; ++k) {
        const double f = jump_prob(k, params);
        f_min = std::min(f_min, f);
        f_sum.add(f);
        pi[k + 1] = equilibrium_pi(k + 1, params);
        worst = std::max(worst, rel_err(pi[k + 1] + params.pi0 * f, pi[k]));
    }
    f_sum.add(jump_tail(k_max + 1, params));
    out.push_back(CheckResult{"jump law non-negative", f_min >= 0.0, f_min, 0.0, tag});
    out.push_back(bounded("jump law normalization", std::abs(f_sum.value() - 1.0), tolerance, tag));
    out.push_back(bounded("equilibrium recurrence", worst, tolerance, tag));

    // Tail sums accumulated backwards from the closed-form tail at K + 1.
    Neumaier tail;
    tail.add(equilibrium_tail(k_max + 1, params));
    worst = 0.0;
    for (std::uint64_t k = k_max; k >= 1; --k) {
        tail.add(pi[k]);
        const double want = (1.0 - params.pi0) * std::pow(static_cast<double>(k), -params.alpha);
        worst = std::max(worst, rel_err(tail.value(), want));
    }
    tail.add(params.pi0);
    worst = std::max(worst, rel_err(tail.value(), 1.0));
    out.push_back(bounded("equilibrium tail", worst, tolerance, tag));

    const std::uint64_t n_asym = std::min(k_max, kAsymptoticPoint);
    out.push_back(bounded("tail asymptotic ratio",
                          std::abs(tail_prefactor_ratio(params, n_asym) - 1.0), kAsymptoticTolerance,
                          tag + " n=" + std::to_string(n_asym)));

    // Just inside the validity boundary every f_k is still a probability.
    const double edge_pi0 = validity_threshold(params.alpha) + kBoundaryOffset;
    const ModelParams edge{edge_pi0, params.alpha, params.seed};
    double edge_min = 1.0;
    for (std::uint64_t k = 0; k <= k_max; ++k) edge_min = std::min(edge_min, jump_prob(k, edge));
    out.push_back(CheckResult{"boundary non-negative", edge_min >= 0.0, edge_min, 0.0,
                              "threshold + 1e-9 alpha=" + std::to_string(params.alpha)});
    return out;
}

ChiSquare chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected_prob) {
    if (observed.size() != expected_prob.size() || observed.size() < 2)
        throw Error(ErrorCode::OutOfRange, "chi_square: need matching bins (>= 2)");
    std::uint64_t total = 0;
    for (auto c : observed) total += c;
    const double n = static_cast<double>(total);

    // Bins below the minimum expected count are pooled into their right
    // neighbour; a short remainder is pooled into the last kept bin.
    std::vector<double> obs, expect;
    double pending_o = 0.0, pending_e = 0.0;
    for (std::size_t i = 0; i < observed.size(); ++i) {
        pending_o += static_cast<double>(observed[i]);
        pending_e += n * expected_prob[i];
        if (pending_e >= kMinExpected) {
            obs.push_back(pending_o);
            expect.push_back(pending_e);
            pending_o = pending_e = 0.0;
        }
    }
    if (pending_e > 0.0 || pending_o > 0.0) {
        if (expect.empty()) {
            obs.push_back(pending_o);
            expect.push_back(pending_e);
        } else {
            obs.back() += pending_o;
            expect.back() += pending_e;
        }
    }
    ChiSquare result;
    if (expect.size() < 2) return result;
    for (std::size_t i = 0; i < expect.size(); ++i) {
        const double d = obs[i] - expect[i];
        result.statistic += d * d / expect[i];
    }
    result.dof = expect.size() - 1;
    const boost::math::chi_squared dist(static_cast<double>(result.dof));
    result.p_value = boost::math::cdf(boost::math::complement(dist, result.statistic));
    return result;
}

namespace {

// Goodness of fit for one law given bin probabilities, a tail function and
// a draw function.
template <class Prob, class Tail, class Draw>
void law_fit_checks(std::vector<CheckResult>& out, const std::string& label, std::uint64_t draws,
                    Prob&& prob, Tail&& tail, Draw&& draw) {
    constexpr std::size_t kBins = 65;
    static constexpr std::uint64_t kProbes[] = {10, 100, 1000, 10000};
    std::vector<std::uint64_t> counts(kBins + 1, 0);
    std::uint64_t at_least[4] = {};
    for (std::uint64_t i = 0; i < draws; ++i) {
        const std::uint64_t k = draw();
        ++counts[std::min<std::uint64_t>(k, kBins)];
        for (std::size_t p = 0; p < 4; ++p)
            if (k >= kProbes[p]) ++at_least[p];
    }
    std::vector<double> expected(kBins + 1);
    for (std::size_t k = 0; k < kBins; ++k) expected[k] = prob(k);
    expected[kBins] = tail(kBins);

    const auto chi = chi_square(counts, expected);
    std::ostringstream detail;
    detail << "chi2=" << chi.statistic << " dof=" << chi.dof << " draws=" << draws;
    out.push_back(CheckResult{label + " chi-square p-value", chi.p_value >= kChiSquareLevel, chi.p_value,
                              kChiSquareLevel, detail.str()});

    const double n = static_cast<double>(draws);
    for (std::size_t p = 0; p < 4; ++p) {
        const double want = tail(kProbes[p]);
        const double se = std::sqrt(want * (1.0 - want) / n);
        const double got = static_cast<double>(at_least[p]) / n;
        const double z = se > 0.0 ? std::abs(got - want) / se : 0.0;
        std::ostringstream d;
        d << "empirical=" << got << " analytic=" << want;
        out.push_back(bounded(label + " P(X >= " + std::to_string(kProbes[p]) + ") z-score", z, kTailSigmas,
                              d.str()));
    }
}

}  // namespace

std::vector<CheckResult> sampler_checks(const ModelParams& params, std::uint64_t draws) {
    validate_params(params.pi0, params.alpha, params.seed);
    if (draws == 0) throw Error(ErrorCode::OutOfRange, "sampler_checks: draws must be positive");
    const JumpSampler sampler(params);
    std::vector<CheckResult> out;

    Rng jump_rng(params.seed, 2);
    law_fit_checks(
        out, "jump", draws, [&](std::uint64_t k) { return jump_prob(k, params); },
        [&](std::uint64_t k) { return jump_tail(k, params); }, [&] { return sampler.sample_jump(jump_rng); });

    Rng init_rng(params.seed, 3);
    law_fit_checks(
        out, "initial", draws, [&](std::uint64_t k) { return equilibrium_pi(k, params); },
        [&](std::uint64_t k) { return equilibrium_tail(k, params); },
        [&] { return sampler.sample_equilibrium(init_rng); });
    return out;
}

std::vector<CheckResult> scaling_checks(const ModelParams& params, std::uint64_t n, std::size_t replicas,
                                        std::uint64_t n_max) {
    validate_params(params.pi0, params.alpha, params.seed);
    std::vector<CheckResult> out;
    const std::string tag = params_tag(params);

    const auto series = generate(params, n);
    try {
        const auto acf_fit = acf_slope_check(series, 10, 1000);
        const double dev = std::abs(acf_fit.fit.slope + params.alpha);
        std::ostringstream d;
        d << tag << " slope=" << acf_fit.fit.slope << " r2=" << acf_fit.fit.r2
          << " excluded=" << acf_fit.excluded.size();
        out.push_back(bounded("acf slope vs -alpha", dev, kScalingTolerance, d.str()));
    } catch (const Error& e) {
        out.push_back(CheckResult{"acf slope vs -alpha", false, NAN, kScalingTolerance, e.what()});
    }

    const auto cv = count_variance_check(params, n_max, replicas);
    std::ostringstream d;
    d << tag << " slope=" << cv.fit.slope << " r2=" << cv.fit.r2
      << " prefactor measured/predicted=" << cv.prefactor_measured / cv.prefactor_predicted;
    out.push_back(bounded("count variance slope vs 2 - alpha", std::abs(cv.fit.slope - (2.0 - params.alpha)),
                          kScalingTolerance, d.str()));
    return out;
}

}  // namespace lrd
