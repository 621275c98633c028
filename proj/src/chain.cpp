#include "lrdchain/chain.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <sstream>

#include "lrdchain/error.hpp"

namespace lrd {

namespace {

bool in_open_unit(double v) { return v > 0.0 && v < 1.0; }

double neg_power(double k, double alpha) { return std::exp(-alpha * std::log(k)); }

// Short windows far out in the tail (lo / width > kCancellationLimit) are
// summed state by state; elsewhere a window's mass is the difference of two
// closed-form tails.
constexpr std::uint64_t kDirectSumWidth = 64;
constexpr std::uint64_t kCancellationLimit = 10'000;

bool sum_directly(std::uint64_t lo, std::uint64_t hi) {
    const std::uint64_t width = hi - lo + 1;
    return width <= kDirectSumWidth && lo / width > kCancellationLimit;
}

}  // namespace

double validity_threshold(double alpha) {
    const double two_a = std::exp2(alpha);
    return std::expm1(alpha * std::log(2.0)) / (2.0 * two_a - 1.0);
}

ModelParams validate_params(double pi0, double alpha, std::uint64_t seed) {
    if (!in_open_unit(pi0) || !in_open_unit(alpha)) {
        std::ostringstream msg;
        msg << "pi0 and alpha must lie in (0,1); got pi0=" << pi0 << " alpha=" << alpha;
        throw Error(ErrorCode::OutOfRange, msg.str());
    }
    const double threshold = validity_threshold(alpha);
    if (pi0 <= threshold) {
        std::ostringstream msg;
        msg.precision(10);
        msg << "pi0=" << pi0 << " is outside the valid region for alpha=" << alpha
            << "; pi0 must exceed " << threshold;
        throw Error(ErrorCode::InvalidRegion, msg.str(), threshold);
    }
    return ModelParams{pi0, alpha, seed};
}

ModelParams params_from_mean_hurst(double mean, double hurst, std::uint64_t seed) {
    if (!in_open_unit(mean))
        throw Error(ErrorCode::OutOfRange, "mean must lie in (0,1)");
    return validate_params(1.0 - mean, hurst_to_alpha(hurst), seed);
}

double hurst_to_alpha(double hurst) {
    if (!(hurst > 0.5 && hurst < 1.0))
        throw Error(ErrorCode::OutOfRange, "Hurst parameter must lie in (1/2, 1)");
    return 2.0 * (1.0 - hurst);
}

double alpha_to_hurst(double alpha) {
    if (!in_open_unit(alpha)) throw Error(ErrorCode::OutOfRange, "alpha must lie in (0,1)");
    return 1.0 - alpha / 2.0;
}

double power_step(double k, double alpha) {
    return -neg_power(k, alpha) * std::expm1(-alpha * std::log1p(1.0 / k));
}

double power_second_step(double k, double alpha) {
    if (k < 8.0) {
        const double e1 = std::expm1(-alpha * std::log1p(1.0 / k));
        const double e2 = std::expm1(-alpha * std::log1p(2.0 / k));
        return neg_power(k, alpha) * (e2 - 2.0 * e1);
    }
    // k^-a [1 - 2(1+t)^-a + (1+2t)^-a] = k^-a sum_{n>=2} C(-a,n) (2^n - 2) t^n
    const double t = 1.0 / k;
    double binom = -alpha;  // C(-a, 1)
    double tn = t;
    double two_n = 2.0;
    double sum = 0.0;
    for (int n = 2; n < 64; ++n) {
        binom *= (-alpha - (n - 1)) / n;
        tn *= t;
        two_n *= 2.0;
        const double term = binom * (two_n - 2.0) * tn;
        sum += term;
        if (std::abs(term) <= 1e-18 * std::abs(sum)) break;
    }
    return neg_power(k, alpha) * sum;
}

double jump_prob(std::uint64_t k, const ModelParams& p) {
    const double ratio = (1.0 - p.pi0) / p.pi0;
    if (k == 0) return 1.0 + ratio * std::expm1(-p.alpha * std::log(2.0));
    return ratio * power_second_step(static_cast<double>(k), p.alpha);
}

double jump_tail(std::uint64_t k, const ModelParams& p) {
    if (k == 0) return 1.0;
    return (1.0 - p.pi0) / p.pi0 * power_step(static_cast<double>(k), p.alpha);
}

double equilibrium_pi(std::uint64_t k, const ModelParams& p) {
    if (k == 0) return p.pi0;
    return (1.0 - p.pi0) * power_step(static_cast<double>(k), p.alpha);
}

double equilibrium_tail(std::uint64_t k, const ModelParams& p) {
    if (k == 0) return 1.0;
    return (1.0 - p.pi0) * neg_power(static_cast<double>(k), p.alpha);
}

double conditional_range_prob(std::uint64_t i, std::uint64_t j, std::uint64_t k,
                              const ModelParams& p) {
    if (!(k > 0 && k <= i && i <= j))
        throw Error(ErrorCode::OrderingViolation,
                    "conditional_range_prob requires 0 < k <= i <= j");
    const double a = p.alpha;
    const double norm = power_step(static_cast<double>(k), a);
    double mass;
    if (j == kUnbounded) {
        mass = power_step(static_cast<double>(i), a);
    } else if (sum_directly(i, j)) {
        mass = 0.0;
        for (std::uint64_t l = i; l <= j; ++l) mass += power_second_step(static_cast<double>(l), a);
    } else {
        mass = power_step(static_cast<double>(i), a) - power_step(static_cast<double>(j) + 1.0, a);
    }
    return std::clamp(mass / norm, 0.0, 1.0);
}

JumpSampler::JumpSampler(const ModelParams& params) : params_(params) {
    for (std::uint64_t k = 0; k <= kTableSize; ++k) {
        jump_survival_[k] = jump_tail(k, params_);
        equilibrium_survival_[k] = equilibrium_tail(k, params_);
    }
}

double JumpSampler::survival(Law law, std::uint64_t k) const {
    return law == Law::Jump ? jump_tail(k, params_) : equilibrium_tail(k, params_);
}

double JumpSampler::window_mass(Law law, std::uint64_t lo, std::uint64_t hi) const {
    if (!sum_directly(lo, hi)) return survival(law, lo) - survival(law, hi + 1);
    double mass = 0.0;
    for (std::uint64_t l = lo; l <= hi; ++l)
        mass += law == Law::Jump ? jump_prob(l, params_) : equilibrium_pi(l, params_);
    return mass;
}

std::uint64_t JumpSampler::sample(Law law, Rng& rng) const {
    const auto& surv = law == Law::Jump ? jump_survival_ : equilibrium_survival_;
    // X >= k  iff  u < P(X >= k)
    const double u = rng.uniform();
    if (!(u < surv[1])) return 0;
    std::uint64_t k = 1;
    while (k < kTableSize && u < surv[k + 1]) ++k;
    if (k < kTableSize) return k;
    return sample_tail(law, rng);
}

std::uint64_t JumpSampler::sample_tail(Law law, Rng& rng) const {
    std::uint64_t lo = kTableSize;
    for (;;) {
        if (lo > kMaxState / 2)
            throw Error(ErrorCode::StateOverflow, "sampled chain state exceeds 2^63 - 1");
        const std::uint64_t hi = 2 * lo - 1;
        const double accept = window_mass(law, lo, hi) / survival(law, lo);
        if (rng.uniform() < accept) {
            std::uint64_t a = lo;
            std::uint64_t b = hi;
            double whole = window_mass(law, a, b);
            while (a < b) {
                const std::uint64_t mid = a + (b - a) / 2;
                const double left = window_mass(law, a, mid);
                if (rng.uniform() < left / whole) {
                    b = mid;
                    whole = left;
                } else {
                    a = mid + 1;
                    whole = window_mass(law, a, b);
                }
            }
            return a;
        }
        lo *= 2;
    }
}

std::uint64_t JumpSampler::sample_jump(Rng& rng) const { return sample(Law::Jump, rng); }

std::uint64_t JumpSampler::sample_equilibrium(Rng& rng) const {
    return sample(Law::Equilibrium, rng);
}

ChainState sample_jump(Rng& rng, const ModelParams& params) {
    return ChainState{JumpSampler(params).sample_jump(rng)};
}

ChainState sample_initial(Rng& rng, const ModelParams& params) {
    return ChainState{JumpSampler(params).sample_equilibrium(rng)};
}

ChainState step(ChainState state, Rng& rng, const JumpSampler& sampler) {
    if (state.x > 0) return ChainState{state.x - 1};
    return ChainState{sampler.sample_jump(rng)};
}

ChainState step(ChainState state, Rng& rng, const ModelParams& params) {
    if (state.x > 0) return ChainState{state.x - 1};
    return sample_jump(rng, params);
}

MarkovSource::MarkovSource(const ModelParams& params)
    : sampler_(params), rng_(params.seed, 0) {
    state_ = ChainState{sampler_.sample_equilibrium(rng_)};
}

MarkovSource::MarkovSource(const ModelParams& params, ChainState initial, Rng rng)
    : sampler_(params), rng_(std::move(rng)), state_(initial) {}

std::uint8_t MarkovSource::next() {
    const std::uint8_t y = state_.x != 0;
    state_ = step(state_, rng_, sampler_);
    return y;
}

void MarkovSource::fill(std::span<std::uint8_t> out) {
    std::size_t pos = 0;
    std::uint64_t x = state_.x;
    while (pos < out.size()) {
        if (x == 0) {
            out[pos++] = 0;
            x = sampler_.sample_jump(rng_);
        } else {
            const auto run = static_cast<std::size_t>(std::min<std::uint64_t>(x, out.size() - pos));
            std::memset(out.data() + pos, 1, run);
            pos += run;
            x -= run;
        }
    }
    state_.x = x;
}

void MarkovSource::fill_block_sums(std::span<double> out, std::size_t block) {
    std::uint64_t x = state_.x;
    for (auto& sum : out) {
        std::uint64_t remaining = block;
        std::uint64_t ones = 0;
        while (remaining > 0) {
            if (x == 0) {
                --remaining;
                x = sampler_.sample_jump(rng_);
            } else {
                const std::uint64_t run = std::min(x, remaining);
                ones += run;
                x -= run;
                remaining -= run;
            }
        }
        sum = static_cast<double>(ones);
    }
    state_.x = x;
}

BinarySeries MarkovSource::take(std::size_t n) {
    BinarySeries out;
    out.symbols.resize(n);
    fill(out.symbols);
    out.generator = Generator::Markov;
    out.pi0 = params().pi0;
    out.alpha = params().alpha;
    out.seed = params().seed;
    return out;
}

BinarySeries generate(const ModelParams& params, std::size_t n) {
    if (n == 0) throw Error(ErrorCode::OutOfRange, "series length must be >= 1");
    return MarkovSource(params).take(n);
}

}  // namespace lrd
