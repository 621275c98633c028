#pragma once

// Infinite Markov chain generating a binary series with long-range
// dependence. From state 0 the chain jumps to state k with probability f_k;
// from any state k > 0 it counts down deterministically to 0. The emitted
// symbol is 0 in state 0 and 1 otherwise.
//
// With tail exponent alpha in (0,1) and equilibrium mass pi0 of state 0:
//
//   f_k  = ((1 - pi0) / pi0) [k^-a - 2 (k+1)^-a + (k+2)^-a]       k > 0
//   f_0  = 1 - ((1 - pi0) / pi0) (1 - 2^-a)
//   pi_k = (1 - pi0) [k^-a - (k+1)^-a]                            k > 0
//
// so that sum_{i>=k} pi_i = (1 - pi0) k^-a, E[Y] = 1 - pi0, H = 1 - a/2.

#include <array>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <span>

#include "lrdchain/rng.hpp"
#include "lrdchain/series.hpp"

namespace lrd {

struct ModelParams {
    double pi0 = 0.5;
    double alpha = 0.5;
    std::uint64_t seed = 0;

    double hurst() const noexcept { return 1.0 - alpha / 2.0; }
    double mean() const noexcept { return 1.0 - pi0; }
};

/// Lower bound on pi0 for the given alpha: (2^a - 1) / (2^(a+1) - 1).
double validity_threshold(double alpha);

/// Throws OutOfRange (pi0 or alpha outside (0,1)) or InvalidRegion
/// (pi0 at or below the threshold; the threshold is attached to the error).
ModelParams validate_params(double pi0, double alpha, std::uint64_t seed = 0);

/// Builds params from the traffic-level description (mean, Hurst parameter).
ModelParams params_from_mean_hurst(double mean, double hurst, std::uint64_t seed = 0);

double hurst_to_alpha(double hurst);
double alpha_to_hurst(double alpha);

/// k^-a - (k+1)^-a, evaluated without cancellation for large k.
double power_step(double k, double alpha);

/// k^-a - 2 (k+1)^-a + (k+2)^-a, evaluated without cancellation for large k.
double power_second_step(double k, double alpha);

double jump_prob(std::uint64_t k, const ModelParams& params);

/// sum_{i>=k} f_i in closed form. jump_tail(0) == 1.
double jump_tail(std::uint64_t k, const ModelParams& params);

double equilibrium_pi(std::uint64_t k, const ModelParams& params);

/// sum_{i>=k} pi_i in closed form. equilibrium_tail(0) == 1.
double equilibrium_tail(std::uint64_t k, const ModelParams& params);

inline constexpr std::uint64_t kUnbounded = std::numeric_limits<std::uint64_t>::max();

/// P(X_{n+1} in [i, j] | X_{n+1} >= k, X_n = 0) for 0 < k <= i <= j.
/// Pass j == kUnbounded for an open upper end. Throws OrderingViolation.
double conditional_range_prob(std::uint64_t i, std::uint64_t j, std::uint64_t k,
                              const ModelParams& params);

/// Largest representable chain state.
inline constexpr std::uint64_t kMaxState = std::numeric_limits<std::int64_t>::max();

struct ChainState {
    std::uint64_t x = 0;
    friend bool operator==(ChainState, ChainState) = default;
};

/// Exact sampler for the jump law {f_k} and the equilibrium law {pi_k}.
///
/// States below kTableSize are found by inverse CDF against closed-form
/// tail probabilities. Larger states are located by doubling windows
/// [N, 2N-1], [2N, 4N-1], ... each accepted with its exact conditional
/// probability, then by bisection inside the accepted window. Every
/// acceptance test and every bisection uses a fresh uniform.
class JumpSampler {
public:
    static constexpr std::uint64_t kTableSize = 16;

    explicit JumpSampler(const ModelParams& params);

    const ModelParams& params() const noexcept { return params_; }

    /// Next state after leaving state 0.
    std::uint64_t sample_jump(Rng& rng) const;

    /// A draw from the equilibrium distribution.
    std::uint64_t sample_equilibrium(Rng& rng) const;

private:
    enum class Law { Jump, Equilibrium };

    std::uint64_t sample(Law law, Rng& rng) const;
    std::uint64_t sample_tail(Law law, Rng& rng) const;
    double survival(Law law, std::uint64_t k) const;
    double window_mass(Law law, std::uint64_t lo, std::uint64_t hi) const;

    ModelParams params_;
    std::array<double, kTableSize + 1> jump_survival_{};
    std::array<double, kTableSize + 1> equilibrium_survival_{};
};

ChainState sample_jump(Rng& rng, const ModelParams& params);
ChainState sample_initial(Rng& rng, const ModelParams& params);

/// One transition. Consumes no randomness unless state.x == 0.
ChainState step(ChainState state, Rng& rng, const JumpSampler& sampler);
ChainState step(ChainState state, Rng& rng, const ModelParams& params);

/// Online generator: emits the binary series symbol by symbol and can be
/// resumed indefinitely. The initial state is drawn from equilibrium so
/// the output is stationary from the first symbol.
class MarkovSource {
public:
    /// Random stream 0 of params.seed.
    explicit MarkovSource(const ModelParams& params);
    MarkovSource(const ModelParams& params, ChainState initial, Rng rng);

    ChainState state() const noexcept { return state_; }
    const ModelParams& params() const noexcept { return sampler_.params(); }

    std::uint8_t next();
    void fill(std::span<std::uint8_t> out);

    /// Fills out[b] with the number of ones in the next `block` symbols.
    void fill_block_sums(std::span<double> out, std::size_t block);

    BinarySeries take(std::size_t n);

private:
    JumpSampler sampler_;
    Rng rng_;
    ChainState state_;
};

/// n symbols, reproducible for identical params (including seed).
BinarySeries generate(const ModelParams& params, std::size_t n);

}  // namespace lrd
