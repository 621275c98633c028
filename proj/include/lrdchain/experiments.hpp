#pragma once

// Numerical checks of the chain's asymptotics, the verification suites
// behind `lrdchain verify`, and the estimator-comparison harness.

#include <array>
#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "lrdchain/chain.hpp"
#include "lrdchain/estimators.hpp"
#include "lrdchain/regression.hpp"

namespace lrd {

/// Worker count: LRD_THREADS if set and positive, else hardware concurrency.
std::size_t thread_count();

/// Fit of log(1 - F(n)) against log n, where 1 - F(n) = jump_tail(n).
/// Expected slope -(1 + alpha). Requires increasing ns, max <= 1e8.
ScalingFit tail_check(const ModelParams& params, std::span<const std::uint64_t> ns);

/// (1 - F(n)) n^(1+alpha) pi0 / ((1 - pi0) alpha); tends to 1.
double tail_prefactor_ratio(const ModelParams& params, std::uint64_t n);

/// Leading constant of Var N_n: 2 alpha pi0^2 (1 - pi0) / ((1 - alpha)(2 - alpha)).
double count_variance_prefactor(const ModelParams& params);

struct CountVarianceResult {
    ScalingFit fit;                  // log Var N_n vs log n
    std::vector<std::uint64_t> ns;
    std::vector<double> means;
    std::vector<double> variances;
    double prefactor_measured = 0.0;  // Var N_{n_max} / n_max^(2 - alpha)
    double prefactor_predicted = 0.0;
};

/// Simulates `replicas` (>= 100) independent chains started in state 0 and records
/// N_n, the number of visits to state 0 at times 1..n, on a geometric
/// ladder of n from n_max / 1000 to n_max. Replica r uses the stream
/// derive_seed(params.seed, r).
CountVarianceResult count_variance_check(const ModelParams& params, std::uint64_t n_max,
                                         std::size_t replicas);

/// Same experiment for an arbitrary finite jump law (probabilities of
/// jumping from 0 to 0, 1, 2, ...). Only the fit and ladder are filled in.
CountVarianceResult count_variance_check(std::span<const double> jump_law, std::uint64_t seed,
                                         std::uint64_t n_max, std::size_t replicas);

struct AcfSlopeResult {
    ScalingFit fit;                      // log rho(k) vs log k
    std::vector<std::size_t> excluded;   // lags with rho(k) <= 0
    bool rejected = false;               // any exclusion or r2 < 0.9
};

/// Fits the sample ACF on a geometric lag grid in [lag_min, lag_max].
/// Throws NegativeACF when fewer than 3 lags have positive correlation.
AcfSlopeResult acf_slope_check(const BinarySeries& series, std::size_t lag_min = 10,
                               std::size_t lag_max = 1000);
AcfSlopeResult acf_slope_check(std::span<const double> values, std::size_t lag_min = 10,
                               std::size_t lag_max = 1000);

// ---------------------------------------------------------------------------
// Verification suites

struct CheckResult {
    std::string name;
    bool pass = false;
    double measured = 0.0;
    double limit = 0.0;
    std::string detail;
};

/// Closed-form identities over k <= k_max: f_k >= 0, normalization with the
/// analytic tail, pi recurrence, equilibrium tail, tail asymptotic ratio,
/// and non-negativity just inside the validity boundary.
std::vector<CheckResult> law_checks(const ModelParams& params, std::uint64_t k_max = 1'000'000,
                                    double tolerance = 1e-12);

/// Chi-square statistic and upper-tail p-value of a histogram against
/// expected bin probabilities (the last entry is the tail bin).
struct ChiSquare {
    double statistic = 0.0;
    std::size_t dof = 0;
    double p_value = 0.0;
};
ChiSquare chi_square(std::span<const std::uint64_t> observed, std::span<const double> expected_prob);

/// Goodness of fit of sample_jump and sample_initial against the analytic
/// laws: chi-square (rejects below p = 0.001) and P(jump >= k) within 4
/// standard errors at k = 10, 100, 1000, 10000.
std::vector<CheckResult> sampler_checks(const ModelParams& params, std::uint64_t draws);

/// ACF slope (-alpha +- 0.1) on an n-symbol series and count-variance slope
/// (2 - alpha +- 0.1).
std::vector<CheckResult> scaling_checks(const ModelParams& params, std::uint64_t n,
                                        std::size_t replicas, std::uint64_t n_max);

// ---------------------------------------------------------------------------
// Estimator comparison harness

struct TableConfig {
    std::vector<Generator> generators{Generator::Fgn, Generator::ItMap, Generator::Markov};
    std::vector<double> hursts{0.625, 0.75, 0.875};
    std::size_t replicas = 3;
    std::size_t points = 1'000'000;  // analysed points per cell
    std::size_t block = 100;         // symbols per point for binary generators
    double markov_pi0 = 0.5;
    double map_threshold = 0.5;
    std::uint64_t seed = 1;
    std::size_t threads = 0;         // 0: thread_count()
};

struct TableCell {
    Generator generator = Generator::Fgn;
    double hurst = 0.0;
    std::size_t replica = 0;
    std::uint64_t seed = 0;
    std::array<std::optional<double>, 6> h{};
    std::array<std::optional<double>, 6> r2{};
    std::array<std::string, 6> errors{};
    std::string generator_error;
    double generate_seconds = 0.0;
};

struct TableResult {
    std::vector<TableCell> rows;
    std::map<Generator, double> generate_seconds;
};

/// Every (generator, H, replica) cell runs all six estimators. Cells run in
/// parallel; rows are ordered by generator, H, replica. Failures are
/// recorded per cell and never abort the table.
TableResult table2_harness(const TableConfig& config);

/// Series for one harness cell (aggregated for binary generators).
std::vector<double> table_cell_series(Generator generator, double hurst, std::uint64_t seed,
                                      const TableConfig& config);

std::string format_table_text(const TableResult& result);
std::string format_table_csv(const TableResult& result);

}  // namespace lrd
