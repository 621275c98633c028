#include <doctest.h>

#include <cmath>
#include <cstdlib>

#include "lrdchain/error.hpp"
#include "lrdchain/estimators.hpp"
#include "lrdchain/experiments.hpp"
#include "lrdchain/regression.hpp"

using namespace lrd;

namespace {

// Exact stationary autocorrelation of the symbol stream. With u_n the
// probability of being in 0 at time n given 0 at time 0 (renewal equation
// with return time jump + 1), Cov(Y_0, Y_n) = pi0 (u_n - pi0).
std::vector<double> renewal_acf(const ModelParams& p, std::size_t max_lag) {
    std::vector<double> u(max_lag + 1, 0.0);
    u[0] = 1.0;
    for (std::size_t n = 1; n <= max_lag; ++n)
        for (std::size_t j = 1; j <= n; ++j) u[n] += jump_prob(j - 1, p) * u[n - j];
    std::vector<double> rho(max_lag + 1);
    for (std::size_t n = 0; n <= max_lag; ++n) rho[n] = (u[n] - p.pi0) / (1.0 - p.pi0);
    return rho;
}

}  // namespace

TEST_CASE("tail fit slope") {
    const std::vector<std::uint64_t> ns{1000, 10000, 100000, 1000000, 10000000, 100000000};
    for (double alpha : {0.1, 0.5, 0.9}) {
        const ModelParams p{0.6, alpha, 0};
        const auto fit = tail_check(p, ns);
        CHECK(fit.slope == doctest::Approx(-(1.0 + alpha)).epsilon(1e-3));
        CHECK(fit.slope > -2.0);
        CHECK(fit.slope < -1.0);
        CHECK(fit.r2 > 0.999999);
        CHECK(std::abs(tail_prefactor_ratio(p, 1'000'000) - 1.0) < 1e-3);
    }
    const std::vector<std::uint64_t> too_far{10, 1'000'000'000};
    CHECK_THROWS_AS(tail_check({0.5, 0.5, 0}, too_far), Error);
}

TEST_CASE("count variance: renewal chain with short memory scales linearly") {
    const std::vector<double> law{0.3, 0.5, 0.2};
    const auto r = count_variance_check(law, 5, 100'000, 200);
    CHECK(r.fit.slope == doctest::Approx(1.0).epsilon(0.1));
    CHECK(r.ns.back() == 100'000);
    // Mean recurrence time 1 + 0.9 = 1.9 so E N_n ~ n / 1.9.
    CHECK(r.means.back() / 100'000.0 == doctest::Approx(1.0 / 1.9).epsilon(0.01));
    CHECK_THROWS_AS(count_variance_check(law, 5, 1000, 99), Error);
    const std::vector<double> bad{0.5, 0.4};
    CHECK_THROWS_AS(count_variance_check(bad, 5, 1000, 100), Error);
}

TEST_CASE("count variance: chain exponent") {
    const ModelParams p{0.5, 0.5, 12};
    const auto r = count_variance_check(p, 100'000, 300);
    CHECK(r.fit.slope == doctest::Approx(1.5).epsilon(0.1));
    CHECK(r.prefactor_predicted == doctest::Approx(count_variance_prefactor(p)));
    CHECK(count_variance_prefactor(p) == doctest::Approx(2 * 0.5 * 0.25 * 0.5 / (0.5 * 1.5)));
    // Equilibrium visit rate pi0.
    CHECK(r.means.back() / 100'000.0 == doctest::Approx(0.5).epsilon(0.05));
}

TEST_CASE("count variance is deterministic and independent of thread count") {
    const ModelParams p{0.6, 0.4, 3};
    ::setenv("LRD_THREADS", "1", 1);
    const auto a = count_variance_check(p, 10'000, 100);
    ::setenv("LRD_THREADS", "3", 1);
    const auto b = count_variance_check(p, 10'000, 100);
    ::unsetenv("LRD_THREADS");
    CHECK(a.variances == b.variances);
    CHECK(a.means == b.means);
}

TEST_CASE("thread count honours LRD_THREADS") {
    ::setenv("LRD_THREADS", "5", 1);
    CHECK(thread_count() == 5);
    ::setenv("LRD_THREADS", "zero", 1);
    CHECK(thread_count() >= 1);
    ::unsetenv("LRD_THREADS");
    CHECK(thread_count() >= 1);
}

TEST_CASE("acf slope of the chain") {
    const auto series = generate({0.5, 0.5, 21}, 4'000'000);
    const auto r = acf_slope_check(series, 10, 1000);
    CHECK(r.fit.slope == doctest::Approx(-0.5).epsilon(0.3));
    CHECK(r.excluded.empty());
}

TEST_CASE("exact autocorrelation decays with exponent alpha") {
    for (double alpha : {0.25, 0.5, 0.75}) {
        const auto rho = renewal_acf({0.5, alpha, 0}, 1000);
        CHECK(rho[0] == doctest::Approx(1.0));
        std::vector<double> xs, ys;
        for (double k = 10; k <= 1000.5; k *= std::pow(10.0, 0.05)) {
            const auto lag = static_cast<std::size_t>(std::llround(k));
            REQUIRE(rho[lag] > 0.0);
            xs.push_back(std::log(double(lag)));
            ys.push_back(std::log(rho[lag]));
        }
        const auto fit = fit_ols(xs, ys);
        CAPTURE(alpha);
        CHECK(std::abs(fit.slope + alpha) < 0.1);
    }
}

TEST_CASE("sample acf of the chain matches the renewal oracle at short lags") {
    const ModelParams p{0.5, 0.75, 8};
    const auto exact = renewal_acf(p, 20);
    const auto series = generate(p, 4'000'000);
    const auto rho = acf(series, 20);
    for (std::size_t k : {1, 2, 5, 20}) {
        CAPTURE(k);
        CHECK(std::abs(rho[k] - exact[k]) < 0.01);
    }
}

TEST_CASE("acf slope of iid noise is rejected") {
    Rng rng(4, 0);
    BinarySeries s;
    s.symbols.resize(1'000'000);
    for (auto& v : s.symbols) v = rng.uniform() < 0.5;
    try {
        const auto r = acf_slope_check(s, 10, 1000);
        CHECK(r.rejected);
        CHECK_FALSE(r.excluded.empty());
    } catch (const Error& e) {
        CHECK(e.code() == ErrorCode::NegativeACF);
    }
    const std::vector<double> alternating = [] {
        std::vector<double> v(10000);
        for (std::size_t i = 0; i < v.size(); ++i) v[i] = i % 2 ? 1.0 : -1.0;
        return v;
    }();
    // rho(k) = +-1 on even/odd lags, and the geometric grid includes odd lags.
    CHECK_NOTHROW(acf_slope_check(alternating, 10, 1000));
    CHECK_THROWS_AS(acf_slope_check(alternating, 10, 20000), Error);
}

TEST_CASE("law checks pass inside the valid region") {
    for (double alpha : {0.2, 0.8}) {
        const double pi0 = validity_threshold(alpha) + 0.1;
        for (const auto& c : law_checks({pi0, alpha, 0}, 100'000)) {
            CAPTURE(c.name);
            CAPTURE(c.measured);
            CHECK(c.pass);
        }
    }
    CHECK_THROWS_AS(law_checks({0.1, 0.9, 0}, 1000), Error);
}

TEST_CASE("chi-square helper") {
    const std::vector<std::uint64_t> obs{250, 250, 250, 250};
    const std::vector<double> p{0.25, 0.25, 0.25, 0.25};
    const auto exact = chi_square(obs, p);
    CHECK(exact.statistic == 0.0);
    CHECK(exact.dof == 3);
    CHECK(exact.p_value == doctest::Approx(1.0));
    const std::vector<std::uint64_t> skewed{400, 200, 200, 200};
    const auto off = chi_square(skewed, p);
    CHECK(off.statistic == doctest::Approx(120.0));  // (150^2 + 3 * 50^2) / 250
    CHECK(off.p_value < 1e-10);
    // Bins with tiny expectation are pooled.
    const std::vector<std::uint64_t> sparse{500, 498, 1, 1};
    const std::vector<double> q{0.5, 0.497, 0.002, 0.001};
    CHECK(chi_square(sparse, q).dof == 1);
}

TEST_CASE("sampler checks pass for the exact sampler") {
    for (const auto& c : sampler_checks({0.5, 0.5, 77}, 1'000'000)) {
        CAPTURE(c.name);
        CAPTURE(c.measured);
        CHECK(c.pass);
    }
}

TEST_CASE("table harness") {
    TableConfig config;
    config.generators = {Generator::Fgn, Generator::Markov};
    config.hursts = {0.75};
    config.replicas = 2;
    config.points = 4000;  // too short for the wavelet estimator
    config.block = 10;
    config.seed = 9;
    const auto a = table2_harness(config);
    REQUIRE(a.rows.size() == 4);
    CHECK(a.rows[0].generator == Generator::Fgn);
    CHECK(a.rows[3].generator == Generator::Markov);
    CHECK(a.rows[1].replica == 1);
    for (const auto& row : a.rows) {
        CHECK_FALSE(row.h[5]);
        CHECK(row.errors[5].find("wavelet") != std::string::npos);
        for (std::size_t m = 0; m < 5; ++m) CHECK(row.h[m]);
    }

    config.threads = 3;
    const auto b = table2_harness(config);
    CHECK(format_table_text(a) == format_table_text(b));
    CHECK(format_table_csv(a) == format_table_csv(b));

    // Selecting a subset keeps each remaining cell's stream.
    config.generators = {Generator::Markov};
    const auto c = table2_harness(config);
    REQUIRE(c.rows.size() == 2);
    CHECK(c.rows[0].seed == a.rows[2].seed);
    CHECK(c.rows[0].h == a.rows[2].h);

    config.generators = {};
    const auto empty = table2_harness(config);
    CHECK(empty.rows.empty());

    const std::string text = format_table_text(a);
    CHECK(text.find("Local Whit.") != std::string::npos);
    CHECK(text.find("ERR") != std::string::npos);
    const std::string csv = format_table_csv(a);
    CHECK(csv.rfind("source,hurst,replica,seed,rs,", 0) == 0);
}

TEST_CASE("table harness isolates a failing generator") {
    TableConfig config;
    config.generators = {Generator::Markov, Generator::Fgn};
    config.hursts = {0.75};
    config.replicas = 1;
    config.points = 2048;
    config.block = 4;
    config.markov_pi0 = 0.01;  // outside the valid region for alpha = 0.5
    const auto r = table2_harness(config);
    REQUIRE(r.rows.size() == 2);
    CHECK_FALSE(r.rows[0].generator_error.empty());
    CHECK(r.rows[1].generator_error.empty());
    CHECK(r.rows[1].h[0]);
}
