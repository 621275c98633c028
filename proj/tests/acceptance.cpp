// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Pass criterion numbers as arguments to
// run a subset.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "lrdchain/chain.hpp"
#include "lrdchain/error.hpp"
#include "lrdchain/estimators.hpp"
#include "lrdchain/experiments.hpp"
#include "lrdchain/regression.hpp"

#ifndef LRD_CLI_PATH
#error "LRD_CLI_PATH must name the lrdchain executable"
#endif

using namespace lrd;
using Clock = std::chrono::steady_clock;

namespace {

// ---- pinned tolerances ------------------------------------------------------

constexpr double kLawTolerance = 1e-12;
constexpr std::uint64_t kLawMaxK = 1'000'000;
constexpr double kLawSeconds = 10.0;

constexpr std::uint64_t kSamplerDraws = 10'000'000;
constexpr double kSamplerSeconds = 30.0;

constexpr std::size_t kMeanSymbols = 10'000'000;
constexpr double kMeanTolerance = 0.005;
constexpr double kMeanAlpha = 0.8;
constexpr double kMeanSeconds = 30.0;

constexpr std::size_t kAcfSymbols = 10'000'000;
constexpr double kExponentTolerance = 0.1;
constexpr std::size_t kCountReplicas = 1000;
constexpr std::uint64_t kCountHorizon = 1'000'000;
constexpr double kExponentSeconds = 600.0;

constexpr std::size_t kTablePoints = 1'000'000;
constexpr std::size_t kTableBlock = 100;
constexpr double kFgnTolerance = 0.04;
constexpr double kMarkovTolerance = 0.05;
constexpr double kRsOverlap = 0.10;
constexpr double kTableSeconds = 900.0;

constexpr std::size_t kNullLength = std::size_t{1} << 20;
constexpr double kNullLow = 0.45, kNullHigh = 0.55;

constexpr double kMinSymbolsPerSecond = 1e7;

// ---- reporting -------------------------------------------------------------

struct Outcome {
    bool pass = true;
    std::vector<std::string> notes;
    void require(bool ok, const std::string& what) {
        pass &= ok;
        notes.push_back(std::string(ok ? "  ok   " : "  MISS ") + what);
    }
    void info(const std::string& what) { notes.push_back("  info " + what); }
};

std::string num(double v, int digits = 4) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

// ---- 1 ---------------------------------------------------------------------

Outcome law_identities() {
    Outcome out;
    const auto t0 = Clock::now();
    const double alphas[] = {0.1, 0.3, 0.5, 0.7, 0.9};
    const double fractions[] = {0.05, 0.25, 0.5, 0.75, 0.95};
    double worst = 0.0;
    for (double a : alphas)
        for (double f : fractions) {
            const double th = validity_threshold(a);
            const ModelParams p{th + f * (1.0 - th), a, 0};
            for (const auto& c : law_checks(p, kLawMaxK, kLawTolerance)) {
                if (!c.pass) out.require(false, c.name + " " + c.detail + " measured " + num(c.measured));
                if (c.limit == kLawTolerance) worst = std::max(worst, c.measured);
            }
        }
    const double secs = seconds_since(t0);
    out.require(worst <= kLawTolerance, "worst relative error over the 5x5 grid " + num(worst) + " <= 1e-12");
    out.require(secs < kLawSeconds, "runtime " + num(secs) + " s < 10 s");
    return out;
}

// ---- 2 ---------------------------------------------------------------------

Outcome sampler_exactness() {
    Outcome out;
    const auto t0 = Clock::now();
    for (const auto& c : sampler_checks({0.5, 0.5, 2024}, kSamplerDraws))
        out.require(c.pass, c.name + " = " + num(c.measured) + " (limit " + num(c.limit) + ") " + c.detail);
    const double secs = seconds_since(t0);
    out.require(secs < kSamplerSeconds, "runtime " + num(secs) + " s < 30 s");
    return out;
}

// ---- 3 ---------------------------------------------------------------------

Outcome mean_control() {
    Outcome out;
    const auto t0 = Clock::now();
    for (double pi0 : {0.3, 0.5, 0.7}) {
        const ModelParams p{pi0, kMeanAlpha, 303};
        MarkovSource source(p);
        std::vector<std::uint8_t> buf(1 << 20);
        std::uint64_t ones = 0, seen = 0;
        while (seen < kMeanSymbols) {
            const std::size_t take = std::min<std::size_t>(buf.size(), kMeanSymbols - seen);
            source.fill(std::span(buf).first(take));
            for (std::size_t i = 0; i < take; ++i) ones += buf[i];
            seen += take;
        }
        const double mean = static_cast<double>(ones) / static_cast<double>(seen);
        out.require(std::abs(mean - (1.0 - pi0)) <= kMeanTolerance,
                    "pi0=" + num(pi0) + " alpha=" + num(kMeanAlpha) + ": mean " + num(mean, 6) + " vs " +
                        num(1.0 - pi0));
    }
    const double secs = seconds_since(t0);
    out.require(secs < kMeanSeconds, "runtime " + num(secs) + " s < 30 s");
    return out;
}

// ---- 4 ---------------------------------------------------------------------

// Slope of the exact stationary autocorrelation over the same lag grid, from
// the renewal sequence u_n: rho(n) = (u_n - pi0) / (1 - pi0).
double exact_acf_slope(const ModelParams& p, std::size_t lag_min, std::size_t lag_max) {
    std::vector<double> u(lag_max + 1, 0.0);
    u[0] = 1.0;
    for (std::size_t n = 1; n <= lag_max; ++n)
        for (std::size_t j = 1; j <= n; ++j) u[n] += jump_prob(j - 1, p) * u[n - j];
    std::vector<double> xs, ys;
    for (double k = double(lag_min); k <= lag_max * (1 + 1e-9); k *= std::pow(10.0, 0.05)) {
        const auto lag = static_cast<std::size_t>(std::llround(k));
        xs.push_back(std::log(double(lag)));
        ys.push_back(std::log((u[lag] - p.pi0) / (1.0 - p.pi0)));
    }
    return fit_ols(std::move(xs), std::move(ys)).slope;
}

Outcome lrd_exponent() {
    Outcome out;
    const auto t0 = Clock::now();
    for (double alpha : {0.25, 0.5, 0.75}) {
        const ModelParams p{0.5, alpha, 404};
        const std::string tag = "alpha=" + num(alpha);
        try {
            const auto acf_fit = acf_slope_check(generate(p, kAcfSymbols), 10, 1000);
            out.require(std::abs(acf_fit.fit.slope + alpha) <= kExponentTolerance,
                        tag + ": acf slope " + num(acf_fit.fit.slope) + " vs " + num(-alpha) + " (r2 " +
                            num(acf_fit.fit.r2) + ", " + std::to_string(acf_fit.excluded.size()) +
                            " lags excluded)");
        } catch (const Error& e) {
            out.require(false, tag + ": acf fit failed: " + e.what());
        }
        out.info(tag + ": exact stationary acf slope " + num(exact_acf_slope(p, 10, 1000)));
        const auto cv = count_variance_check(p, kCountHorizon, kCountReplicas);
        out.require(std::abs(cv.fit.slope - (2.0 - alpha)) <= kExponentTolerance,
                    tag + ": count variance slope " + num(cv.fit.slope) + " vs " + num(2.0 - alpha));
        out.info(tag + ": count variance prefactor measured/predicted " +
                 num(cv.prefactor_measured / cv.prefactor_predicted));
    }
    const double secs = seconds_since(t0);
    out.require(secs < kExponentSeconds, "runtime " + num(secs) + " s < 600 s");
    return out;
}

// ---- 5 ---------------------------------------------------------------------

// Reference estimates, three replicas per (source, H), columns in method
// order: R/S, modified R/S, aggregated variance, periodogram, local
// Whittle, wavelet.
using Row = std::array<double, 6>;
const std::map<std::pair<Generator, double>, std::array<Row, 3>> kReference = {
    {{Generator::Fgn, 0.625},
     {{{0.637, 0.624, 0.623, 0.626, 0.639, 0.635},
       {0.632, 0.624, 0.622, 0.624, 0.638, 0.635},
       {0.645, 0.633, 0.620, 0.622, 0.638, 0.635}}}},
    {{Generator::Fgn, 0.75},
     {{{0.728, 0.738, 0.741, 0.747, 0.774, 0.767},
       {0.741, 0.736, 0.749, 0.755, 0.776, 0.769},
       {0.694, 0.719, 0.741, 0.754, 0.774, 0.768}}}},
    {{Generator::Fgn, 0.875},
     {{{0.784, 0.837, 0.858, 0.877, 0.908, 0.897},
       {0.750, 0.823, 0.850, 0.876, 0.908, 0.897},
       {0.747, 0.835, 0.860, 0.876, 0.908, 0.898}}}},
    {{Generator::ItMap, 0.625},
     {{{0.635, 0.590, 0.604, 0.630, 0.719, 0.706},
       {0.608, 0.595, 0.604, 0.627, 0.716, 0.703},
       {0.637, 0.594, 0.610, 0.637, 0.718, 0.707}}}},
    {{Generator::ItMap, 0.75},
     {{{0.828, 0.666, 0.717, 0.746, 0.813, 0.800},
       {0.725, 0.650, 0.712, 0.739, 0.813, 0.801},
       {0.678, 0.694, 0.765, 0.768, 0.814, 0.803}}}},
    {{Generator::ItMap, 0.875},
     {{{0.703, 0.779, 0.851, 0.876, 0.925, 0.910},
       {0.779, 0.802, 0.854, 0.877, 0.924, 0.910},
       {0.846, 0.817, 0.861, 0.874, 0.925, 0.912}}}},
    {{Generator::Markov, 0.625},
     {{{0.526, 0.597, 0.611, 0.621, 0.703, 0.691},
       {0.593, 0.645, 0.700, 0.684, 0.710, 0.702},
       {0.632, 0.603, 0.646, 0.650, 0.707, 0.698}}}},
    {{Generator::Markov, 0.75},
     {{{0.663, 0.684, 0.744, 0.760, 0.793, 0.784},
       {0.670, 0.667, 0.751, 0.759, 0.793, 0.783},
       {0.671, 0.671, 0.724, 0.736, 0.786, 0.776}}}},
    {{Generator::Markov, 0.875},
     {{{0.724, 0.732, 0.816, 0.848, 0.884, 0.873},
       {0.757, 0.754, 0.830, 0.859, 0.885, 0.874},
       {0.656, 0.781, 0.852, 0.866, 0.885, 0.875}}}},
};

double reference_mean(const std::array<Row, 3>& rows, std::size_t col) {
    return (rows[0][col] + rows[1][col] + rows[2][col]) / 3.0;
}

Outcome table_reproduction() {
    Outcome out;
    TableConfig config;
    config.points = kTablePoints;
    config.block = kTableBlock;
    config.replicas = 3;
    config.seed = 505;
    const auto t0 = Clock::now();
    const auto result = table2_harness(config);
    const double secs = seconds_since(t0);

    std::istringstream table(format_table_text(result));
    for (std::string line; std::getline(table, line);) out.info(line);
    for (const auto& [g, s] : result.generate_seconds)
        out.info("generation time " + std::string(to_string(g)) + ": " + num(s) + " s");

    out.require(result.rows.size() == 27, "27 cells");
    auto check_column = [&](const TableCell& cell, std::size_t col, double tol) {
        const auto& ref = kReference.at({cell.generator, cell.hurst});
        const double want = reference_mean(ref, col);
        const std::string where = std::string(to_string(cell.generator)) + " H=" + num(cell.hurst) + " r" +
                                  std::to_string(cell.replica) + " " + std::string(to_string(kAllMethods[col]));
        if (!cell.h[col]) {
            out.require(false, where + ": ERR " + cell.errors[col] + cell.generator_error);
            return;
        }
        out.require(std::abs(*cell.h[col] - want) <= tol,
                    where + " " + num(*cell.h[col], 3) + " vs reference " + num(want, 3) + " +- " + num(tol));
    };
    for (const auto& cell : result.rows) {
        if (cell.generator == Generator::Fgn)
            for (std::size_t col : {2, 3, 4, 5}) check_column(cell, col, kFgnTolerance);
        if (cell.generator == Generator::Markov)
            for (std::size_t col : {4, 5}) check_column(cell, col, kMarkovTolerance);
    }

    // R/S columns: the replica range, widened by the overlap margin, must
    // meet the reference range.
    for (const auto& [key, ref] : kReference) {
        for (std::size_t col : {0, 1}) {
            double lo = 1e9, hi = -1e9;
            for (const auto& cell : result.rows)
                if (cell.generator == key.first && cell.hurst == key.second && cell.h[col]) {
                    lo = std::min(lo, *cell.h[col]);
                    hi = std::max(hi, *cell.h[col]);
                }
            const double rlo = std::min({ref[0][col], ref[1][col], ref[2][col]});
            const double rhi = std::max({ref[0][col], ref[1][col], ref[2][col]});
            const bool overlap = lo <= hi && lo - kRsOverlap <= rhi && hi + kRsOverlap >= rlo;
            out.require(overlap, std::string(to_string(key.first)) + " H=" + num(key.second) + " " +
                                     std::string(to_string(kAllMethods[col])) + " range [" + num(lo, 3) + ", " +
                                     num(hi, 3) + "] vs reference [" + num(rlo, 3) + ", " + num(rhi, 3) +
                                     "] +- 0.1");
        }
    }
    out.require(secs < kTableSeconds, "runtime " + num(secs) + " s < 900 s");
    return out;
}

// ---- 6 ---------------------------------------------------------------------

Outcome estimator_null() {
    Outcome out;
    Rng rng(606, 0);
    std::vector<double> gauss(kNullLength), bern(kNullLength);
    for (auto& v : gauss) v = rng.normal();
    for (auto& v : bern) v = rng.uniform() < 0.5 ? 1.0 : 0.0;
    for (const auto& [name, series] : {std::pair{"gaussian", &gauss}, std::pair{"bernoulli", &bern}}) {
        for (Method m : kAllMethods) {
            const double h = estimate(m, *series).h;
            out.require(h >= kNullLow && h <= kNullHigh,
                        std::string(name) + " " + std::string(to_string(m)) + " " + num(h, 4));
        }
    }
    return out;
}

// ---- 7 ---------------------------------------------------------------------

Outcome throughput() {
    Outcome out;
    constexpr std::size_t kSymbols = 200'000'000;
    for (const ModelParams& p : {ModelParams{0.5, 0.5, 707}, ModelParams{0.9, 0.5, 707}}) {
        MarkovSource source(p);
        std::vector<std::uint8_t> buf(1 << 20);
        std::uint64_t ones = 0;
        const auto t0 = Clock::now();
        for (std::size_t done = 0; done < kSymbols; done += buf.size()) {
            source.fill(buf);
            ones += buf[buf.size() / 2];  // keep the work observable
        }
        const double rate = kSymbols / seconds_since(t0);
        out.require(rate >= kMinSymbolsPerSecond,
                    "pi0=" + num(p.pi0) + " alpha=" + num(p.alpha) + ": " + num(rate, 3) + " symbols/s >= 1e7");
        (void)ones;
    }
    return out;
}

// ---- 8 ---------------------------------------------------------------------

// Runs a shell command and returns its stdout.
std::string shell(const std::string& cmd, int& status) {
    std::string data;
    FILE* pipe = ::popen(cmd.c_str(), "r");
    if (!pipe) {
        status = -1;
        return data;
    }
    char buf[1 << 16];
    for (std::size_t n; (n = std::fread(buf, 1, sizeof buf, pipe)) > 0;) data.append(buf, n);
    status = ::pclose(pipe);
    return data;
}

Outcome determinism() {
    Outcome out;
    const char* commands[] = {
        "generate --model markov --hurst 0.75 --mean 0.5 --n 3000000 --seed 42 --format bits",
        "generate --model markov --alpha 0.3 --pi0 0.6 --n 200000 --seed 7 --format lines --block 100",
        "generate --model itmap --hurst 0.8 --n 1000000 --seed 9 --format csv",
        "generate --model fgn --hurst 0.7 --n 100000 --seed 5 --format lines",
        "verify --level sampler --n 200000 --seed 3",
        "table --n 8192 --replicas 2 --seed 11 --csv",
        "table --n 8192 --replicas 1 --seed 11 --generators markov,fgn",
    };
    const std::string cli = std::string("\"") + LRD_CLI_PATH + "\" ";
    for (const char* args : commands) {
        int s1 = 0, s2 = 0, s3 = 0;
        const std::string a = shell(cli + args + " 2>/dev/null", s1);
        const std::string b = shell(cli + args + " 2>/dev/null", s2);
        const std::string c = shell("LRD_THREADS=3 " + cli + args + " 2>/dev/null", s3);
        out.require(s1 == 0 && s2 == 0 && s3 == 0 && !a.empty() && a == b && a == c,
                    std::string(args) + " (" + std::to_string(a.size()) + " bytes, identical across 3 runs)");
    }
    // Estimation of a generated stream is itself reproducible.
    const std::string pipeline = cli + "generate --model markov --hurst 0.8 --n 2000000 --seed 8 --format bits | " +
                                 cli + "estimate --format bits --block 100";
    int s1 = 0, s2 = 0;
    const std::string a = shell(pipeline, s1);
    const std::string b = shell(pipeline, s2);
    out.require(s1 == 0 && s2 == 0 && !a.empty() && a == b, "generate | estimate pipeline");
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
        {"1 law identities", law_identities},
        {"2 sampler exactness", sampler_exactness},
        {"3 mean control", mean_control},
        {"4 LRD exponent", lrd_exponent},
        {"5 estimator table reproduction", table_reproduction},
        {"6 estimator null", estimator_null},
        {"7 throughput", throughput},
        {"8 determinism", determinism},
    };
    std::set<int> selected;
    for (int i = 1; i < argc; ++i) selected.insert(std::atoi(argv[i]));

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        if (!selected.empty() && !selected.count(static_cast<int>(i + 1))) continue;
        const auto t0 = Clock::now();
        Outcome o;
        try {
            o = criteria[i].second();
        } catch (const std::exception& e) {
            o.require(false, std::string("exception: ") + e.what());
        }
        for (const auto& note : o.notes) std::printf("%s\n", note.c_str());
        std::printf("%s criterion %s (%.1f s)\n", o.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                    seconds_since(t0));
        std::fflush(stdout);
        failures += !o.pass;
    }
    return failures == 0 ? 0 : 1;
}
