// lrdchain: generate, estimate, verify, table.
//
// Exit codes: 0 success, 1 verification failure, 2 bad parameters or
// unparseable input, 3 I/O failure. Data goes to stdout (or --out), all
// diagnostics to stderr.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "lrdchain/alt_generators.hpp"
#include "lrdchain/chain.hpp"
#include "lrdchain/error.hpp"
#include "lrdchain/estimators.hpp"
#include "lrdchain/experiments.hpp"
#include "lrdchain/io.hpp"
#include "lrdchain/series.hpp"

namespace {

constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr std::size_t kChunk = std::size_t{1} << 20;

int exit_code_for(lrd::ErrorCode code) { return code == lrd::ErrorCode::IoError ? kExitIo : kExitUsage; }

// Output sink: a file when a path is given, stdout otherwise.
class Sink {
public:
    explicit Sink(const std::string& path) {
        if (path.empty() || path == "-") return;
        file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
        if (!*file_) throw lrd::Error(lrd::ErrorCode::IoError, "cannot open '" + path + "' for writing");
    }
    std::ostream& stream() { return file_ ? *file_ : std::cout; }

private:
    std::unique_ptr<std::ofstream> file_;
};

// ---------------------------------------------------------------------------

struct GenerateOptions {
    std::string model;
    std::optional<double> hurst, alpha, mean, pi0;
    double threshold = 0.5;
    std::size_t n = 0;
    std::uint64_t seed = 1;
    std::size_t block = 0;
    std::string format = "lines";
    std::string out;
    bool checksum = false;
};

double target_hurst(const GenerateOptions& o) {
    if (o.hurst) return *o.hurst;
    if (o.alpha) return lrd::alpha_to_hurst(*o.alpha);
    throw lrd::Error(lrd::ErrorCode::OutOfRange, "one of --hurst or --alpha is required");
}

// Pulls binary symbols in chunks from a source with fill / fill_block_sums.
template <class Source>
void stream_binary(Source& source, const GenerateOptions& o, lrd::SeriesWriter& writer, lrd::Checksum& sum) {
    if (o.block == 0) {
        std::vector<std::uint8_t> buf;
        for (std::size_t done = 0; done < o.n; done += buf.size()) {
            buf.resize(std::min(kChunk, o.n - done));
            source.fill(buf);
            writer.write(std::span<const std::uint8_t>(buf));
            sum.update(std::span<const std::uint8_t>(buf));
        }
        return;
    }
    const std::size_t points = o.n / o.block;
    const std::size_t per_chunk = std::max<std::size_t>(1, kChunk / o.block);
    std::vector<double> buf;
    for (std::size_t done = 0; done < points; done += buf.size()) {
        buf.resize(std::min(per_chunk, points - done));
        source.fill_block_sums(buf, o.block);
        writer.write(std::span<const double>(buf));
        sum.update(std::span<const double>(buf));
    }
}

int cmd_generate(const GenerateOptions& o) {
    const auto format = *lrd::parse_format(o.format);
    if (o.n == 0) throw lrd::Error(lrd::ErrorCode::OutOfRange, "--n must be positive");
    if (o.block > 0 && format == lrd::Format::Bits)
        throw lrd::Error(lrd::ErrorCode::OutOfRange, "--block produces counts; use --format lines or csv");
    if (o.model == "fgn" && format == lrd::Format::Bits)
        throw lrd::Error(lrd::ErrorCode::OutOfRange, "fgn is real-valued; use --format lines or csv");
    const std::size_t total = o.block > 0 ? o.n / o.block : o.n;
    if (total == 0) throw lrd::Error(lrd::ErrorCode::OutOfRange, "--n must be at least --block");

    // Validate everything before touching the output.
    std::optional<lrd::MarkovSource> markov;
    std::optional<lrd::ItMapSource> itmap;
    double hurst = 0.0;
    if (o.model == "markov") {
        const double alpha = o.alpha ? *o.alpha : lrd::hurst_to_alpha(target_hurst(o));
        const double pi0 = o.pi0 ? *o.pi0 : 1.0 - o.mean.value_or(0.5);
        markov.emplace(lrd::validate_params(pi0, alpha, o.seed));
    } else if (o.model == "itmap") {
        if (o.mean || o.pi0)
            throw lrd::Error(lrd::ErrorCode::OutOfRange, "--mean/--pi0 apply to the markov model only");
        itmap.emplace(lrd::map_params_for_hurst(target_hurst(o), o.seed, o.threshold));
    } else {
        if (o.mean || o.pi0)
            throw lrd::Error(lrd::ErrorCode::OutOfRange, "--mean/--pi0 apply to the markov model only");
        hurst = target_hurst(o);
    }

    Sink sink(o.out);
    lrd::SeriesWriter writer(sink.stream(), format, total);
    lrd::Checksum sum;
    if (markov) {
        stream_binary(*markov, o, writer, sum);
    } else if (itmap) {
        stream_binary(*itmap, o, writer, sum);
    } else {
        auto series = lrd::fgn_generate(hurst, o.n, o.seed);
        std::vector<double> values =
            o.block > 0 ? lrd::aggregate(series.values, o.block).values : std::move(series.values);
        writer.write(std::span<const double>(values));
        sum.update(std::span<const double>(values));
    }
    writer.finish();
    if (o.checksum) std::cerr << "checksum " << sum.hex() << '\n';
    return 0;
}

// ---------------------------------------------------------------------------

struct EstimateOptions {
    std::string in;
    std::string format = "lines";
    std::string methods = "all";
    std::size_t block = 0;
    bool csv = false;
    bool checksum = false;
};

std::vector<lrd::Method> parse_methods(const std::string& list) {
    if (list == "all") return {lrd::kAllMethods.begin(), lrd::kAllMethods.end()};
    std::vector<lrd::Method> out;
    std::stringstream ss(list);
    std::string name;
    while (std::getline(ss, name, ',')) {
        const auto m = lrd::parse_method(name);
        if (!m) throw lrd::Error(lrd::ErrorCode::OutOfRange, "unknown method '" + name + "'");
        out.push_back(*m);
    }
    if (out.empty()) throw lrd::Error(lrd::ErrorCode::OutOfRange, "no methods selected");
    return out;
}

std::string fmt(double v, const char* spec = "%.4f") {
    char buf[32];
    std::snprintf(buf, sizeof buf, spec, v);
    return buf;
}

int cmd_estimate(const EstimateOptions& o) {
    const auto format = *lrd::parse_format(o.format);
    const auto methods = parse_methods(o.methods);

    lrd::LoadedSeries loaded;
    if (o.in.empty() || o.in == "-") {
        loaded = lrd::read_series(std::cin, format);
    } else {
        std::ifstream file(o.in, std::ios::binary);
        if (!file) throw lrd::Error(lrd::ErrorCode::IoError, "cannot open '" + o.in + "'");
        loaded = lrd::read_series(file, format);
    }
    if (o.checksum) {
        lrd::Checksum sum;
        sum.update(std::span<const double>(loaded.values));
        std::cerr << "checksum " << sum.hex() << '\n';
    }
    lrd::require_finite(loaded.values);
    std::vector<double> values =
        o.block > 0 ? lrd::aggregate(loaded.values, o.block).values : std::move(loaded.values);

    const auto outcomes = lrd::estimate_all(values, methods);
    bool any_ok = false;
    if (o.csv) std::cout << "method,h,ci_low,ci_high,r2,n_used,error\n";
    else std::printf("%-14s %8s %8s %8s %7s %10s\n", "method", "H", "ci_low", "ci_high", "r2", "n_used");
    for (const auto& out : outcomes) {
        const std::string name(lrd::to_string(out.method));
        if (!out.estimate) {
            const std::string code(lrd::to_string(*out.error));
            if (o.csv) std::cout << name << ",,,,,," << code << '\n';
            else std::cout << name << std::string(name.size() < 14 ? 15 - name.size() : 1, ' ') << "ERR "
                           << code << ": " << out.message << '\n';
            continue;
        }
        any_ok = true;
        const auto& e = *out.estimate;
        const std::string lo = e.ci_low ? fmt(*e.ci_low) : "";
        const std::string hi = e.ci_high ? fmt(*e.ci_high) : "";
        std::string r2 = e.fit ? fmt(e.fit->r2, "%.3f") : "";
        if (o.csv) {
            std::cout << name << ',' << fmt(e.h) << ',' << lo << ',' << hi << ',' << r2 << ',' << e.n_used << ",\n";
        } else {
            if (e.fit && e.fit->flagged()) r2 += "*";
            std::printf("%-14s %8s %8s %8s %7s %10zu\n", name.c_str(), fmt(e.h).c_str(), lo.empty() ? "-" : lo.c_str(),
                        hi.empty() ? "-" : hi.c_str(), r2.empty() ? "-" : r2.c_str(), e.n_used);
        }
    }
    std::cout.flush();
    if (!std::cout) throw lrd::Error(lrd::ErrorCode::IoError, "write to stdout failed");
    return any_ok ? 0 : kExitUsage;
}

// ---------------------------------------------------------------------------

struct VerifyOptions {
    std::optional<double> pi0, alpha, hurst;
    std::string level = "law";
    std::optional<std::uint64_t> n;
    std::uint64_t seed = 1;
    std::size_t replicas = 1000;
    std::uint64_t n_max = 1'000'000;
};

int cmd_verify(const VerifyOptions& o) {
    const double alpha = o.alpha ? *o.alpha : o.hurst ? lrd::hurst_to_alpha(*o.hurst) : 0.5;
    const auto params = lrd::validate_params(o.pi0.value_or(0.5), alpha, o.seed);
    std::vector<lrd::CheckResult> checks;
    if (o.level == "law") checks = lrd::law_checks(params, o.n.value_or(1'000'000));
    else if (o.level == "sampler") checks = lrd::sampler_checks(params, o.n.value_or(10'000'000));
    else checks = lrd::scaling_checks(params, o.n.value_or(10'000'000), o.replicas, o.n_max);

    bool all = true;
    for (const auto& c : checks) {
        all &= c.pass;
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": measured=" << c.measured
                  << " limit=" << c.limit;
        if (!c.detail.empty()) std::cout << " (" << c.detail << ')';
        std::cout << '\n';
    }
    std::cout.flush();
    return all ? 0 : kExitFail;
}

// ---------------------------------------------------------------------------

struct TableOptions {
    std::uint64_t seed = 1;
    std::size_t n = 1'000'000;
    std::size_t replicas = 3;
    std::size_t block = 100;
    std::string generators = "fgn,itmap,markov";
    std::vector<double> hursts{0.625, 0.75, 0.875};
    double pi0 = 0.5;
    bool csv = false;
    std::string out;
};

int cmd_table(const TableOptions& o) {
    lrd::TableConfig config;
    config.generators.clear();
    std::stringstream ss(o.generators);
    std::string name;
    while (std::getline(ss, name, ',')) {
        if (name == "fgn") config.generators.push_back(lrd::Generator::Fgn);
        else if (name == "itmap") config.generators.push_back(lrd::Generator::ItMap);
        else if (name == "markov") config.generators.push_back(lrd::Generator::Markov);
        else if (!name.empty()) throw lrd::Error(lrd::ErrorCode::OutOfRange, "unknown generator '" + name + "'");
    }
    config.hursts = o.hursts;
    config.replicas = o.replicas;
    config.points = o.n;
    config.block = o.block;
    config.markov_pi0 = o.pi0;
    config.seed = o.seed;
    if (o.n < lrd::kMinLengthWavelet)
        std::cerr << "warning: n < " << lrd::kMinLengthWavelet << "; some estimators will report ERR\n";

    Sink sink(o.out);  // fail on an unwritable path before the long run
    const auto result = lrd::table2_harness(config);
    auto& os = sink.stream();
    os << (o.csv ? lrd::format_table_csv(result) : lrd::format_table_text(result));
    os.flush();
    if (!os) throw lrd::Error(lrd::ErrorCode::IoError, "write failed");
    for (const auto& [g, seconds] : result.generate_seconds)
        std::cerr << "generation time " << lrd::to_string(g) << ": " << fmt(seconds, "%.2f") << " s\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Long-range dependent binary traffic: generation, Hurst estimation, verification"};
    app.require_subcommand(1);

    GenerateOptions gen;
    auto* g = app.add_subcommand("generate", "Write a generated series");
    g->add_option("--model", gen.model, "markov | itmap | fgn")
        ->required()
        ->check(CLI::IsMember({"markov", "itmap", "fgn"}));
    auto* g_h = g->add_option("--hurst", gen.hurst, "Target Hurst parameter");
    g->add_option("--alpha", gen.alpha, "Tail exponent alpha = 2(1 - H)")->excludes(g_h);
    auto* g_mean = g->add_option("--mean", gen.mean, "Mean of the binary series (markov, default 0.5)");
    g->add_option("--pi0", gen.pi0, "Equilibrium probability of state 0 (markov)")->excludes(g_mean);
    g->add_option("--threshold", gen.threshold, "Map threshold d (itmap)");
    g->add_option("--n", gen.n, "Number of symbols (before aggregation)")->required();
    g->add_option("--seed", gen.seed, "Random seed");
    g->add_option("--block", gen.block, "Emit sums over blocks of this many symbols");
    g->add_option("--format", gen.format, "bits | lines | csv")->check(CLI::IsMember({"bits", "lines", "csv"}));
    g->add_option("--out", gen.out, "Output path (default stdout)");
    g->add_flag("--checksum", gen.checksum, "Print a 64-bit hash of the series to stderr");

    EstimateOptions est;
    auto* e = app.add_subcommand("estimate", "Estimate the Hurst parameter of a series");
    e->add_option("--in", est.in, "Input path (default stdin)");
    e->add_option("--format", est.format, "bits | lines | csv")->check(CLI::IsMember({"bits", "lines", "csv"}));
    e->add_option("--methods", est.methods,
                  "Comma list of rs, rs_modified, aggvar, periodogram, local_whittle, wavelet; or all");
    e->add_option("--block", est.block, "Aggregate blocks of this many values first");
    e->add_flag("--csv", est.csv, "CSV output");
    e->add_flag("--checksum", est.checksum, "Print a 64-bit hash of the input series to stderr");

    VerifyOptions ver;
    auto* v = app.add_subcommand("verify", "Check the chain against its analytic laws");
    v->add_option("--pi0", ver.pi0, "Equilibrium probability of state 0 (default 0.5)");
    auto* v_a = v->add_option("--alpha", ver.alpha, "Tail exponent (default 0.5)");
    v->add_option("--hurst", ver.hurst, "Hurst parameter instead of --alpha")->excludes(v_a);
    v->add_option("--level", ver.level, "law | sampler | scaling")->check(CLI::IsMember({"law", "sampler", "scaling"}));
    v->add_option("--n", ver.n, "law: largest k; sampler: draws; scaling: series length");
    v->add_option("--seed", ver.seed, "Random seed");
    v->add_option("--replicas", ver.replicas, "scaling: count-variance replicas");
    v->add_option("--n-max", ver.n_max, "scaling: longest count-variance horizon");

    TableOptions tab;
    auto* t = app.add_subcommand("table", "Run every estimator on simulated series");
    t->add_option("--seed", tab.seed, "Master seed");
    t->add_option("--n", tab.n, "Analysed points per cell (after aggregation)");
    t->add_option("--replicas", tab.replicas, "Replicas per (generator, H)");
    t->add_option("--block", tab.block, "Symbols per point for binary generators");
    t->add_option("--generators", tab.generators, "Comma list of fgn, itmap, markov");
    t->add_option("--hurst", tab.hursts, "Hurst values")->delimiter(',');
    t->add_option("--pi0", tab.pi0, "Equilibrium probability of state 0 for markov cells");
    auto* t_csv = t->add_flag("--csv", tab.csv, "CSV output");
    t->add_flag("--text", "Aligned text output (default)")->excludes(t_csv);
    t->add_option("--out", tab.out, "Output path (default stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::CallForAllHelp& ex) {
        return app.exit(ex);
    } catch (const CLI::ParseError& ex) {
        app.exit(ex);
        return kExitUsage;
    }

    try {
        if (*g) return cmd_generate(gen);
        if (*e) return cmd_estimate(est);
        if (*v) return cmd_verify(ver);
        if (*t) return cmd_table(tab);
    } catch (const lrd::Error& ex) {
        std::cerr << "error [" << lrd::to_string(ex.code()) << "]: " << ex.what() << '\n';
        return exit_code_for(ex.code());
    } catch (const std::exception& ex) {
        std::cerr << "error: " << ex.what() << '\n';
        return kExitFail;
    }
    return kExitUsage;
}
