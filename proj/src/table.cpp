#include <bit>
#include <chrono>
#include <cstdio>
#include <sstream>

#include "lrdchain/alt_generators.hpp"
#include "lrdchain/error.hpp"
#include "lrdchain/experiments.hpp"
#include "parallel.hpp"

namespace lrd {

namespace {

std::uint64_t cell_seed(std::uint64_t master, Generator g, double hurst, std::size_t replica) {
    // Keyed by content rather than position so a cell keeps its stream when
    // the configuration selects a subset of generators or H values.
    std::uint64_t s = derive_seed(master, static_cast<std::uint64_t>(g));
    s = derive_seed(s, std::bit_cast<std::uint64_t>(hurst));
    return derive_seed(s, replica);
}

void check_config(const TableConfig& config) {
    for (Generator g : config.generators)
        if (g != Generator::Fgn && g != Generator::ItMap && g != Generator::Markov)
            throw Error(ErrorCode::OutOfRange, "table generators must be fgn, itmap or markov");
    if (config.points == 0) throw Error(ErrorCode::OutOfRange, "table: points must be positive");
    if (config.block == 0) throw Error(ErrorCode::OutOfRange, "table: block must be positive");
}

std::string source_label(Generator g) {
    switch (g) {
        case Generator::Fgn: return "FGN";
        case Generator::ItMap: return "It. map";
        case Generator::Markov: return "Markov";
        default: return std::string(to_string(g));
    }
}

std::string fixed3(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", v);
    return buf;
}

std::string trimmed_hurst(double h) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", h);
    return buf;
}

}  // namespace

std::vector<double> table_cell_series(Generator generator, double hurst, std::uint64_t seed,
                                      const TableConfig& config) {
    std::vector<double> out;
    switch (generator) {
        case Generator::Fgn:
            return fgn_generate(hurst, config.points, seed).values;
        case Generator::ItMap: {
            ItMapSource source(map_params_for_hurst(hurst, seed, config.map_threshold));
            out.resize(config.points);
            source.fill_block_sums(out, config.block);
            return out;
        }
        case Generator::Markov: {
            MarkovSource source(validate_params(config.markov_pi0, hurst_to_alpha(hurst), seed));
            out.resize(config.points);
            source.fill_block_sums(out, config.block);
            return out;
        }
        default:
            throw Error(ErrorCode::OutOfRange, "table generators must be fgn, itmap or markov");
    }
}

TableResult table2_harness(const TableConfig& config) {
    check_config(config);
    TableResult result;
    for (Generator g : config.generators)
        for (double h : config.hursts)
            for (std::size_t r = 0; r < config.replicas; ++r) {
                TableCell cell;
                cell.generator = g;
                cell.hurst = h;
                cell.replica = r;
                cell.seed = cell_seed(config.seed, g, h, r);
                result.rows.push_back(cell);
            }

    const std::size_t threads = config.threads ? config.threads : thread_count();
    detail::parallel_for(result.rows.size(), threads, [&](std::size_t i) {
        TableCell& cell = result.rows[i];
        std::vector<double> series;
        const auto start = std::chrono::steady_clock::now();
        try {
            series = table_cell_series(cell.generator, cell.hurst, cell.seed, config);
        } catch (const std::exception& e) {
            cell.generator_error = e.what();
            return;
        }
        cell.generate_seconds =
            std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        const auto outcomes = estimate_all(series);
        for (std::size_t m = 0; m < outcomes.size(); ++m) {
            const auto& o = outcomes[m];
            if (o.estimate) {
                cell.h[m] = o.estimate->h;
                if (o.estimate->fit) cell.r2[m] = o.estimate->fit->r2;
            } else {
                cell.errors[m] = o.message;
            }
        }
    });
    for (const auto& cell : result.rows) result.generate_seconds[cell.generator] += cell.generate_seconds;
    return result;
}

namespace {

std::string cell_text(const TableCell& cell, std::size_t m) {
    if (!cell.h[m]) return "ERR";
    std::string s = fixed3(*cell.h[m]);
    if (cell.r2[m] && *cell.r2[m] < 0.9) s += "*";
    return s;
}

}  // namespace

std::string format_table_text(const TableResult& result) {
    static const char* const kHeader[] = {"Source", "H",           "R/S",         "Mod. R/S",
                                          "Agg. Var.", "Periodogram", "Local Whit.", "Wavelets"};
    static const int kWidth[] = {8, 6, 7, 9, 10, 12, 12, 9};
    std::ostringstream out;
    auto row = [&](const std::string (&fields)[8]) {
        std::string line;
        for (int c = 0; c < 8; ++c) {
            char buf[64];
            std::snprintf(buf, sizeof buf, c < 2 ? "%-*s" : "%*s", kWidth[c], fields[c].c_str());
            line += buf;
            if (c < 7) line += ' ';
        }
        while (!line.empty() && line.back() == ' ') line.pop_back();
        out << line << '\n';
    };
    std::string header[8];
    for (int c = 0; c < 8; ++c) header[c] = kHeader[c];
    row(header);
    const std::string rule(82, '-');
    out << rule << '\n';

    bool flagged = false, failed = false;
    for (std::size_t i = 0; i < result.rows.size(); ++i) {
        const auto& cell = result.rows[i];
        if (i > 0) {
            const auto& prev = result.rows[i - 1];
            if (prev.generator != cell.generator || prev.hurst != cell.hurst) out << rule << '\n';
        }
        std::string fields[8];
        fields[0] = source_label(cell.generator);
        fields[1] = trimmed_hurst(cell.hurst);
        for (std::size_t m = 0; m < 6; ++m) {
            fields[2 + m] = cell.generator_error.empty() ? cell_text(cell, m) : "ERR";
            flagged |= fields[2 + m].back() == '*';
            failed |= fields[2 + m] == "ERR";
        }
        row(fields);
    }
    if (!result.rows.empty()) out << rule << '\n';
    if (flagged) out << "* log-log fit with r2 < 0.9\n";
    if (failed) {
        for (const auto& cell : result.rows) {
            const std::string where = source_label(cell.generator) + " H=" + trimmed_hurst(cell.hurst) +
                                      " replica " + std::to_string(cell.replica);
            if (!cell.generator_error.empty()) {
                out << "ERR " << where << ": " << cell.generator_error << '\n';
                continue;
            }
            for (std::size_t m = 0; m < 6; ++m)
                if (!cell.errors[m].empty()) out << "ERR " << where << ": " << cell.errors[m] << '\n';
        }
    }
    return out.str();
}

std::string format_table_csv(const TableResult& result) {
    std::ostringstream out;
    out << "source,hurst,replica,seed";
    for (Method m : kAllMethods) out << ',' << to_string(m);
    for (Method m : kAllMethods) out << ',' << to_string(m) << "_r2";
    out << ",flagged,error\n";
    for (const auto& cell : result.rows) {
        out << to_string(cell.generator) << ',' << trimmed_hurst(cell.hurst) << ',' << cell.replica << ','
            << cell.seed;
        std::string flagged;
        for (std::size_t m = 0; m < 6; ++m) {
            out << ',';
            if (cell.h[m]) out << fixed3(*cell.h[m]);
            else out << "ERR";
        }
        for (std::size_t m = 0; m < 6; ++m) {
            out << ',';
            if (cell.r2[m]) {
                out << fixed3(*cell.r2[m]);
                if (*cell.r2[m] < 0.9) {
                    if (!flagged.empty()) flagged += ';';
                    flagged += to_string(kAllMethods[m]);
                }
            }
        }
        std::string error = cell.generator_error;
        for (std::size_t m = 0; m < 6 && error.empty(); ++m) error = cell.errors[m];
        for (char& c : error)
            if (c == ',' || c == '\n') c = ';';
        out << ',' << flagged << ',' << error << '\n';
    }
    return out.str();
}

}  // namespace lrd
