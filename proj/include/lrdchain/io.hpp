#pragma once

// Series serialization. Three formats:
//
//   bits   "LRDBITS1", symbol count as 8-byte little-endian, then the
//          symbols packed 8 per byte, least significant bit first; the
//          unused high bits of the last byte are zero.
//   lines  one value per line, shortest round-trip decimal form.
//   csv    header "index,value" then one row per value.
//
// Numbers are written and parsed with <charconv>, independent of locale.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace lrd {

enum class Format { Bits, Lines, Csv };

std::optional<Format> parse_format(std::string_view name) noexcept;
std::string_view to_string(Format f) noexcept;

inline constexpr std::array<char, 8> kBitsMagic{'L', 'R', 'D', 'B', 'I', 'T', 'S', '1'};

/// FNV-1a over the little-endian IEEE-754 bytes of each value, with
/// symbols hashed as 0.0 / 1.0. A binary stream and its text rendering
/// therefore share a checksum.
class Checksum {
public:
    void update(std::span<const std::uint8_t> symbols);
    void update(std::span<const double> values);
    std::uint64_t value() const noexcept { return hash_; }
    std::string hex() const;

private:
    void mix(std::uint64_t bits);
    std::uint64_t hash_ = 0xcbf29ce484222325ULL;
};

/// Incremental writer; the symbol count for the bits format must be known
/// up front because it precedes the payload.
class SeriesWriter {
public:
    SeriesWriter(std::ostream& out, Format format, std::uint64_t total_count);
    void write(std::span<const std::uint8_t> symbols);
    /// Throws OutOfRange for the bits format.
    void write(std::span<const double> values);
    /// Flushes; throws IoError if the stream failed or the count differs.
    void finish();

private:
    void header();
    void check();
    std::ostream& out_;
    Format format_;
    std::uint64_t total_;
    std::uint64_t written_ = 0;
    std::uint8_t pending_byte_ = 0;
    std::string buffer_;
};

/// A parsed series: `symbols` is set when every value is 0 or 1 (always for
/// the bits format), `values` always.
struct LoadedSeries {
    std::vector<double> values;
    std::optional<std::vector<std::uint8_t>> symbols;
};

/// Throws ParseError on malformed input, IoError when the stream fails.
LoadedSeries read_series(std::istream& in, Format format);

/// Shortest round-trip rendering of a double.
std::string format_double(double v);

}  // namespace lrd
