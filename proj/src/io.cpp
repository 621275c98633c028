#include "lrdchain/io.hpp"

#include <bit>
#include <charconv>
#include <cstring>
#include <istream>
#include <iterator>
#include <ostream>

#include "lrdchain/error.hpp"

namespace lrd {

std::optional<Format> parse_format(std::string_view name) noexcept {
    if (name == "bits") return Format::Bits;
    if (name == "lines") return Format::Lines;
    if (name == "csv") return Format::Csv;
    return std::nullopt;
}

std::string_view to_string(Format f) noexcept {
    switch (f) {
        case Format::Bits: return "bits";
        case Format::Lines: return "lines";
        case Format::Csv: return "csv";
    }
    return "lines";
}

void Checksum::mix(std::uint64_t bits) {
    for (int i = 0; i < 8; ++i) {
        hash_ ^= (bits >> (8 * i)) & 0xff;
        hash_ *= 0x100000001b3ULL;
    }
}

void Checksum::update(std::span<const std::uint8_t> symbols) {
    const std::uint64_t zero = std::bit_cast<std::uint64_t>(0.0);
    const std::uint64_t one = std::bit_cast<std::uint64_t>(1.0);
    for (std::uint8_t s : symbols) mix(s ? one : zero);
}

void Checksum::update(std::span<const double> values) {
    for (double v : values) mix(std::bit_cast<std::uint64_t>(v));
}

std::string Checksum::hex() const {
    char buf[17];
    auto [end, ec] = std::to_chars(buf, buf + 16, hash_, 16);
    std::string s(buf, end);
    return std::string(16 - s.size(), '0') + s;
}

std::string format_double(double v) {
    char buf[32];
    auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, end);
}

SeriesWriter::SeriesWriter(std::ostream& out, Format format, std::uint64_t total_count)
    : out_(out), format_(format), total_(total_count) {
    header();
}

void SeriesWriter::header() {
    if (format_ == Format::Bits) {
        out_.write(kBitsMagic.data(), kBitsMagic.size());
        char count[8];
        for (int i = 0; i < 8; ++i) count[i] = static_cast<char>((total_ >> (8 * i)) & 0xff);
        out_.write(count, 8);
    } else if (format_ == Format::Csv) {
        out_ << "index,value\n";
    }
    check();
}

void SeriesWriter::check() {
    if (!out_) throw Error(ErrorCode::IoError, "write failed");
}

void SeriesWriter::write(std::span<const std::uint8_t> symbols) {
    if (written_ + symbols.size() > total_)
        throw Error(ErrorCode::OutOfRange, "more values written than announced");
    if (format_ == Format::Bits) {
        buffer_.clear();
        for (std::uint8_t s : symbols) {
            const unsigned bit = written_ % 8;
            if (s) pending_byte_ |= static_cast<std::uint8_t>(1u << bit);
            ++written_;
            if (bit == 7) {
                buffer_.push_back(static_cast<char>(pending_byte_));
                pending_byte_ = 0;
            }
        }
        out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
        check();
        return;
    }
    buffer_.clear();
    for (std::uint8_t s : symbols) {
        if (format_ == Format::Csv) {
            buffer_ += std::to_string(written_);
            buffer_ += ',';
        }
        buffer_ += s ? '1' : '0';
        buffer_ += '\n';
        ++written_;
    }
    out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    check();
}

void SeriesWriter::write(std::span<const double> values) {
    if (format_ == Format::Bits)
        throw Error(ErrorCode::OutOfRange, "the bits format holds binary symbols only");
    if (written_ + values.size() > total_)
        throw Error(ErrorCode::OutOfRange, "more values written than announced");
    buffer_.clear();
    char num[32];
    for (double v : values) {
        if (format_ == Format::Csv) {
            buffer_ += std::to_string(written_);
            buffer_ += ',';
        }
        auto [end, ec] = std::to_chars(num, num + sizeof num, v);
        buffer_.append(num, end);
        buffer_ += '\n';
        ++written_;
    }
    out_.write(buffer_.data(), static_cast<std::streamsize>(buffer_.size()));
    check();
}

void SeriesWriter::finish() {
    if (written_ != total_) throw Error(ErrorCode::OutOfRange, "fewer values written than announced");
    if (format_ == Format::Bits && written_ % 8 != 0) out_.put(static_cast<char>(pending_byte_));
    out_.flush();
    check();
}

namespace {

[[noreturn]] void parse_fail(const std::string& what, std::size_t line = 0) {
    throw Error(ErrorCode::ParseError, line ? what + " (line " + std::to_string(line) + ")" : what);
}

double parse_number(std::string_view field, std::size_t line) {
    while (!field.empty() && (field.front() == ' ' || field.front() == '\t')) field.remove_prefix(1);
    while (!field.empty() && (field.back() == ' ' || field.back() == '\t' || field.back() == '\r'))
        field.remove_suffix(1);
    if (!field.empty() && field.front() == '+') field.remove_prefix(1);
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
    if (ec != std::errc() || ptr != field.data() + field.size() || field.empty())
        parse_fail("not a number: '" + std::string(field) + "'", line);
    return v;
}

LoadedSeries read_bits(std::istream& in) {
    char magic[8];
    char count_bytes[8];
    if (!in.read(magic, 8) || std::memcmp(magic, kBitsMagic.data(), 8) != 0)
        parse_fail("missing LRDBITS1 header");
    if (!in.read(count_bytes, 8)) parse_fail("truncated bits header");
    std::uint64_t count = 0;
    for (int i = 0; i < 8; ++i) count |= std::uint64_t(static_cast<unsigned char>(count_bytes[i])) << (8 * i);

    const std::string payload((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad()) throw Error(ErrorCode::IoError, "read failed");
    const std::uint64_t bytes = count / 8 + (count % 8 != 0);
    if (payload.size() != bytes)
        parse_fail("bits payload has " + std::to_string(payload.size()) + " bytes, header implies " +
                   std::to_string(bytes));

    LoadedSeries out;
    std::vector<std::uint8_t> symbols(count);
    for (std::uint64_t i = 0; i < count; ++i)
        symbols[i] = (static_cast<unsigned char>(payload[i / 8]) >> (i % 8)) & 1u;
    out.values.assign(symbols.begin(), symbols.end());
    out.symbols = std::move(symbols);
    return out;
}

}  // namespace

LoadedSeries read_series(std::istream& in, Format format) {
    if (format == Format::Bits) return read_bits(in);
    LoadedSeries out;
    std::string line;
    std::size_t lineno = 0;
    bool header_seen = false;
    while (std::getline(in, line)) {
        ++lineno;
        std::string_view view(line);
        if (!view.empty() && view.back() == '\r') view.remove_suffix(1);
        if (view.find_first_not_of(" \t") == std::string_view::npos) continue;
        if (format == Format::Csv) {
            if (!header_seen) {
                if (view != "index,value") parse_fail("expected header 'index,value'", lineno);
                header_seen = true;
                continue;
            }
            const auto comma = view.find(',');
            if (comma == std::string_view::npos || view.find(',', comma + 1) != std::string_view::npos)
                parse_fail("expected two comma-separated fields", lineno);
            out.values.push_back(parse_number(view.substr(comma + 1), lineno));
        } else {
            out.values.push_back(parse_number(view, lineno));
        }
    }
    if (in.bad()) throw Error(ErrorCode::IoError, "read failed");
    if (format == Format::Csv && !header_seen) parse_fail("empty CSV input");

    bool binary = true;
    for (double v : out.values)
        if (v != 0.0 && v != 1.0) {
            binary = false;
            break;
        }
    if (binary) {
        std::vector<std::uint8_t> symbols(out.values.size());
        for (std::size_t i = 0; i < symbols.size(); ++i) symbols[i] = out.values[i] != 0.0;
        out.symbols = std::move(symbols);
    }
    return out;
}

}  // namespace lrd
