#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace lrd {

enum class ErrorCode {
    OutOfRange,
    InvalidRegion,
    OrderingViolation,
    TooShort,
    ConstantSeries,
    NoConvergence,
    EmbeddingNotPSD,
    NegativeACF,
    StateOverflow,
    ParseError,
    IoError,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every failure raised by the library carries one of the codes above.
/// InvalidRegion errors also carry the validity threshold for pi0.
class Error : public std::runtime_error {
public:
    Error(ErrorCode code, const std::string& what, std::optional<double> value = std::nullopt)
        : std::runtime_error(what), code_(code), value_(value) {}

    ErrorCode code() const noexcept { return code_; }
    std::optional<double> value() const noexcept { return value_; }

private:
    ErrorCode code_;
    std::optional<double> value_;
};

}  // namespace lrd
