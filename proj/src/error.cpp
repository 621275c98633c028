#include "lrdchain/error.hpp"

namespace lrd {

std::string_view to_string(ErrorCode code) noexcept {
    switch (code) {
        case ErrorCode::OutOfRange: return "OutOfRange";
        case ErrorCode::InvalidRegion: return "InvalidRegion";
        case ErrorCode::OrderingViolation: return "OrderingViolation";
        case ErrorCode::TooShort: return "TooShort";
        case ErrorCode::ConstantSeries: return "ConstantSeries";
        case ErrorCode::NoConvergence: return "NoConvergence";
        case ErrorCode::EmbeddingNotPSD: return "EmbeddingNotPSD";
        case ErrorCode::NegativeACF: return "NegativeACF";
        case ErrorCode::StateOverflow: return "StateOverflow";
        case ErrorCode::ParseError: return "ParseError";
        case ErrorCode::IoError: return "IoError";
    }
    return "Unknown";
}

}  // namespace lrd
