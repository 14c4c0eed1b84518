#include "spamlab/error.hpp"

namespace spamlab {

std::string_view to_string(ErrorCode code) {
    switch (code) {
        case ErrorCode::MalformedMessage: return "MalformedMessage";
        case ErrorCode::InvalidSubset: return "InvalidSubset";
        case ErrorCode::EmptyClass: return "EmptyClass";
        case ErrorCode::DimensionMismatch: return "DimensionMismatch";
        case ErrorCode::NonFiniteLoss: return "NonFiniteLoss";
        case ErrorCode::LengthMismatch: return "LengthMismatch";
        case ErrorCode::EmptyMatrix: return "EmptyMatrix";
        case ErrorCode::TooFewSamples: return "TooFewSamples";
        case ErrorCode::NoMessagesFound: return "NoMessagesFound";
        case ErrorCode::UnsupportedVersion: return "UnsupportedVersion";
        case ErrorCode::CorruptModel: return "CorruptModel";
        case ErrorCode::FeatureMismatch: return "FeatureMismatch";
        case ErrorCode::InvalidArgument: return "InvalidArgument";
        case ErrorCode::Io: return "Io";
    }
    return "Unknown";
}

}  // namespace spamlab
