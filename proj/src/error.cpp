#include "bcpr/error.hpp"

namespace bcpr {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::LengthMismatch: return "LengthMismatch";
    case ErrorCode::SingleClass: return "SingleClass";
    case ErrorCode::DegenerateSplit: return "DegenerateSplit";
    case ErrorCode::ZeroMass: return "ZeroMass";
    case ErrorCode::Degenerate: return "Degenerate";
    case ErrorCode::DegenerateHyperplane: return "DegenerateHyperplane";
    case ErrorCode::EmptySelection: return "EmptySelection";
    case ErrorCode::SubsetSingleClass: return "SubsetSingleClass";
    case ErrorCode::GenerationStalled: return "GenerationStalled";
    case ErrorCode::InvalidGamma: return "InvalidGamma";
    case ErrorCode::DivergenceDetected: return "DivergenceDetected";
    case ErrorCode::MissingLabelColumn: return "MissingLabelColumn";
    case ErrorCode::EmptyFile: return "EmptyFile";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SingleClassAfterMapping: return "SingleClassAfterMapping";
    case ErrorCode::UnknownColumn: return "UnknownColumn";
    case ErrorCode::SchemaViolation: return "SchemaViolation";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

}  // namespace bcpr
