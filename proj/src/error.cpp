#include "padkit/error.hpp"

namespace padkit {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage: return "Usage";
    case ErrorCode::Io: return "IoError";
    case ErrorCode::BadHeader: return "BadHeader";
    case ErrorCode::MalformedRow: return "MalformedRow";
    case ErrorCode::DuplicateId: return "DuplicateId";
    case ErrorCode::EmptyManifest: return "EmptyManifest";
    case ErrorCode::InvariantViolation: return "InvariantViolation";
    case ErrorCode::BadMagic: return "BadMagic";
    case ErrorCode::VersionUnsupported: return "VersionUnsupported";
    case ErrorCode::TruncatedPayload: return "TruncatedPayload";
    case ErrorCode::DimMismatch: return "DimMismatch";
    case ErrorCode::MissingEmbedding: return "MissingEmbedding";
    case ErrorCode::DegenerateData: return "DegenerateData";
    case ErrorCode::NoSuchSpecies: return "NoSuchSpecies";
    case ErrorCode::NoAttacks: return "NoAttacks";
    case ErrorCode::NoBonaFide: return "NoBonaFide";
    case ErrorCode::DegenerateScores: return "DegenerateScores";
    case ErrorCode::NanLoss: return "NanLoss";
    case ErrorCode::Diverged: return "Diverged";
    case ErrorCode::AllCellsFailed: return "AllCellsFailed";
  }
  return "Unknown";
}

ErrorCategory category_of(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage:
      return ErrorCategory::Usage;
    case ErrorCode::NanLoss:
    case ErrorCode::Diverged:
    case ErrorCode::AllCellsFailed:
      return ErrorCategory::Numeric;
    default:
      return ErrorCategory::Data;
  }
}

std::string_view to_string(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Usage: return "usage";
    case ErrorCategory::Data: return "data";
    case ErrorCategory::Numeric: return "numeric";
  }
  return "unknown";
}

int exit_code_for(ErrorCategory category) {
  switch (category) {
    case ErrorCategory::Usage: return 1;
    case ErrorCategory::Data: return 2;
    case ErrorCategory::Numeric: return 3;
  }
  return 1;
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(message), code_(code) {}

}  // namespace padkit
