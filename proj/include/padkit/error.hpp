#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace padkit {

enum class ErrorCode {
  // usage
  Usage,
  // data
  Io,
  BadHeader,
  MalformedRow,
  DuplicateId,
  EmptyManifest,
  InvariantViolation,
  BadMagic,
  VersionUnsupported,
  TruncatedPayload,
  DimMismatch,
  MissingEmbedding,
  DegenerateData,
  NoSuchSpecies,
  NoAttacks,
  NoBonaFide,
  DegenerateScores,
  // numeric
  NanLoss,
  Diverged,
  AllCellsFailed,
};

enum class ErrorCategory { Usage, Data, Numeric };

std::string_view to_string(ErrorCode code);
ErrorCategory category_of(ErrorCode code);
std::string_view to_string(ErrorCategory category);

/// Process exit status for a failure category (1 usage, 2 data, 3 numeric).
int exit_code_for(ErrorCategory category);

/// The single exception type thrown by the toolkit. The code identifies the
/// failure; the message carries the detail (line number, sample id, offsets).
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }
  ErrorCategory category() const noexcept { return category_of(code_); }

 private:
  ErrorCode code_;
};

}  // namespace padkit
