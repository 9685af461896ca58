#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include "padkit/types.hpp"

namespace padkit {

/// One scored presentation. Higher score means more attack-like.
struct ScoreEntry {
  std::string sample_id;
  Label label = Label::BonaFide;
  PaiSpecies pai_species;
  double score = 0.0;

  friend bool operator==(const ScoreEntry&, const ScoreEntry&) = default;
};

/// Interchange unit between training and metrics.
struct ScoreSet {
  std::vector<ScoreEntry> entries;

  std::size_t size() const noexcept { return entries.size(); }
  bool empty() const noexcept { return entries.empty(); }
  std::size_t count(Label label) const;

  friend bool operator==(const ScoreSet&, const ScoreSet&) = default;
};

/// Throws InvariantViolation on a non-finite or out-of-[0,1] score or an
/// inconsistent label/species pair.
void validate(const ScoreSet& scores);

inline constexpr std::string_view kScoresHeader = "sample_id,label,pai_species,score";

/// Scores are written in shortest round-trip decimal form, so write/read is lossless.
void write_scores(const ScoreSet& scores, std::ostream& out);
void write_scores(const ScoreSet& scores, const std::filesystem::path& path);

/// Throws BadHeader, Io, or MalformedRow with the line number (bad fields and
/// scores outside [0,1] alike).
ScoreSet read_scores(std::istream& in);
ScoreSet read_scores(const std::filesystem::path& path);

/// Shortest decimal that parses back to the same double.
std::string format_double(double value);

}  // namespace padkit
