#pragma once

#include <cstddef>
#include <filesystem>
#include <istream>
#include <map>
#include <ostream>
#include <string>
#include <tuple>
#include <vector>

#include "padkit/types.hpp"

namespace padkit {

/// One image's identity within a dataset.
struct SampleRecord {
  std::string sample_id;
  Label label = Label::BonaFide;
  PaiSpecies pai_species;
  Partition partition = Partition::Train;
  std::string sensor;
  std::string source_path;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

/// Key of one summary cell.
struct CountKey {
  Label label;
  PaiSpecies species;
  Partition partition;

  friend bool operator==(const CountKey&, const CountKey&) = default;
  friend auto operator<=>(const CountKey& a, const CountKey& b) {
    return std::tie(a.label, a.species, a.partition) <=> std::tie(b.label, b.species, b.partition);
  }
};

using CountTable = std::map<CountKey, std::size_t>;

/// Validated list of sample records. Immutable once built; counts are
/// always recomputed from the records.
class Manifest {
 public:
  /// Throws DuplicateId, EmptyManifest, or MalformedRow (label/species mismatch).
  explicit Manifest(std::vector<SampleRecord> records);

  const std::vector<SampleRecord>& records() const noexcept { return records_; }
  std::size_t size() const noexcept { return records_.size(); }

  CountTable counts() const;

  friend bool operator==(const Manifest&, const Manifest&) = default;

 private:
  std::vector<SampleRecord> records_;
};

inline constexpr std::string_view kManifestHeader =
    "sample_id,label,pai_species,partition,sensor,source_path";

Manifest parse_manifest(std::istream& in);
Manifest parse_manifest(const std::filesystem::path& path);

void write_manifest(const Manifest& manifest, std::ostream& out);
void write_manifest(const Manifest& manifest, const std::filesystem::path& path);

/// One row of the summary table: a (label, species) class with per-partition counts.
struct SummaryRow {
  Label label;
  PaiSpecies species;
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;

  std::size_t total() const noexcept { return train + val + test; }
};

struct Summary {
  std::vector<SummaryRow> rows;  // bona fide first, then attacks ordered by species name
  std::size_t train = 0;
  std::size_t val = 0;
  std::size_t test = 0;

  std::size_t total() const noexcept { return train + val + test; }
};

Summary summarize(const Manifest& manifest);

}  // namespace padkit
