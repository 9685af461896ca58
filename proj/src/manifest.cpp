#include "padkit/manifest.hpp"

#include <fstream>
#include <unordered_set>

#include "csv.hpp"
#include "padkit/error.hpp"

namespace padkit {
namespace {

constexpr std::size_t kColumns = 6;

[[noreturn]] void malformed(std::size_t line_no, const std::string& what) {
  throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

Manifest::Manifest(std::vector<SampleRecord> records) : records_(std::move(records)) {
  if (records_.empty()) throw Error(ErrorCode::EmptyManifest, "manifest has no records");
  std::unordered_set<std::string> seen;
  seen.reserve(records_.size());
  for (std::size_t i = 0; i < records_.size(); ++i) {
    const auto& r = records_[i];
    if (r.sample_id.empty()) malformed(i + 2, "empty sample_id");
    if (!label_species_consistent(r.label, r.pai_species)) {
      malformed(i + 2, "label " + std::string(to_string(r.label)) + " inconsistent with pai_species '" +
                           r.pai_species.name() + "'");
    }
    if (!seen.insert(r.sample_id).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate sample_id '" + r.sample_id + "'");
    }
  }
}

CountTable Manifest::counts() const {
  CountTable table;
  for (const auto& r : records_) ++table[CountKey{r.label, r.pai_species, r.partition}];
  return table;
}

Manifest parse_manifest(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::EmptyManifest, "manifest is empty");
  {
    auto header = csv::split_line(csv::trim_line_ending(line));
    std::string joined;
    if (header) {
      for (std::size_t i = 0; i < header->size(); ++i) joined += (i ? "," : "") + (*header)[i];
    }
    if (joined != kManifestHeader) {
      throw Error(ErrorCode::BadHeader, "expected header '" + std::string(kManifestHeader) + "', got '" +
                                            std::string(csv::trim_line_ending(line)) + "'");
    }
  }

  std::vector<SampleRecord> records;
  std::unordered_set<std::string> seen;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = csv::trim_line_ending(line);
    if (view.empty()) continue;
    auto fields = csv::split_line(view);
    if (!fields) malformed(line_no, "unterminated quote");
    if (fields->size() != kColumns) {
      malformed(line_no, "expected " + std::to_string(kColumns) + " fields, got " + std::to_string(fields->size()));
    }
    auto& f = *fields;
    SampleRecord rec;
    rec.sample_id = f[0];
    if (rec.sample_id.empty()) malformed(line_no, "missing sample_id");
    auto label = parse_label(f[1]);
    if (!label) malformed(line_no, "bad label '" + f[1] + "'");
    rec.label = *label;
    rec.pai_species = PaiSpecies::from_string(f[2]);
    if (!label_species_consistent(rec.label, rec.pai_species)) {
      malformed(line_no, "label '" + f[1] + "' inconsistent with pai_species '" + f[2] + "'");
    }
    auto partition = parse_partition(f[3]);
    if (!partition) malformed(line_no, "bad partition '" + f[3] + "'");
    rec.partition = *partition;
    rec.sensor = f[4];
    rec.source_path = f[5];
    if (!seen.insert(rec.sample_id).second) {
      throw Error(ErrorCode::DuplicateId, "duplicate sample_id '" + rec.sample_id + "' at line " +
                                              std::to_string(line_no));
    }
    records.push_back(std::move(rec));
  }
  if (in.bad()) throw Error(ErrorCode::Io, "read failure on manifest");
  return Manifest(std::move(records));
}

Manifest parse_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open manifest " + path.string());
  return parse_manifest(in);
}

void write_manifest(const Manifest& manifest, std::ostream& out) {
  out << kManifestHeader << '\n';
  for (const auto& r : manifest.records()) {
    out << csv::quote(r.sample_id) << ',' << to_string(r.label) << ',' << csv::quote(r.pai_species.name()) << ','
        << to_string(r.partition) << ',' << csv::quote(r.sensor) << ',' << csv::quote(r.source_path) << '\n';
  }
}

void write_manifest(const Manifest& manifest, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::Io, "cannot write manifest " + path.string());
  write_manifest(manifest, out);
  if (!out) throw Error(ErrorCode::Io, "write failure on " + path.string());
}

Summary summarize(const Manifest& manifest) {
  Summary summary;
  std::map<std::pair<Label, PaiSpecies>, SummaryRow> rows;
  for (const auto& [key, n] : manifest.counts()) {
    auto [it, inserted] = rows.try_emplace({key.label, key.species}, SummaryRow{key.label, key.species});
    auto& row = it->second;
    switch (key.partition) {
      case Partition::Train: row.train += n; summary.train += n; break;
      case Partition::Val: row.val += n; summary.val += n; break;
      case Partition::Test: row.test += n; summary.test += n; break;
    }
  }
  for (auto& [key, row] : rows) summary.rows.push_back(row);
  return summary;
}

}  // namespace padkit
