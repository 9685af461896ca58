#include "padkit/scores.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>

#include "csv.hpp"
#include "padkit/error.hpp"

namespace padkit {

std::size_t ScoreSet::count(Label label) const {
  return static_cast<std::size_t>(
      std::count_if(entries.begin(), entries.end(), [label](const ScoreEntry& e) { return e.label == label; }));
}

void validate(const ScoreSet& scores) {
  for (const auto& e : scores.entries) {
    if (!std::isfinite(e.score) || e.score < 0.0 || e.score > 1.0) {
      throw Error(ErrorCode::InvariantViolation,
                  "score for '" + e.sample_id + "' outside [0,1]: " + format_double(e.score));
    }
    if (!label_species_consistent(e.label, e.pai_species)) {
      throw Error(ErrorCode::InvariantViolation, "label/species mismatch for '" + e.sample_id + "'");
    }
  }
}

std::string format_double(double value) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, end);
}

void write_scores(const ScoreSet& scores, std::ostream& out) {
  out << kScoresHeader << '\n';
  for (const auto& e : scores.entries) {
    out << csv::quote(e.sample_id) << ',' << to_string(e.label) << ',' << csv::quote(e.pai_species.name()) << ','
        << format_double(e.score) << '\n';
  }
}

void write_scores(const ScoreSet& scores, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write scores " + path.string());
  write_scores(scores, out);
  if (!out) throw Error(ErrorCode::Io, "write failure on " + path.string());
}

ScoreSet read_scores(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || csv::trim_line_ending(line) != kScoresHeader) {
    throw Error(ErrorCode::BadHeader, "expected header '" + std::string(kScoresHeader) + "'");
  }
  ScoreSet scores;
  std::size_t line_no = 1;
  auto malformed = [&line_no](const std::string& what) {
    throw Error(ErrorCode::MalformedRow, "line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    const std::string_view view = csv::trim_line_ending(line);
    if (view.empty()) continue;
    auto fields = csv::split_line(view);
    if (!fields || fields->size() != 4) malformed("expected 4 fields");
    auto& f = *fields;
    ScoreEntry e;
    e.sample_id = f[0];
    if (e.sample_id.empty()) malformed("missing sample_id");
    auto label = parse_label(f[1]);
    if (!label) malformed("bad label '" + f[1] + "'");
    e.label = *label;
    e.pai_species = PaiSpecies::from_string(f[2]);
    if (!label_species_consistent(e.label, e.pai_species)) malformed("label/species mismatch");
    const char* first = f[3].data();
    const char* last = first + f[3].size();
    auto [ptr, ec] = std::from_chars(first, last, e.score);
    if (ec != std::errc{} || ptr != last) malformed("bad score '" + f[3] + "'");
    if (!std::isfinite(e.score) || e.score < 0.0 || e.score > 1.0) malformed("score outside [0,1]");
    scores.entries.push_back(std::move(e));
  }
  if (in.bad()) throw Error(ErrorCode::Io, "read failure on scores");
  return scores;
}

ScoreSet read_scores(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::Io, "cannot open scores " + path.string());
  return read_scores(in);
}

}  // namespace padkit
