#include "padkit/types.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <utility>

namespace padkit {
namespace {

std::string lower(std::string_view text) {
  std::string out(text);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

constexpr std::array<std::pair<PaiSpecies::Kind, std::string_view>, 6> kSpeciesNames{{
    {PaiSpecies::Kind::None, "none"},
    {PaiSpecies::Kind::Cadaver, "cadaver"},
    {PaiSpecies::Kind::ContactLensTextured, "contact_lens_textured"},
    {PaiSpecies::Kind::Printed, "printed"},
    {PaiSpecies::Kind::Prosthetic, "prosthetic"},
    {PaiSpecies::Kind::Display, "display"},
}};

}  // namespace

std::string_view to_string(Label label) {
  return label == Label::BonaFide ? "bona_fide" : "attack";
}

std::string_view to_string(Partition partition) {
  switch (partition) {
    case Partition::Train: return "train";
    case Partition::Val: return "val";
    case Partition::Test: return "test";
  }
  return "train";
}

std::optional<Label> parse_label(std::string_view text) {
  const std::string t = lower(text);
  if (t == "bona_fide" || t == "bonafide" || t == "bona fide") return Label::BonaFide;
  if (t == "attack") return Label::Attack;
  return std::nullopt;
}

std::optional<Partition> parse_partition(std::string_view text) {
  const std::string t = lower(text);
  if (t == "train") return Partition::Train;
  if (t == "val" || t == "validation") return Partition::Val;
  if (t == "test") return Partition::Test;
  return std::nullopt;
}

PaiSpecies PaiSpecies::from_string(std::string_view text) {
  if (text.empty()) return PaiSpecies{};
  const std::string t = lower(text);
  for (const auto& [kind, name] : kSpeciesNames) {
    if (t == name) return PaiSpecies{kind};
  }
  PaiSpecies other{Kind::Other};
  other.other_ = std::string(text);
  return other;
}

std::string PaiSpecies::name() const {
  if (kind_ == Kind::Other) return other_;
  for (const auto& [kind, name] : kSpeciesNames) {
    if (kind == kind_) return std::string(name);
  }
  return "none";
}

bool label_species_consistent(Label label, const PaiSpecies& species) {
  return (label == Label::BonaFide) == species.is_none();
}

}  // namespace padkit
