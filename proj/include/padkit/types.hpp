#pragma once

#include <compare>
#include <optional>
#include <string>
#include <string_view>

namespace padkit {

enum class Label { BonaFide, Attack };

enum class Partition { Train, Val, Test };

std::string_view to_string(Label label);
std::string_view to_string(Partition partition);

/// Case-insensitive; accepts "bona_fide"/"bonafide"/"bona fide" and "attack".
std::optional<Label> parse_label(std::string_view text);
/// Case-insensitive; accepts "train", "val"/"validation", "test".
std::optional<Partition> parse_partition(std::string_view text);

/// Presentation attack instrument species. Known species have a canonical
/// lowercase name; anything else is kept verbatim as Other.
class PaiSpecies {
 public:
  enum class Kind { None, Cadaver, ContactLensTextured, Printed, Prosthetic, Display, Other };

  PaiSpecies() = default;
  PaiSpecies(Kind kind) : kind_(kind) {}  // NOLINT(google-explicit-constructor)

  /// Maps canonical names (case-insensitive) to known kinds and any other
  /// nonempty text to Other. Empty text maps to None.
  static PaiSpecies from_string(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  bool is_none() const noexcept { return kind_ == Kind::None; }

  /// Canonical name for known kinds, the verbatim text for Other.
  std::string name() const;

  friend bool operator==(const PaiSpecies&, const PaiSpecies&) = default;
  /// Orders by name so "lexicographically first species" is well defined.
  friend std::strong_ordering operator<=>(const PaiSpecies& a, const PaiSpecies& b) {
    return a.name() <=> b.name();
  }

 private:
  Kind kind_ = Kind::None;
  std::string other_;
};

/// True when (label, species) satisfies BonaFide <=> species None.
bool label_species_consistent(Label label, const PaiSpecies& species);

}  // namespace padkit
