#pragma once

// ISO/IEC 30107-3 presentation attack detection metrics.
//
// Decision rule: a presentation with score >= tau is classified as an attack.
// APCER for a species is the fraction of its attack presentations classified
// bona fide; BPCER is the fraction of bona fide presentations classified as
// attacks. All rates are fractions in [0,1].

#include <cstddef>
#include <limits>
#include <map>
#include <string>
#include <vector>

#include "padkit/scores.hpp"

namespace padkit {

struct Threshold {
  double tau = 0.0;

  bool classifies_attack(double score) const noexcept { return score >= tau; }
};

/// Which attack presentations the APCER axis aggregates over.
class PaiScope {
 public:
  enum class Kind { Pooled, WorstCase, Single };

  static PaiScope pooled() { return PaiScope(Kind::Pooled, {}); }
  static PaiScope worst_case() { return PaiScope(Kind::WorstCase, {}); }
  static PaiScope single(PaiSpecies species) { return PaiScope(Kind::Single, std::move(species)); }

  /// "pooled", "worst-case", or a species name (optionally "single:<name>").
  static PaiScope parse(std::string_view text);

  Kind kind() const noexcept { return kind_; }
  const PaiSpecies& species() const noexcept { return species_; }
  std::string name() const;

  friend bool operator==(const PaiScope&, const PaiScope&) = default;

 private:
  PaiScope(Kind kind, PaiSpecies species) : kind_(kind), species_(std::move(species)) {}

  Kind kind_;
  PaiSpecies species_;
};

/// Throws NoSuchSpecies when the set has no attack of that species.
double apcer(const ScoreSet& scores, Threshold threshold, const PaiSpecies& species);

/// Throws NoBonaFide.
double bpcer(const ScoreSet& scores, Threshold threshold);

struct SpeciesApcer {
  double apcer = 0.0;
  PaiSpecies species;
};

/// Maximum per-species APCER; ties go to the lexicographically first species name.
/// Throws NoAttacks.
SpeciesApcer worst_case_apcer(const ScoreSet& scores, Threshold threshold);

struct DetPoint {
  double tau = 0.0;
  double apcer = 0.0;
  double bpcer = 0.0;
  // Exact counts behind the two rates. For worst-case scope the attack
  // counts belong to the arg-max species at this tau.
  std::size_t attacks_missed = 0;
  std::size_t attacks_total = 0;
  std::size_t bona_fide_rejected = 0;
  std::size_t bona_fide_total = 0;
};

/// Points ordered by decreasing tau: +inf, each unique in-scope score, -inf.
struct DetCurve {
  PaiScope scope = PaiScope::pooled();
  std::vector<DetPoint> points;
};

/// Throws DegenerateScores when either class is empty within the scope.
DetCurve det_curve(const ScoreSet& scores, const PaiScope& scope);

struct EerResult {
  double value = 0.0;
  /// Tau of the bracketing sweep point nearest the crossing (the tie point when exact).
  double tau = 0.0;
  /// True when some sweep point has APCER == BPCER exactly.
  bool exact = false;
};

EerResult eer(const DetCurve& curve);
EerResult eer(const ScoreSet& scores, const PaiScope& scope);

struct OperatingPoint {
  double apcer_target = 0.0;
  double bpcer = 0.0;
  double apcer = 0.0;
  double tau = 0.0;
  bool attained = true;
};

/// BPCER at the largest tau whose APCER is <= target. When no sweep point
/// reaches the target, reports the lowest-APCER point with attained=false.
OperatingPoint bpcer_at_apcer(const DetCurve& curve, double apcer_target);
OperatingPoint bpcer_at_apcer(const ScoreSet& scores, double apcer_target, const PaiScope& scope);

inline constexpr double kApcerTarget10 = 0.10;
inline constexpr double kApcerTarget20 = 0.05;
inline constexpr double kApcerTarget100 = 0.01;

struct MetricsReport {
  PaiScope scope = PaiScope::pooled();
  EerResult eer;
  OperatingPoint bpcer10;
  OperatingPoint bpcer20;
  OperatingPoint bpcer100;
  /// Rates at the EER threshold.
  double bpcer_at_eer = 0.0;
  std::map<PaiSpecies, double> apcer_per_pai;
  SpeciesApcer worst_case_at_eer;
  std::size_t n_bf = 0;
  std::map<PaiSpecies, std::size_t> n_pais;
};

MetricsReport full_report(const ScoreSet& scores, const PaiScope& scope);

}  // namespace padkit
