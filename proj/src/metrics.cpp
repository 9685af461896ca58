#include "padkit/metrics.hpp"

#include <algorithm>
#include <cstdint>
#include <cmath>
#include <functional>
#include <ranges>

#include "padkit/error.hpp"

namespace padkit {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Scores of one attack group, sorted descending, with a sweep cursor.
struct Group {
  PaiSpecies species;
  std::vector<double> scores;
  std::size_t detected = 0;

  std::size_t missed() const noexcept { return scores.size() - detected; }
};

void advance(std::vector<double> const& desc, std::size_t& cursor, double tau) {
  while (cursor < desc.size() && desc[cursor] >= tau) ++cursor;
}

// a/b > c/d for nonnegative counts with positive denominators.
bool fraction_greater(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  return static_cast<std::uint64_t>(a) * d > static_cast<std::uint64_t>(c) * b;
}

// Sign of a/b - c/d.
int fraction_compare(std::size_t a, std::size_t b, std::size_t c, std::size_t d) {
  const auto lhs = static_cast<std::uint64_t>(a) * d;
  const auto rhs = static_cast<std::uint64_t>(c) * b;
  return lhs > rhs ? 1 : (lhs < rhs ? -1 : 0);
}

double rate(std::size_t numerator, std::size_t denominator) {
  return static_cast<double>(numerator) / static_cast<double>(denominator);
}

int sign_of(const DetPoint& p) {
  return fraction_compare(p.attacks_missed, p.attacks_total, p.bona_fide_rejected, p.bona_fide_total);
}

}  // namespace

PaiScope PaiScope::parse(std::string_view text) {
  if (text == "pooled") return pooled();
  if (text == "worst-case" || text == "worst_case" || text == "worstcase") return worst_case();
  constexpr std::string_view prefix = "single:";
  if (text.substr(0, prefix.size()) == prefix) text.remove_prefix(prefix.size());
  PaiSpecies species = PaiSpecies::from_string(text);
  if (species.is_none()) throw Error(ErrorCode::Usage, "pai scope needs an attack species, got '" + std::string(text) + "'");
  return single(std::move(species));
}

std::string PaiScope::name() const {
  switch (kind_) {
    case Kind::Pooled: return "pooled";
    case Kind::WorstCase: return "worst-case";
    case Kind::Single: return "single:" + species_.name();
  }
  return "pooled";
}

double apcer(const ScoreSet& scores, Threshold threshold, const PaiSpecies& species) {
  std::size_t total = 0;
  std::size_t missed = 0;
  for (const auto& e : scores.entries) {
    if (e.label != Label::Attack || e.pai_species != species) continue;
    ++total;
    if (!threshold.classifies_attack(e.score)) ++missed;
  }
  if (total == 0) throw Error(ErrorCode::NoSuchSpecies, "no attack presentations of species '" + species.name() + "'");
  return rate(missed, total);
}

double bpcer(const ScoreSet& scores, Threshold threshold) {
  std::size_t total = 0;
  std::size_t rejected = 0;
  for (const auto& e : scores.entries) {
    if (e.label != Label::BonaFide) continue;
    ++total;
    if (threshold.classifies_attack(e.score)) ++rejected;
  }
  if (total == 0) throw Error(ErrorCode::NoBonaFide, "no bona fide presentations");
  return rate(rejected, total);
}

SpeciesApcer worst_case_apcer(const ScoreSet& scores, Threshold threshold) {
  // (missed, total) per species, iterated in name order.
  std::map<PaiSpecies, std::pair<std::size_t, std::size_t>> tally;
  for (const auto& e : scores.entries) {
    if (e.label != Label::Attack) continue;
    auto& [missed, total] = tally[e.pai_species];
    ++total;
    if (!threshold.classifies_attack(e.score)) ++missed;
  }
  if (tally.empty()) throw Error(ErrorCode::NoAttacks, "no attack presentations");
  auto best = tally.begin();
  for (auto it = std::next(tally.begin()); it != tally.end(); ++it) {
    if (fraction_greater(it->second.first, it->second.second, best->second.first, best->second.second)) best = it;
  }
  return {rate(best->second.first, best->second.second), best->first};
}

DetCurve det_curve(const ScoreSet& scores, const PaiScope& scope) {
  std::vector<double> bona_fide;
  std::map<PaiSpecies, Group> by_species;
  for (const auto& e : scores.entries) {
    if (!std::isfinite(e.score)) throw Error(ErrorCode::InvariantViolation, "non-finite score for '" + e.sample_id + "'");
    if (e.label == Label::BonaFide) {
      bona_fide.push_back(e.score);
    } else if (scope.kind() != PaiScope::Kind::Single || e.pai_species == scope.species()) {
      auto& g = by_species[scope.kind() == PaiScope::Kind::Pooled ? PaiSpecies{} : e.pai_species];
      g.species = e.pai_species;
      g.scores.push_back(e.score);
    }
  }
  if (scope.kind() == PaiScope::Kind::Single && by_species.empty()) {
    throw Error(ErrorCode::NoSuchSpecies, "no attack presentations of species '" + scope.species().name() + "'");
  }
  if (bona_fide.empty() || by_species.empty()) {
    throw Error(ErrorCode::DegenerateScores, "score set needs both bona fide and attack presentations");
  }

  std::vector<double> taus = bona_fide;
  std::vector<Group*> groups;
  for (auto& [species, g] : by_species) {
    std::ranges::sort(g.scores, std::greater<>{});
    taus.insert(taus.end(), g.scores.begin(), g.scores.end());
    groups.push_back(&g);
  }
  std::ranges::sort(bona_fide, std::greater<>{});
  std::ranges::sort(taus, std::greater<>{});
  taus.erase(std::unique(taus.begin(), taus.end()), taus.end());
  taus.insert(taus.begin(), kInf);
  taus.push_back(-kInf);

  DetCurve curve;
  curve.scope = scope;
  curve.points.reserve(taus.size());
  std::size_t bf_rejected = 0;
  for (double tau : taus) {
    advance(bona_fide, bf_rejected, tau);
    const Group* worst = nullptr;
    for (Group* g : groups) {
      advance(g->scores, g->detected, tau);
      if (worst == nullptr || fraction_greater(g->missed(), g->scores.size(), worst->missed(), worst->scores.size())) {
        worst = g;
      }
    }
    DetPoint p;
    p.tau = tau;
    p.attacks_missed = worst->missed();
    p.attacks_total = worst->scores.size();
    p.bona_fide_rejected = bf_rejected;
    p.bona_fide_total = bona_fide.size();
    p.apcer = rate(p.attacks_missed, p.attacks_total);
    p.bpcer = rate(p.bona_fide_rejected, p.bona_fide_total);
    curve.points.push_back(p);
  }
  return curve;
}

EerResult eer(const DetCurve& curve) {
  const auto& pts = curve.points;
  if (pts.size() < 2) throw Error(ErrorCode::DegenerateScores, "DET curve has fewer than two points");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const int s = sign_of(pts[i]);
    if (s == 0) return {pts[i].apcer, pts[i].tau, true};
    if (s < 0) {
      // First sign change: APCER > BPCER at i-1 and APCER < BPCER at i.
      if (i == 0) break;
      const DetPoint& hi = pts[i - 1];
      const DetPoint& lo = pts[i];
      const double d_hi = hi.apcer - hi.bpcer;
      const double d_lo = lo.apcer - lo.bpcer;
      const double t = d_hi / (d_hi - d_lo);
      const double value = hi.apcer + t * (lo.apcer - hi.apcer);
      const double tau = std::abs(d_hi) <= std::abs(d_lo) ? hi.tau : lo.tau;
      return {value, tau, false};
    }
  }
  throw Error(ErrorCode::DegenerateScores, "DET curve never crosses APCER = BPCER");
}

EerResult eer(const ScoreSet& scores, const PaiScope& scope) { return eer(det_curve(scores, scope)); }

OperatingPoint bpcer_at_apcer(const DetCurve& curve, double apcer_target) {
  if (curve.points.empty()) throw Error(ErrorCode::DegenerateScores, "empty DET curve");
  const DetPoint* lowest = &curve.points.front();
  for (const auto& p : curve.points) {
    if (p.apcer <= apcer_target) return {apcer_target, p.bpcer, p.apcer, p.tau, true};
    if (p.apcer < lowest->apcer) lowest = &p;
  }
  return {apcer_target, lowest->bpcer, lowest->apcer, lowest->tau, false};
}

OperatingPoint bpcer_at_apcer(const ScoreSet& scores, double apcer_target, const PaiScope& scope) {
  return bpcer_at_apcer(det_curve(scores, scope), apcer_target);
}

MetricsReport full_report(const ScoreSet& scores, const PaiScope& scope) {
  const DetCurve curve = det_curve(scores, scope);
  MetricsReport report;
  report.scope = scope;
  report.eer = eer(curve);
  report.bpcer10 = bpcer_at_apcer(curve, kApcerTarget10);
  report.bpcer20 = bpcer_at_apcer(curve, kApcerTarget20);
  report.bpcer100 = bpcer_at_apcer(curve, kApcerTarget100);
  if (!(report.bpcer10.bpcer <= report.bpcer20.bpcer && report.bpcer20.bpcer <= report.bpcer100.bpcer)) {
    throw Error(ErrorCode::InvariantViolation, "operating points out of order");
  }

  const Threshold at_eer{report.eer.tau};
  for (const auto& e : scores.entries) {
    if (e.label == Label::BonaFide) {
      ++report.n_bf;
    } else {
      ++report.n_pais[e.pai_species];
    }
  }
  report.bpcer_at_eer = bpcer(scores, at_eer);
  for (const auto& [species, n] : report.n_pais) report.apcer_per_pai[species] = apcer(scores, at_eer, species);
  report.worst_case_at_eer = worst_case_apcer(scores, at_eer);
  return report;
}

}  // namespace padkit
