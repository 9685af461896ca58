#pragma once

// Deterministic synthetic data for tests.

#include <cmath>
#include <cstdint>
#include <random>
#include <string>
#include <vector>

#include "padkit/embeddings.hpp"
#include "padkit/manifest.hpp"
#include "padkit/scores.hpp"

namespace padkit::fixtures {

/// Uniform in [0,1) from 53 random bits.
inline double unit(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

/// Standard normal via Box-Muller (stable across standard libraries).
inline double normal(std::mt19937_64& rng) {
  double u1 = unit(rng);
  while (u1 <= 0.0) u1 = unit(rng);
  const double u2 = unit(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
}

inline const std::vector<PaiSpecies>& attack_species() {
  static const std::vector<PaiSpecies> kSpecies{PaiSpecies::Kind::Printed, PaiSpecies::Kind::Cadaver,
                                                PaiSpecies::Kind::ContactLensTextured, PaiSpecies::Kind::Display};
  return kSpecies;
}

/// Random score set with up to `max_entries` entries, both classes present,
/// and between 1 and `max_species` attack species. Scores are quantized to
/// multiples of 1/`levels` so ties occur and monotone transforms keep them distinct.
inline ScoreSet random_scores(std::mt19937_64& rng, std::size_t max_entries = 300, std::size_t max_species = 4,
                              int levels = 1000) {
  const std::size_t n = 2 + rng() % (max_entries - 1);
  const std::size_t n_species = 1 + rng() % max_species;
  const double attack_shift = unit(rng) * 0.6;  // overlap varies from heavy to none
  ScoreSet s;
  for (std::size_t i = 0; i < n; ++i) {
    const bool attack = i == 0 ? true : (i == 1 ? false : (rng() % 2 == 0));
    ScoreEntry e;
    e.sample_id = "s" + std::to_string(i);
    e.label = attack ? Label::Attack : Label::BonaFide;
    e.pai_species = attack ? attack_species()[rng() % n_species] : PaiSpecies{};
    double raw = unit(rng) * (1.0 - 0.6) + (attack ? attack_shift : 0.0);
    raw = std::min(1.0, std::max(0.0, raw));
    e.score = std::round(raw * levels) / levels;
    s.entries.push_back(std::move(e));
  }
  return s;
}

/// Build a score set from explicit bona fide and attack scores (one species).
inline ScoreSet make_scores(const std::vector<double>& bona_fide, const std::vector<double>& attack,
                            PaiSpecies species = PaiSpecies::Kind::Printed) {
  ScoreSet s;
  int i = 0;
  for (double v : bona_fide) s.entries.push_back({"bf" + std::to_string(i++), Label::BonaFide, {}, v});
  for (double v : attack) s.entries.push_back({"at" + std::to_string(i++), Label::Attack, species, v});
  return s;
}

/// Two isotropic unit-variance Gaussian blobs whose means are `separation`
/// standard deviations apart along the all-ones direction. Attacks alternate
/// between printed and cadaver species.
struct Blobs {
  Manifest manifest;
  EmbeddingSet embeddings;
};

inline Blobs gaussian_blobs(std::size_t dim, std::size_t n_train, std::size_t n_val, std::size_t n_test,
                            double separation, std::uint64_t seed, std::uint32_t replicas = 0) {
  std::mt19937_64 rng(seed);
  std::vector<SampleRecord> records;
  EmbeddingSet set;
  set.backbone_id = "synthetic-blobs";
  set.dim = static_cast<std::uint32_t>(dim);
  set.augmented_replicas = replicas;
  const double offset = separation / std::sqrt(static_cast<double>(dim));
  auto add = [&](Partition partition, std::size_t count) {
    for (std::size_t i = 0; i < count; ++i) {
      const bool attack = i % 2 == 1;
      SampleRecord r;
      r.sample_id = std::string(to_string(partition)) + "-" + std::to_string(i);
      r.label = attack ? Label::Attack : Label::BonaFide;
      r.pai_species = attack ? (i % 4 == 1 ? PaiSpecies{PaiSpecies::Kind::Printed} : PaiSpecies{PaiSpecies::Kind::Cadaver})
                             : PaiSpecies{};
      r.partition = partition;
      r.sensor = "synthetic";
      r.source_path = r.sample_id + ".png";
      set.sample_ids.push_back(r.sample_id);
      std::vector<double> centre(dim);
      for (std::size_t k = 0; k < dim; ++k) centre[k] = (attack ? offset : 0.0) + normal(rng);
      for (std::size_t k = 0; k < dim; ++k) set.vectors.push_back(static_cast<float>(centre[k]));
      for (std::uint32_t a = 0; a < replicas; ++a) {
        for (std::size_t k = 0; k < dim; ++k) set.vectors.push_back(static_cast<float>(centre[k] + 0.05 * normal(rng)));
      }
      records.push_back(std::move(r));
    }
  };
  add(Partition::Train, n_train);
  add(Partition::Val, n_val);
  add(Partition::Test, n_test);
  return {Manifest(std::move(records)), std::move(set)};
}

/// Manifest with the per-partition shape of the LivDet-Iris 2020 based
/// collection: bona fide 6,694 / 1,062 / 5,773 and partition totals
/// 11,810 / 4,384 / 11,770 (27,964 images). The published per-species attack
/// rows do not sum to those totals, so the cadaver and textured contact lens
/// rows keep their published counts and the printed/prosthetic/display group
/// (recorded as printed) absorbs the remainder.
inline Manifest livdet2020_shaped_manifest() {
  struct Row {
    Label label;
    PaiSpecies species;
    std::size_t train, val, test;
    const char* sensor;
  };
  const std::vector<Row> rows{
      {Label::BonaFide, {}, 6694, 1062, 5773, "LG4000"},
      {Label::Attack, PaiSpecies::Kind::Cadaver, 448, 531, 754, "IriShield"},
      {Label::Attack, PaiSpecies::Kind::ContactLensTextured, 3583, 900, 3244, "AD100"},
      {Label::Attack, PaiSpecies::Kind::Printed, 11810 - 6694 - 448 - 3583, 4384 - 1062 - 531 - 900,
       11770 - 5773 - 754 - 3244, "iCAM7000"},
  };
  std::vector<SampleRecord> records;
  std::size_t next = 0;
  for (const auto& row : rows) {
    for (auto [partition, count] : {std::pair{Partition::Train, row.train}, std::pair{Partition::Val, row.val},
                                    std::pair{Partition::Test, row.test}}) {
      for (std::size_t i = 0; i < count; ++i) {
        SampleRecord r;
        r.sample_id = "img" + std::to_string(next++);
        r.label = row.label;
        r.pai_species = row.species;
        r.partition = partition;
        r.sensor = row.sensor;
        r.source_path = "images/" + r.sample_id + ".png";
        records.push_back(std::move(r));
      }
    }
  }
  return Manifest(std::move(records));
}

/// Random valid embedding set; dims and counts kept small.
inline EmbeddingSet random_embeddings(std::mt19937_64& rng) {
  EmbeddingSet set;
  static const std::vector<std::string> kIds{"dinov2-vitb14", "clip-vit-b32", "custom-backbone", ""};
  set.backbone_id = kIds[rng() % kIds.size()];
  if (auto dim = expected_backbone_dim(set.backbone_id)) {
    set.dim = *dim;
  } else {
    set.dim = static_cast<std::uint32_t>(1 + rng() % 24);
  }
  set.augmented_replicas = static_cast<std::uint32_t>(rng() % 3);
  const std::size_t n = rng() % 6;
  for (std::size_t i = 0; i < n; ++i) set.sample_ids.push_back("id-" + std::to_string(rng() % 100000) + "-" + std::to_string(i));
  set.vectors.resize(set.rows() * set.dim);
  for (float& v : set.vectors) {
    // Mix of magnitudes, signed zeros, and subnormals to exercise bit exactness.
    switch (rng() % 6) {
      case 0: v = -0.0f; break;
      case 1: v = std::numeric_limits<float>::denorm_min() * static_cast<float>(1 + rng() % 1000); break;
      default: v = static_cast<float>((unit(rng) - 0.5) * std::pow(10.0, static_cast<int>(rng() % 13) - 6)); break;
    }
  }
  return set;
}

}  // namespace padkit::fixtures
