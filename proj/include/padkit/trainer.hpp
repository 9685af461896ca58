#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "padkit/embeddings.hpp"
#include "padkit/error.hpp"
#include "padkit/mlp.hpp"
#include "padkit/scores.hpp"

namespace padkit {

struct OptimizerConfig {
  enum class Kind { Sgd, Adam };

  Kind kind = Kind::Adam;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
};

struct TrainConfig {
  double learning_rate = 1e-4;
  int epochs = 100;
  std::size_t batch_size = 128;
  std::size_t hidden_width = 256;
  std::uint64_t seed = 42;
  OptimizerConfig optimizer;
  std::vector<double> lr_grid{1e-3, 1e-4, 1e-5, 1e-6};
  /// Per-class loss weights; both 1 means no reweighting.
  double bona_fide_weight = 1.0;
  double attack_weight = 1.0;
};

/// Throws Usage on a nonpositive rate, epoch count, batch size, width, or weight.
void validate(const TrainConfig& cfg);

struct EpochRecord {
  int epoch = 0;  // 1-based
  double train_loss = 0.0;
  double val_loss = 0.0;
  double val_eer = 0.0;

  friend bool operator==(const EpochRecord&, const EpochRecord&) = default;
};

struct TrainResult {
  MlpHead head;  // checkpoint of the selected epoch
  ScoreSet val_scores;
  std::vector<EpochRecord> history;
  int best_epoch = 0;
  double best_val_eer = 1.0;
};

/// Scores the clean row of every sample. Throws DegenerateData on empty data
/// and DimMismatch when dims disagree.
ScoreSet score(const MlpHead& head, const LabeledData& data);

/// Trains a fresh head on every train row (clean and augmented) and keeps the
/// epoch checkpoint with the lowest validation EER (ties: lower validation
/// loss, then earlier epoch). Deterministic for a fixed seed.
///
/// Throws DegenerateData when a split is empty or single-class, DimMismatch,
/// NanLoss(epoch) when the loss or any parameter becomes non-finite, and
/// Diverged(epoch) when a single update is longer than the parameter vector
/// it is applied to.
TrainResult train(const LabeledData& train_data, const LabeledData& val_data, const TrainConfig& cfg);

struct GridCell {
  double learning_rate = 0.0;
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;  // empty when ok
  int best_epoch = 0;
  double val_eer = 1.0;
  double val_bpcer10 = 1.0;
};

struct GridResult {
  TrainConfig best_config;
  TrainResult best;
  std::size_t best_index = 0;
  std::vector<GridCell> cells;  // in lr_grid order
};

/// One train() per learning rate, cell i seeded with base.seed + i. Picks the
/// lowest validation EER, then lower BPCER10, then smaller learning rate.
/// Failed cells are reported and skipped; throws AllCellsFailed when none
/// succeed. Cells run on up to `threads` worker threads with identical results.
GridResult grid_search(const LabeledData& train_data, const LabeledData& val_data, const TrainConfig& base,
                       const std::vector<double>& lr_grid, unsigned threads = 1);

}  // namespace padkit
