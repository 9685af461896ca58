#include "padkit/trainer.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <limits>
#include <optional>
#include <numeric>
#include <random>
#include <thread>

#include "padkit/metrics.hpp"

namespace padkit {
namespace {

void check_split(const LabeledData& data, const char* name) {
  if (data.samples() == 0) throw Error(ErrorCode::DegenerateData, std::string(name) + " split is empty");
  const bool has_bf = std::find(data.labels.begin(), data.labels.end(), Label::BonaFide) != data.labels.end();
  const bool has_attack = std::find(data.labels.begin(), data.labels.end(), Label::Attack) != data.labels.end();
  if (!has_bf || !has_attack) {
    throw Error(ErrorCode::DegenerateData, std::string(name) + " split needs both bona fide and attack samples");
  }
}

// Unbiased integer in [0, bound) by rejection, independent of <random> distributions.
std::uint64_t bounded(std::mt19937_64& rng, std::uint64_t bound) {
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = rng();
  } while (v >= limit);
  return v % bound;
}

void shuffle(std::vector<std::size_t>& order, std::mt19937_64& rng) {
  for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[bounded(rng, i)]);
}

class Optimizer {
 public:
  Optimizer(const OptimizerConfig& cfg, double lr, std::size_t n_params)
      : cfg_(cfg), lr_(lr), m_(n_params, 0.0), v_(n_params, 0.0) {}

  /// Applies one update and returns its squared Euclidean norm.
  double step(std::span<double> params, std::span<const double> grad) {
    double norm2 = 0.0;
    if (cfg_.kind == OptimizerConfig::Kind::Sgd) {
      for (std::size_t i = 0; i < params.size(); ++i) {
        const double delta = lr_ * grad[i];
        params[i] -= delta;
        norm2 += delta * delta;
      }
      return norm2;
    }
    ++t_;
    const double c1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
    const double c2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < params.size(); ++i) {
      m_[i] = cfg_.beta1 * m_[i] + (1.0 - cfg_.beta1) * grad[i];
      v_[i] = cfg_.beta2 * v_[i] + (1.0 - cfg_.beta2) * grad[i] * grad[i];
      const double delta = lr_ * (m_[i] / c1) / (std::sqrt(v_[i] / c2) + cfg_.epsilon);
      params[i] -= delta;
      norm2 += delta * delta;
    }
    return norm2;
  }

 private:
  OptimizerConfig cfg_;
  double lr_;
  std::vector<double> m_;
  std::vector<double> v_;
  std::uint64_t t_ = 0;
};

// Flattened view of every row of a split with its target and class weight.
struct RowTable {
  std::vector<double> targets;
  std::vector<double> weights;
};

RowTable row_table(const LabeledData& data, const TrainConfig& cfg) {
  RowTable t;
  t.targets.resize(data.rows());
  t.weights.resize(data.rows());
  for (std::size_t r = 0; r < data.rows(); ++r) {
    t.targets[r] = data.target(r);
    t.weights[r] = t.targets[r] > 0.5 ? cfg.attack_weight : cfg.bona_fide_weight;
  }
  return t;
}

double val_loss_of(const ScoreSet& scores) {
  double total = 0.0;
  for (const auto& e : scores.entries) total += bce_loss(e.score, e.label == Label::Attack ? 1.0 : 0.0);
  return total / static_cast<double>(scores.size());
}

double squared_norm(std::span<const double> v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return s;
}

[[noreturn]] void nan_loss(int epoch, const std::string& what) {
  throw Error(ErrorCode::NanLoss, "epoch " + std::to_string(epoch) + ": " + what);
}

}  // namespace

void validate(const TrainConfig& cfg) {
  auto bad = [](const std::string& what) { throw Error(ErrorCode::Usage, what); };
  if (!(cfg.learning_rate > 0.0) || !std::isfinite(cfg.learning_rate)) bad("learning rate must be positive");
  if (cfg.epochs < 1) bad("epochs must be >= 1");
  if (cfg.batch_size < 1) bad("batch size must be >= 1");
  if (cfg.hidden_width < 1) bad("hidden width must be >= 1");
  if (cfg.lr_grid.empty()) bad("lr grid must be nonempty");
  for (double lr : cfg.lr_grid) {
    if (!(lr > 0.0) || !std::isfinite(lr)) bad("lr grid values must be positive");
  }
  if (!(cfg.bona_fide_weight > 0.0) || !(cfg.attack_weight > 0.0)) bad("class weights must be positive");
  if (cfg.optimizer.kind == OptimizerConfig::Kind::Adam &&
      (!(cfg.optimizer.beta1 >= 0.0 && cfg.optimizer.beta1 < 1.0) ||
       !(cfg.optimizer.beta2 >= 0.0 && cfg.optimizer.beta2 < 1.0) || !(cfg.optimizer.epsilon > 0.0))) {
    bad("adam needs beta1, beta2 in [0,1) and epsilon > 0");
  }
}

ScoreSet score(const MlpHead& head, const LabeledData& data) {
  if (data.samples() == 0) throw Error(ErrorCode::DegenerateData, "no samples to score");
  if (data.dim != head.input_dim()) {
    throw Error(ErrorCode::DimMismatch,
                "data has dim " + std::to_string(data.dim) + ", head expects " + std::to_string(head.input_dim()));
  }
  ScoreSet out;
  out.entries.reserve(data.samples());
  for (std::size_t i = 0; i < data.samples(); ++i) {
    out.entries.push_back({data.sample_ids[i], data.labels[i], data.species[i], forward(head, data.clean_row(i))});
  }
  return out;
}

TrainResult train(const LabeledData& train_data, const LabeledData& val_data, const TrainConfig& cfg) {
  validate(cfg);
  check_split(train_data, "train");
  check_split(val_data, "val");
  if (train_data.dim != val_data.dim || train_data.dim == 0) {
    throw Error(ErrorCode::DimMismatch, "train dim " + std::to_string(train_data.dim) + " vs val dim " +
                                            std::to_string(val_data.dim));
  }

  const std::size_t d = train_data.dim;
  std::mt19937_64 rng(cfg.seed);
  MlpHead head = MlpHead::he_uniform(d, cfg.hidden_width, rng);
  Optimizer optimizer(cfg.optimizer, cfg.learning_rate, head.parameters().size());

  const RowTable table = row_table(train_data, cfg);
  const Batch full{d, train_data.features, table.targets, table.weights};

  std::vector<std::size_t> order(train_data.rows());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::vector<double> batch_x;
  std::vector<double> batch_y;
  std::vector<double> batch_w;

  TrainResult result;
  double best_val_loss = 0.0;
  for (int epoch = 1; epoch <= cfg.epochs; ++epoch) {
    shuffle(order, rng);
    for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
      const std::size_t stop = std::min(order.size(), start + cfg.batch_size);
      batch_x.clear();
      batch_y.clear();
      batch_w.clear();
      for (std::size_t i = start; i < stop; ++i) {
        const auto row = train_data.row(order[i]);
        batch_x.insert(batch_x.end(), row.begin(), row.end());
        batch_y.push_back(table.targets[order[i]]);
        batch_w.push_back(table.weights[order[i]]);
      }
      const MlpHead grad = backward(head, Batch{d, batch_x, batch_y, batch_w});
      const double param_norm2 = squared_norm(head.parameters());
      const double step_norm2 = optimizer.step(head.parameters(), grad.parameters());
      if (!std::isfinite(step_norm2)) nan_loss(epoch, "non-finite update");
      if (param_norm2 > 0.0 && step_norm2 > param_norm2) {
        throw Error(ErrorCode::Diverged, "epoch " + std::to_string(epoch) + ": update norm " +
                                             format_double(std::sqrt(step_norm2)) + " exceeds parameter norm " +
                                             format_double(std::sqrt(param_norm2)));
      }
    }
    if (!head.all_finite()) nan_loss(epoch, "non-finite parameters");

    EpochRecord record;
    record.epoch = epoch;
    record.train_loss = batch_loss(head, full);
    if (!std::isfinite(record.train_loss)) nan_loss(epoch, "non-finite train loss");
    ScoreSet val_scores = score(head, val_data);
    record.val_loss = val_loss_of(val_scores);
    if (!std::isfinite(record.val_loss)) nan_loss(epoch, "non-finite validation loss");
    record.val_eer = eer(val_scores, PaiScope::pooled()).value;
    result.history.push_back(record);

    const bool better = result.best_epoch == 0 || record.val_eer < result.best_val_eer ||
                        (record.val_eer == result.best_val_eer && record.val_loss < best_val_loss);
    if (better) {
      result.best_epoch = epoch;
      result.best_val_eer = record.val_eer;
      best_val_loss = record.val_loss;
      result.head = head;
      result.val_scores = std::move(val_scores);
    }
  }
  return result;
}

GridResult grid_search(const LabeledData& train_data, const LabeledData& val_data, const TrainConfig& base,
                       const std::vector<double>& lr_grid, unsigned threads) {
  if (lr_grid.empty()) throw Error(ErrorCode::Usage, "lr grid must be nonempty");
  // Data problems are shared by every cell, so report them once up front.
  check_split(train_data, "train");
  check_split(val_data, "val");

  const std::size_t n = lr_grid.size();
  std::vector<GridCell> cells(n);
  std::vector<std::optional<TrainResult>> results(n);
  std::vector<TrainConfig> configs(n, base);
  for (std::size_t i = 0; i < n; ++i) {
    configs[i].learning_rate = lr_grid[i];
    configs[i].seed = base.seed + i;
    configs[i].lr_grid = lr_grid;
    cells[i].learning_rate = lr_grid[i];
    cells[i].seed = configs[i].seed;
  }

  auto run_cell = [&](std::size_t i) {
    try {
      TrainResult r = train(train_data, val_data, configs[i]);
      cells[i].ok = true;
      cells[i].best_epoch = r.best_epoch;
      cells[i].val_eer = r.best_val_eer;
      cells[i].val_bpcer10 = bpcer_at_apcer(r.val_scores, kApcerTarget10, PaiScope::pooled()).bpcer;
      results[i] = std::move(r);
    } catch (const Error& e) {
      if (e.category() == ErrorCategory::Usage || e.code() == ErrorCode::DimMismatch) throw;
      cells[i].ok = false;
      cells[i].error = std::string(to_string(e.code())) + ": " + e.what();
    }
  };

  const unsigned workers = std::max(1u, std::min<unsigned>(threads, static_cast<unsigned>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) run_cell(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> failures(workers);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i = next++; i < n; i = next++) run_cell(i);
        } catch (...) {
          failures[w] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& f : failures) {
      if (f) std::rethrow_exception(f);
    }
  }

  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < n; ++i) {
    if (!cells[i].ok) continue;
    if (!best) {
      best = i;
      continue;
    }
    const GridCell& a = cells[i];
    const GridCell& b = cells[*best];
    if (a.val_eer < b.val_eer ||
        (a.val_eer == b.val_eer &&
         (a.val_bpcer10 < b.val_bpcer10 || (a.val_bpcer10 == b.val_bpcer10 && a.learning_rate < b.learning_rate)))) {
      best = i;
    }
  }
  if (!best) {
    std::string detail;
    for (const auto& c : cells) detail += " [lr " + format_double(c.learning_rate) + ": " + c.error + "]";
    throw Error(ErrorCode::AllCellsFailed, "every grid cell failed:" + detail);
  }

  GridResult out;
  out.best_index = *best;
  out.best_config = configs[*best];
  out.best = std::move(*results[*best]);
  out.cells = std::move(cells);
  return out;
}

}  // namespace padkit
