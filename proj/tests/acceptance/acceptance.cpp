// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include <algorithm>
#include <bit>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "padkit/cli.hpp"
#include "padkit/embeddings.hpp"
#include "padkit/error.hpp"
#include "padkit/manifest.hpp"
#include "padkit/metrics.hpp"
#include "padkit/mlp.hpp"
#include "padkit/trainer.hpp"
#include "support/fixtures.hpp"
#include "support/oracles.hpp"

using namespace padkit;
namespace fs = std::filesystem;

namespace {

using Clock = std::chrono::steady_clock;

// A criterion returns an empty string on success, otherwise the first failure.
struct Criterion {
  std::string name;
  double time_limit_s;  // 0 means unbounded
  std::function<std::string()> check;
};

const std::vector<ScoreSet>& generated_sets() {
  static const std::vector<ScoreSet> sets = [] {
    std::mt19937_64 rng(20240101);
    std::vector<ScoreSet> out;
    for (int i = 0; i < 1000; ++i) out.push_back(fixtures::random_scores(rng, 300, 4));
    return out;
  }();
  return sets;
}

std::string where(std::size_t set, const std::string& what) {
  return "set " + std::to_string(set) + ": " + what;
}

std::string metrics_match_oracle() {
  const auto& sets = generated_sets();
  for (std::size_t k = 0; k < sets.size(); ++k) {
    const ScoreSet& s = sets[k];
    const auto species = oracle::species_list(s);
    for (double tau : oracle::candidate_taus(s)) {
      const auto bc = oracle::bpcer_counts(s, tau);
      if (bpcer(s, {tau}) != oracle::ratio(bc)) return where(k, "bpcer differs");
      for (const auto& sp : species) {
        if (apcer(s, {tau}, sp) != oracle::ratio(oracle::apcer_counts(s, tau, sp))) {
          return where(k, "apcer differs for " + sp.name());
        }
      }
      const auto w = worst_case_apcer(s, {tau});
      const auto ow = oracle::worst_case(s, tau);
      if (w.apcer != oracle::ratio(ow.counts) || w.species.name() != ow.species) {
        return where(k, "worst-case apcer differs");
      }
    }
    for (auto [scope, oscope] : {std::pair{PaiScope::pooled(), oracle::Scope::Pooled},
                                 std::pair{PaiScope::worst_case(), oracle::Scope::WorstCase}}) {
      const DetCurve c = det_curve(s, scope);
      const auto pts = oracle::sweep(s, oscope);
      if (c.points.size() != pts.size()) return where(k, "sweep length differs");
      for (std::size_t i = 0; i < pts.size(); ++i) {
        if (c.points[i].tau != pts[i].tau || c.points[i].attacks_missed != pts[i].apcer.errors ||
            c.points[i].attacks_total != pts[i].apcer.total || c.points[i].bona_fide_rejected != pts[i].bpcer.errors ||
            c.points[i].bona_fide_total != pts[i].bpcer.total) {
          return where(k, "sweep counts differ at point " + std::to_string(i));
        }
      }
      const double diff = std::abs(eer(c).value - oracle::eer(s, oscope));
      if (!(diff <= 1e-12)) return where(k, scope.name() + " eer off by " + std::to_string(diff));
      for (double target : {kApcerTarget10, kApcerTarget20, kApcerTarget100}) {
        if (bpcer_at_apcer(c, target).bpcer != oracle::bpcer_at_apcer(s, target, oscope)) {
          return where(k, scope.name() + " bpcer at apcer " + std::to_string(target) + " differs");
        }
      }
    }
  }
  return {};
}

std::string hand_eer() {
  const ScoreSet s = fixtures::make_scores({0.1, 0.2, 0.7}, {0.3, 0.8, 0.9});
  const double value = eer(s, PaiScope::pooled()).value;
  if (std::abs(value - 1.0 / 3.0) > 1e-12) return "EER " + std::to_string(value);
  return {};
}

std::string operating_points_ordered() {
  const auto& sets = generated_sets();
  for (std::size_t k = 0; k < sets.size(); ++k) {
    for (const auto& scope : {PaiScope::pooled(), PaiScope::worst_case()}) {
      const MetricsReport r = full_report(sets[k], scope);
      if (!(r.bpcer10.bpcer <= r.bpcer20.bpcer && r.bpcer20.bpcer <= r.bpcer100.bpcer)) {
        return where(k, scope.name() + " BPCER10/20/100 out of order");
      }
    }
  }
  return {};
}

std::string gradient_check() {
  std::mt19937_64 rng(777);
  int checked = 0;
  for (int attempt = 0; attempt < 10000 && checked < 100; ++attempt) {
    const std::size_t d = 1 + rng() % 8;
    const std::size_t h = 1 + rng() % 8;
    const std::size_t n = 1 + rng() % 10;
    MlpHead head = MlpHead::he_uniform(d, h, rng);
    for (double& b : head.b1()) b = 0.3 * fixtures::normal(rng);
    head.b2() = 0.3 * fixtures::normal(rng);
    std::vector<std::vector<double>> xs;
    std::vector<double> flat;
    std::vector<double> ys;
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> x(d);
      for (double& v : x) v = fixtures::normal(rng);
      flat.insert(flat.end(), x.begin(), x.end());
      xs.push_back(std::move(x));
      ys.push_back(static_cast<double>(rng() % 2));
    }
    // Central differences are meaningless across a ReLU kink.
    if (oracle::min_abs_preactivation(head, xs) < 1e-3) continue;
    const MlpHead grad = backward(head, Batch{d, flat, ys, {}});
    const auto numeric = oracle::numeric_gradient(head, xs, ys, 1e-5);
    for (std::size_t i = 0; i < numeric.size(); ++i) {
      const double a = grad.parameters()[i];
      const double b = numeric[i];
      if (std::abs(a) < 1e-8 && std::abs(b) < 1e-8) continue;
      const double rel = std::abs(a - b) / std::max(std::abs(a), std::abs(b));
      if (rel > 1e-4) {
        return "case " + std::to_string(checked) + " coordinate " + std::to_string(i) + " relative error " +
               std::to_string(rel);
      }
    }
    ++checked;
  }
  if (checked < 100) return "only " + std::to_string(checked) + " kink-free cases generated";
  return {};
}

std::string end_to_end_blobs() {
  const auto blobs = fixtures::gaussian_blobs(16, 400, 200, 200, 6.0, 1);
  const LabeledData train_data = join(blobs.manifest, blobs.embeddings, Partition::Train);
  const LabeledData val_data = join(blobs.manifest, blobs.embeddings, Partition::Val);
  const LabeledData test_data = join(blobs.manifest, blobs.embeddings, Partition::Test);

  const TrainConfig base;  // h=256, 100 epochs, batch 128, seed 42, Adam
  const GridResult g = grid_search(train_data, val_data, base, {1e-3, 1e-4, 1e-5, 1e-6});
  const MetricsReport r = full_report(score(g.best.head, test_data), PaiScope::pooled());
  if (r.eer.value != 0.0) return "test EER " + std::to_string(r.eer.value);
  if (r.bpcer10.bpcer != 0.0 || r.bpcer20.bpcer != 0.0 || r.bpcer100.bpcer != 0.0) return "nonzero BPCER";
  for (const auto& [species, v] : r.apcer_per_pai) {
    if (v != 0.0) return "nonzero APCER for " + species.name();
  }

  TrainConfig probe = base;
  probe.learning_rate = 1e3;
  try {
    const TrainResult bad = train(train_data, val_data, probe);
    const bool flagged = std::any_of(bad.history.begin(), bad.history.end(),
                                     [](const EpochRecord& e) { return e.val_eer >= 0.4; });
    if (!flagged) return "lr=1e3 probe finished without NanLoss, Diverged, or EER >= 0.4";
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NanLoss && e.code() != ErrorCode::Diverged) {
      return std::string("probe raised ") + std::string(to_string(e.code()));
    }
  }
  return {};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

int cli(std::vector<std::string> args) {
  args.insert(args.begin(), "padkit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  return run_cli(static_cast<int>(argv.size()), argv.data(), out, err);
}

std::string deterministic_cli() {
  std::random_device rd;
  const fs::path dir = fs::temp_directory_path() / ("padkit-accept-" + std::to_string(rd()));
  fs::create_directories(dir);
  struct Cleanup {
    fs::path p;
    ~Cleanup() {
      std::error_code ec;
      fs::remove_all(p, ec);
    }
  } cleanup{dir};

  const auto blobs = fixtures::gaussian_blobs(16, 400, 200, 200, 6.0, 1, 1);
  write_manifest(blobs.manifest, dir / "manifest.csv");
  write_embeddings(blobs.embeddings, dir / "emb.bin");

  std::vector<std::string> artifacts[2];
  nlohmann::json records[2];
  for (int run = 0; run < 2; ++run) {
    if (cli({"train", "--manifest", (dir / "manifest.csv").string(), "--embeddings", (dir / "emb.bin").string(),
             "--lr", "1e-3", "--epochs", "30", "--out", (dir / "scores.csv").string()}) != 0) {
      return "train failed";
    }
    const auto train_record = nlohmann::json::parse(slurp(dir / "run.json"));
    if (cli({"evaluate", "--scores", (dir / "scores.csv").string(), "--report", (dir / "report.json").string()}) != 0) {
      return "evaluate failed";
    }
    artifacts[run] = {slurp(dir / "scores.csv"), slurp(dir / "report.json")};
    records[run] = train_record;
    records[run].erase("timestamp");
    fs::remove(dir / "scores.csv");
    fs::remove(dir / "report.json");
  }
  if (artifacts[0][0] != artifacts[1][0]) return "scores.csv differs between runs";
  if (artifacts[0][1] != artifacts[1][1]) return "report.json differs between runs";
  if (records[0] != records[1]) return "run.json differs beyond its timestamp";
  return {};
}

bool bit_equal(const EmbeddingSet& a, const EmbeddingSet& b) {
  if (a.backbone_id != b.backbone_id || a.dim != b.dim || a.augmented_replicas != b.augmented_replicas ||
      a.sample_ids != b.sample_ids || a.vectors.size() != b.vectors.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.vectors.size(); ++i) {
    if (std::bit_cast<std::uint32_t>(a.vectors[i]) != std::bit_cast<std::uint32_t>(b.vectors[i])) return false;
  }
  return true;
}

void put_u32(std::vector<std::uint8_t>& bytes, std::size_t at, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) bytes[at + i] = static_cast<std::uint8_t>(v >> (8 * i));
}

void put_f32(std::vector<std::uint8_t>& bytes, std::size_t at, float v) {
  put_u32(bytes, at, std::bit_cast<std::uint32_t>(v));
}

std::string embedding_format() {
  std::mt19937_64 rng(4242);
  for (int i = 0; i < 1000; ++i) {
    const EmbeddingSet set = fixtures::random_embeddings(rng);
    const auto bytes = encode_embeddings(set);
    if (!bit_equal(decode_embeddings(bytes), set)) return "round trip " + std::to_string(i) + " not bit-exact";
  }

  // Base file: 3 samples, dim 4, one replica. Offsets: magic 0, version 8,
  // dim 12, n 16, r 20, backbone length 24, backbone text 26.
  EmbeddingSet base;
  base.backbone_id = "synthetic-abc";  // same length as dinov2-vitb14
  base.dim = 4;
  base.augmented_replicas = 1;
  base.sample_ids = {"a0", "a1", "a2"};
  base.vectors.resize(base.rows() * base.dim, 0.5f);
  const auto good = encode_embeddings(base);
  const std::size_t ids_at = 26 + base.backbone_id.size();
  const std::size_t payload_at = ids_at + 3 * 4;

  struct Mutant {
    const char* name;
    ErrorCode expected;
    std::function<void(std::vector<std::uint8_t>&)> mutate;
  };
  const std::vector<Mutant> mutants{
      {"empty file", ErrorCode::BadMagic, [](auto& b) { b.clear(); }},
      {"first magic byte", ErrorCode::BadMagic, [](auto& b) { b[0] ^= 0x20; }},
      {"magic version byte", ErrorCode::BadMagic, [](auto& b) { b[7] = 2; }},
      {"version 0", ErrorCode::VersionUnsupported, [](auto& b) { put_u32(b, 8, 0); }},
      {"version 2", ErrorCode::VersionUnsupported, [](auto& b) { put_u32(b, 8, 2); }},
      {"cut after dim", ErrorCode::TruncatedPayload, [](auto& b) { b.resize(16); }},
      {"backbone length past end", ErrorCode::TruncatedPayload,
       [](auto& b) {
         b[24] = 0xFF;
         b[25] = 0xFF;
       }},
      {"sample id length past end", ErrorCode::TruncatedPayload,
       [&](auto& b) { b.resize(ids_at + 2); }},
      {"one extra sample declared", ErrorCode::TruncatedPayload, [](auto& b) { put_u32(b, 16, 4); }},
      {"sample count 2^32-1", ErrorCode::TruncatedPayload, [](auto& b) { put_u32(b, 16, 0xFFFFFFFFu); }},
      {"dim doubled", ErrorCode::TruncatedPayload, [](auto& b) { put_u32(b, 12, 8); }},
      {"extra replica declared", ErrorCode::TruncatedPayload, [](auto& b) { put_u32(b, 20, 2); }},
      {"payload short by one byte", ErrorCode::TruncatedPayload, [](auto& b) { b.pop_back(); }},
      {"payload short by one row", ErrorCode::TruncatedPayload, [](auto& b) { b.resize(b.size() - 16); }},
      {"trailing byte", ErrorCode::InvariantViolation, [](auto& b) { b.push_back(0); }},
      {"dim 0", ErrorCode::InvariantViolation, [](auto& b) { put_u32(b, 12, 0); }},
      {"NaN value", ErrorCode::InvariantViolation,
       [&](auto& b) { put_f32(b, payload_at + 4, std::numeric_limits<float>::quiet_NaN()); }},
      {"infinite value", ErrorCode::InvariantViolation,
       [&](auto& b) { put_f32(b, payload_at + 40, std::numeric_limits<float>::infinity()); }},
      {"duplicate sample id", ErrorCode::InvariantViolation,
       [&](auto& b) { b[ids_at + 4 + 2 + 1] = '0'; }},
      {"known backbone, wrong dim", ErrorCode::DimMismatch,
       [](auto& b) { std::memcpy(b.data() + 26, "dinov2-vitb14", 13); }},
  };
  if (mutants.size() != 20) return "expected 20 mutants";
  for (const auto& m : mutants) {
    auto bytes = good;
    m.mutate(bytes);
    try {
      decode_embeddings(bytes);
      return std::string("mutant '") + m.name + "' decoded without error";
    } catch (const Error& e) {
      if (e.code() != m.expected) {
        return std::string("mutant '") + m.name + "' raised " + std::string(to_string(e.code())) + ", expected " +
               std::string(to_string(m.expected));
      }
    }
  }
  return {};
}

std::string cube_invariance() {
  const auto& sets = generated_sets();
  for (std::size_t k = 0; k < sets.size(); ++k) {
    ScoreSet cubed = sets[k];
    for (auto& e : cubed.entries) e.score = e.score * e.score * e.score;
    std::vector<PaiScope> scopes{PaiScope::pooled(), PaiScope::worst_case()};
    for (const auto& name : oracle::species_list(sets[k])) scopes.push_back(PaiScope::single(name));
    for (const auto& scope : scopes) {
      const MetricsReport a = full_report(sets[k], scope);
      const MetricsReport b = full_report(cubed, scope);
      const bool same =
          a.eer.value == b.eer.value && a.eer.exact == b.eer.exact && a.bpcer10.bpcer == b.bpcer10.bpcer &&
          a.bpcer20.bpcer == b.bpcer20.bpcer && a.bpcer100.bpcer == b.bpcer100.bpcer &&
          a.bpcer10.apcer == b.bpcer10.apcer && a.bpcer20.apcer == b.bpcer20.apcer &&
          a.bpcer100.apcer == b.bpcer100.apcer && a.bpcer_at_eer == b.bpcer_at_eer &&
          a.apcer_per_pai == b.apcer_per_pai && a.worst_case_at_eer.apcer == b.worst_case_at_eer.apcer &&
          a.worst_case_at_eer.species == b.worst_case_at_eer.species;
      if (!same) return where(k, scope.name() + " report changed under s^3");
    }
  }
  return {};
}

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {"metrics match brute-force oracle on 1000 random score sets", 10.0, metrics_match_oracle},
      {"hand-derived pooled EER = 1/3 within 1e-12", 0.0, hand_eer},
      {"BPCER10 <= BPCER20 <= BPCER100 on all generated sets", 0.0, operating_points_ordered},
      {"gradient check, 100 cases, relative error <= 1e-4", 30.0, gradient_check},
      {"end-to-end blobs: test EER 0, operating points 0, lr=1e3 probe flagged", 60.0, end_to_end_blobs},
      {"train+evaluate twice gives byte-identical scores.csv and report.json", 0.0, deterministic_cli},
      {"1000 embedding round trips bit-exact, 20 corruption mutants rejected", 0.0, embedding_format},
      {"s -> s^3 changes no reported metric", 0.0, cube_invariance},
  };

  int failures = 0;
  for (const auto& c : criteria) {
    const auto start = Clock::now();
    std::string failure;
    try {
      failure = c.check();
    } catch (const std::exception& e) {
      failure = std::string("exception: ") + e.what();
    }
    const double seconds = std::chrono::duration<double>(Clock::now() - start).count();
    if (failure.empty() && c.time_limit_s > 0 && seconds > c.time_limit_s) {
      failure = "took " + std::to_string(seconds) + " s, limit " + std::to_string(c.time_limit_s) + " s";
    }
    char timing[32];
    std::snprintf(timing, sizeof(timing), "%.2f s", seconds);
    if (failure.empty()) {
      std::cout << "PASS  " << c.name << "  (" << timing << ")\n";
    } else {
      std::cout << "FAIL  " << c.name << "  (" << timing << "): " << failure << '\n';
      ++failures;
    }
  }
  std::cout << (criteria.size() - static_cast<std::size_t>(failures)) << "/" << criteria.size()
            << " criteria passed\n";
  return failures == 0 ? 0 : 1;
}
