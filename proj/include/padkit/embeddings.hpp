#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "padkit/manifest.hpp"

namespace padkit {

/// Frozen-backbone feature vectors keyed by sample id.
///
/// Rows are stored sample-major: for sample i, row i*(1+r) is the clean
/// embedding and the following r rows are its augmented replicas.
struct EmbeddingSet {
  std::string backbone_id;
  std::uint32_t dim = 0;
  std::uint32_t augmented_replicas = 0;
  std::vector<std::string> sample_ids;
  std::vector<float> vectors;  // row-major, rows() x dim

  std::size_t rows_per_sample() const noexcept { return 1 + std::size_t{augmented_replicas}; }
  std::size_t rows() const noexcept { return sample_ids.size() * rows_per_sample(); }

  std::span<const float> row(std::size_t r) const { return {vectors.data() + r * dim, dim}; }
  std::span<const float> clean_row(std::size_t sample) const { return row(sample * rows_per_sample()); }

  friend bool operator==(const EmbeddingSet&, const EmbeddingSet&) = default;
};

/// Output width of the backbones the toolkit knows about; nullopt otherwise.
/// Accepts a suffixed id such as "clip-vit-l14-laion400m_e32".
std::optional<std::uint32_t> expected_backbone_dim(std::string_view backbone_id);

/// Throws InvariantViolation (shape, non-finite, duplicate ids) or DimMismatch.
void validate(const EmbeddingSet& set);

inline constexpr std::uint32_t kEmbeddingFormatVersion = 1;
inline constexpr std::string_view kEmbeddingMagic{"PADEMB\0\1", 8};

/// Serialized byte image of a set (little-endian, see docs/formats.md).
std::vector<std::uint8_t> encode_embeddings(const EmbeddingSet& set);
/// Throws BadMagic, VersionUnsupported, TruncatedPayload, DimMismatch, InvariantViolation.
EmbeddingSet decode_embeddings(std::span<const std::uint8_t> bytes);

void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path);
EmbeddingSet read_embeddings(const std::filesystem::path& path);

/// Embeddings of one partition aligned to manifest order, promoted to double.
struct LabeledData {
  std::size_t dim = 0;
  std::size_t replicas = 0;
  std::vector<std::string> sample_ids;
  std::vector<Label> labels;
  std::vector<PaiSpecies> species;
  std::vector<double> features;  // samples() * (1 + replicas) rows of dim

  std::size_t samples() const noexcept { return sample_ids.size(); }
  std::size_t rows_per_sample() const noexcept { return 1 + replicas; }
  std::size_t rows() const noexcept { return samples() * rows_per_sample(); }
  std::span<const double> row(std::size_t r) const { return {features.data() + r * dim, dim}; }
  std::span<const double> clean_row(std::size_t sample) const { return row(sample * rows_per_sample()); }
  /// 1 for attack, 0 for bona fide, for any row (clean or augmented).
  double target(std::size_t r) const { return labels[r / rows_per_sample()] == Label::Attack ? 1.0 : 0.0; }
};

/// Throws MissingEmbedding for the first manifest id of the partition absent from the set.
LabeledData join(const Manifest& manifest, const EmbeddingSet& set, Partition partition);

}  // namespace padkit
