#include "padkit/embeddings.hpp"

#include <array>
#include <bit>
#include <cmath>
#include <fstream>
#include <iterator>
#include <limits>
#include <unordered_map>
#include <unordered_set>

#include "padkit/error.hpp"
#include "padkit/scores.hpp"

namespace padkit {
namespace {

struct KnownBackbone {
  std::string_view id;
  std::uint32_t dim;
};

constexpr std::array<KnownBackbone, 6> kBackbones{{
    {"dinov2-vits14", 384},
    {"dinov2-vitb14", 768},
    {"dinov2-vitl14", 1024},
    {"clip-vit-b32", 512},
    {"clip-vit-b16", 512},
    {"clip-vit-l14", 768},
}};

class ByteWriter {
 public:
  explicit ByteWriter(std::size_t reserve) { bytes_.reserve(reserve); }

  void u16(std::uint16_t v) {
    bytes_.push_back(static_cast<std::uint8_t>(v));
    bytes_.push_back(static_cast<std::uint8_t>(v >> 8));
  }
  void u32(std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) bytes_.push_back(static_cast<std::uint8_t>(v >> s));
  }
  void f32(float v) { u32(std::bit_cast<std::uint32_t>(v)); }
  void raw(std::string_view s) { bytes_.insert(bytes_.end(), s.begin(), s.end()); }
  void str16(const std::string& s, const char* what) {
    if (s.size() > std::numeric_limits<std::uint16_t>::max()) {
      throw Error(ErrorCode::InvariantViolation, std::string(what) + " longer than 65535 bytes");
    }
    u16(static_cast<std::uint16_t>(s.size()));
    raw(s);
  }

  std::vector<std::uint8_t> take() { return std::move(bytes_); }

 private:
  std::vector<std::uint8_t> bytes_;
};

class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  std::size_t offset() const noexcept { return pos_; }
  std::size_t remaining() const noexcept { return bytes_.size() - pos_; }

  void need(std::size_t n, const char* what) const {
    if (remaining() < n) {
      throw Error(ErrorCode::TruncatedPayload,
                  std::string("truncated ") + what + ": need " + std::to_string(n) + " bytes at offset " +
                      std::to_string(pos_) + ", file has " + std::to_string(bytes_.size()) + " bytes");
    }
  }
  std::uint16_t u16(const char* what) {
    need(2, what);
    const auto v = static_cast<std::uint16_t>(bytes_[pos_] | (bytes_[pos_ + 1] << 8));
    pos_ += 2;
    return v;
  }
  std::uint32_t u32(const char* what) {
    need(4, what);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return v;
  }
  float f32() {
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= std::uint32_t{bytes_[pos_ + i]} << (8 * i);
    pos_ += 4;
    return std::bit_cast<float>(v);
  }
  std::string str16(const char* what) {
    const std::uint16_t len = u16(what);
    need(len, what);
    std::string s(reinterpret_cast<const char*>(bytes_.data() + pos_), len);
    pos_ += len;
    return s;
  }
  std::span<const std::uint8_t> bytes(std::size_t n, const char* what) {
    need(n, what);
    auto out = bytes_.subspan(pos_, n);
    pos_ += n;
    return out;
  }

 private:
  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

void check_backbone_dim(const std::string& backbone_id, std::uint32_t dim) {
  if (auto expected = expected_backbone_dim(backbone_id); expected && *expected != dim) {
    throw Error(ErrorCode::DimMismatch, "backbone '" + backbone_id + "' produces dim " + std::to_string(*expected) +
                                            ", set declares dim " + std::to_string(dim));
  }
}

}  // namespace

std::optional<std::uint32_t> expected_backbone_dim(std::string_view backbone_id) {
  for (const auto& b : kBackbones) {
    if (backbone_id == b.id) return b.dim;
    if (backbone_id.size() > b.id.size() && backbone_id.substr(0, b.id.size()) == b.id &&
        backbone_id[b.id.size()] == '-') {
      return b.dim;
    }
  }
  return std::nullopt;
}

void validate(const EmbeddingSet& set) {
  if (set.dim == 0) throw Error(ErrorCode::InvariantViolation, "dim must be positive");
  if (set.vectors.size() != set.rows() * set.dim) {
    throw Error(ErrorCode::InvariantViolation,
                "vector count " + std::to_string(set.vectors.size()) + " != " + std::to_string(set.sample_ids.size()) +
                    " ids x " + std::to_string(set.rows_per_sample()) + " rows x dim " + std::to_string(set.dim));
  }
  for (std::size_t i = 0; i < set.vectors.size(); ++i) {
    if (!std::isfinite(set.vectors[i])) {
      throw Error(ErrorCode::InvariantViolation, "non-finite value at row " + std::to_string(i / set.dim) +
                                                     ", column " + std::to_string(i % set.dim));
    }
  }
  std::unordered_set<std::string_view> seen;
  for (const auto& id : set.sample_ids) {
    if (!seen.insert(id).second) throw Error(ErrorCode::InvariantViolation, "duplicate sample_id '" + id + "'");
  }
  check_backbone_dim(set.backbone_id, set.dim);
}

std::vector<std::uint8_t> encode_embeddings(const EmbeddingSet& set) {
  validate(set);
  if (set.sample_ids.size() > std::numeric_limits<std::uint32_t>::max()) {
    throw Error(ErrorCode::InvariantViolation, "too many samples for a u32 count");
  }
  ByteWriter w(8 + 16 + set.backbone_id.size() + set.sample_ids.size() * 16 + set.vectors.size() * 4);
  w.raw(kEmbeddingMagic);
  w.u32(kEmbeddingFormatVersion);
  w.u32(set.dim);
  w.u32(static_cast<std::uint32_t>(set.sample_ids.size()));
  w.u32(set.augmented_replicas);
  w.str16(set.backbone_id, "backbone_id");
  for (const auto& id : set.sample_ids) w.str16(id, "sample_id");
  for (float v : set.vectors) w.f32(v);
  return w.take();
}

EmbeddingSet decode_embeddings(std::span<const std::uint8_t> bytes) {
  ByteReader r(bytes);
  if (bytes.size() < kEmbeddingMagic.size() ||
      !std::equal(kEmbeddingMagic.begin(), kEmbeddingMagic.end(), bytes.begin())) {
    throw Error(ErrorCode::BadMagic, "not an embedding file (magic mismatch)");
  }
  r.bytes(kEmbeddingMagic.size(), "magic");
  const std::uint32_t version = r.u32("header");
  if (version != kEmbeddingFormatVersion) {
    throw Error(ErrorCode::VersionUnsupported, "format version " + std::to_string(version) + " unsupported (expected " +
                                                   std::to_string(kEmbeddingFormatVersion) + ")");
  }
  EmbeddingSet set;
  set.dim = r.u32("header");
  const std::uint32_t n = r.u32("header");
  set.augmented_replicas = r.u32("header");
  set.backbone_id = r.str16("backbone_id");
  if (set.dim == 0) throw Error(ErrorCode::InvariantViolation, "dim must be positive");
  check_backbone_dim(set.backbone_id, set.dim);

  set.sample_ids.reserve(std::min<std::size_t>(n, r.remaining() / 2));
  for (std::uint32_t i = 0; i < n; ++i) set.sample_ids.push_back(r.str16("sample_id table"));

  const std::size_t payload_start = r.offset();
  // The double comparison rejects headers whose integer product would overflow.
  const double declared = static_cast<double>(n) * static_cast<double>(set.rows_per_sample()) *
                          static_cast<double>(set.dim) * sizeof(float);
  if (declared > static_cast<double>(r.remaining()) ||
      std::uint64_t{n} * set.rows_per_sample() * set.dim * sizeof(float) > r.remaining()) {
    throw Error(ErrorCode::TruncatedPayload,
                "payload truncated: header declares " + std::to_string(n) + " samples x " +
                    std::to_string(set.rows_per_sample()) + " rows x dim " + std::to_string(set.dim) + " (" +
                    format_double(declared) + " bytes) from offset " + std::to_string(payload_start) +
                    ", file ends at offset " + std::to_string(bytes.size()));
  }
  const std::size_t count = std::size_t{n} * set.rows_per_sample() * set.dim;
  set.vectors.resize(count);
  for (std::size_t i = 0; i < count; ++i) set.vectors[i] = r.f32();
  if (r.remaining() != 0) {
    throw Error(ErrorCode::InvariantViolation,
                std::to_string(r.remaining()) + " trailing bytes after payload at offset " + std::to_string(r.offset()));
  }
  validate(set);
  return set;
}

void write_embeddings(const EmbeddingSet& set, const std::filesystem::path& path) {
  const auto bytes = encode_embeddings(set);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(ErrorCode::Io, "write failure on " + path.string());
}

EmbeddingSet read_embeddings(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open embeddings " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (in.bad()) throw Error(ErrorCode::Io, "read failure on " + path.string());
  return decode_embeddings(bytes);
}

LabeledData join(const Manifest& manifest, const EmbeddingSet& set, Partition partition) {
  std::unordered_map<std::string_view, std::size_t> index;
  index.reserve(set.sample_ids.size());
  for (std::size_t i = 0; i < set.sample_ids.size(); ++i) index.emplace(set.sample_ids[i], i);

  LabeledData data;
  data.dim = set.dim;
  data.replicas = set.augmented_replicas;
  const std::size_t per_sample = set.rows_per_sample() * set.dim;
  for (const auto& rec : manifest.records()) {
    if (rec.partition != partition) continue;
    auto it = index.find(rec.sample_id);
    if (it == index.end()) {
      throw Error(ErrorCode::MissingEmbedding, "no embedding for sample_id '" + rec.sample_id + "'");
    }
    data.sample_ids.push_back(rec.sample_id);
    data.labels.push_back(rec.label);
    data.species.push_back(rec.pai_species);
    const float* src = set.vectors.data() + it->second * per_sample;
    data.features.insert(data.features.end(), src, src + per_sample);
  }
  return data;
}

}  // namespace padkit
