#include "cli/provenance.hpp"

#include <array>
#include <chrono>
#include <ctime>
#include <fstream>
#include <memory>

#include <openssl/evp.h>

#include "padkit/error.hpp"
#include "padkit/version.hpp"

namespace padkit::cli {
namespace {

std::string utc_now() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string sha256_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + path.string());

  std::unique_ptr<EVP_MD_CTX, decltype(&EVP_MD_CTX_free)> ctx(EVP_MD_CTX_new(), EVP_MD_CTX_free);
  if (!ctx || EVP_DigestInit_ex(ctx.get(), EVP_sha256(), nullptr) != 1) {
    throw Error(ErrorCode::Io, "sha256 unavailable");
  }
  std::array<char, 1 << 16> buf;
  while (in) {
    in.read(buf.data(), buf.size());
    if (in.gcount() > 0) EVP_DigestUpdate(ctx.get(), buf.data(), static_cast<std::size_t>(in.gcount()));
  }
  if (in.bad()) throw Error(ErrorCode::Io, "read failure on " + path.string());

  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  EVP_DigestFinal_ex(ctx.get(), digest, &len);
  static constexpr char kHex[] = "0123456789abcdef";
  std::string hex;
  for (unsigned int i = 0; i < len; ++i) {
    hex.push_back(kHex[digest[i] >> 4]);
    hex.push_back(kHex[digest[i] & 0xF]);
  }
  return hex;
}

nlohmann::ordered_json to_json(const RunRecord& record) {
  nlohmann::ordered_json j;
  j["toolkit"] = "padkit";
  j["version"] = kVersion;
  j["command"] = record.command;
  j["argv"] = record.argv;
  j["config_file"] = record.config_file ? nlohmann::ordered_json(record.config_file->string()) : nullptr;
  j["config_file_values"] = record.config_file_values;
  j["effective_config"] = record.effective;
  j["seed"] = record.seed ? nlohmann::ordered_json(*record.seed) : nullptr;

  nlohmann::ordered_json inputs = nlohmann::ordered_json::array();
  for (const auto& p : record.inputs) {
    nlohmann::ordered_json in{{"path", p.string()}};
    std::error_code ec;
    if (std::filesystem::is_regular_file(p, ec)) {
      in["bytes"] = std::filesystem::file_size(p, ec);
      in["sha256"] = sha256_file(p);
    } else {
      in["bytes"] = nullptr;
      in["sha256"] = nullptr;
    }
    inputs.push_back(std::move(in));
  }
  j["inputs"] = std::move(inputs);

  nlohmann::ordered_json outputs = nlohmann::ordered_json::array();
  for (const auto& p : record.outputs) outputs.push_back(p.string());
  j["outputs"] = std::move(outputs);

  j["exit_code"] = record.exit_code;
  if (record.exit_code == 0) {
    j["status"] = "ok";
  } else {
    j["status"] = "error";
    j["error"] = {{"category", record.error_category}, {"code", record.error_code}, {"message", record.error_message}};
  }
  j["timestamp"] = utc_now();
  return j;
}

void write_run_record(const RunRecord& record, const std::filesystem::path& path) {
  const std::string text = to_json(record).dump(2) + "\n";
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(ErrorCode::Io, "cannot write run record " + path.string());
  out << text;
  if (!out) throw Error(ErrorCode::Io, "write failure on " + path.string());
}

}  // namespace padkit::cli
