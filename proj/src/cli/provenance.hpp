#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace padkit::cli {

/// Lowercase hex SHA-256 of a file's bytes. Throws Io.
std::string sha256_file(const std::filesystem::path& path);

/// Everything run.json records about one invocation.
struct RunRecord {
  std::string command;
  std::vector<std::string> argv;
  std::optional<std::filesystem::path> config_file;
  nlohmann::ordered_json config_file_values = nlohmann::ordered_json::object();
  nlohmann::ordered_json effective = nlohmann::ordered_json::object();
  std::optional<std::uint64_t> seed;
  std::vector<std::filesystem::path> inputs;
  std::vector<std::filesystem::path> outputs;
  // Filled on failure.
  std::string error_category;
  std::string error_code;
  std::string error_message;
  int exit_code = 0;
};

/// Serializes the record, hashing every input that still exists. The
/// timestamp is the only field that changes between identical runs.
nlohmann::ordered_json to_json(const RunRecord& record);

void write_run_record(const RunRecord& record, const std::filesystem::path& path);

}  // namespace padkit::cli
