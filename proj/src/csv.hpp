#pragma once

// Minimal CSV line handling shared by the manifest and score readers.
// Fields may be double-quoted with "" as an escaped quote; embedded
// newlines are not supported.

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace padkit::csv {

/// Splits one line into fields. Returns nullopt on an unterminated quote.
std::optional<std::vector<std::string>> split_line(std::string_view line);

/// Quotes the field only when it contains a comma, quote, or leading/trailing space.
std::string quote(std::string_view field);

/// Drops a trailing '\r' and a leading UTF-8 BOM (first line only).
std::string_view trim_line_ending(std::string_view line);

}  // namespace padkit::csv
