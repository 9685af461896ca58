#pragma once

#include <ostream>
#include <string>

#include <json.hpp>

#include "padkit/manifest.hpp"
#include "padkit/metrics.hpp"

namespace padkit {

enum class ReportFormat { Json, Csv, Text };

/// Accepts "json", "csv", "text". Throws Usage otherwise.
ReportFormat parse_report_format(std::string_view text);

/// JSON document described in docs/report-schema.md.
nlohmann::ordered_json report_to_json(const MetricsReport& report);

/// Writes the report in the requested format. JSON output ends with a newline.
void write_report(const MetricsReport& report, ReportFormat format, std::ostream& out);

nlohmann::ordered_json summary_to_json(const Summary& summary);
void write_summary(const Summary& summary, ReportFormat format, std::ostream& out);

/// 27964 -> "27,964".
std::string with_thousands(std::size_t value);

}  // namespace padkit
