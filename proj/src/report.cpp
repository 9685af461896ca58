#include "padkit/report.hpp"

#include <cmath>
#include <cstdio>

#include "csv.hpp"
#include "padkit/error.hpp"

namespace padkit {
namespace {

nlohmann::ordered_json tau_json(double tau) {
  if (std::isinf(tau)) return tau > 0 ? "inf" : "-inf";
  return tau;
}

nlohmann::ordered_json operating_point_json(const OperatingPoint& op) {
  nlohmann::ordered_json j;
  j["apcer_target"] = op.apcer_target;
  j["bpcer"] = op.bpcer;
  j["apcer"] = op.apcer;
  j["tau"] = tau_json(op.tau);
  j["attained"] = op.attained;
  return j;
}

std::string pct(double rate) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", rate * 100.0);
  return buf;
}

std::string padded(const std::string& s, std::size_t width) {
  return s.size() >= width ? s : std::string(width - s.size(), ' ') + s;
}

}  // namespace

ReportFormat parse_report_format(std::string_view text) {
  if (text == "json") return ReportFormat::Json;
  if (text == "csv") return ReportFormat::Csv;
  if (text == "text") return ReportFormat::Text;
  throw Error(ErrorCode::Usage, "unknown report format '" + std::string(text) + "'");
}

std::string with_thousands(std::size_t value) {
  std::string digits = std::to_string(value);
  std::string out;
  for (std::size_t i = 0; i < digits.size(); ++i) {
    if (i > 0 && (digits.size() - i) % 3 == 0) out.push_back(',');
    out.push_back(digits[i]);
  }
  return out;
}

nlohmann::ordered_json report_to_json(const MetricsReport& report) {
  nlohmann::ordered_json j;
  j["schema"] = "padkit.report/1";
  j["pai_scope"] = report.scope.name();
  j["eer"] = {{"value", report.eer.value}, {"tau", tau_json(report.eer.tau)}, {"exact", report.eer.exact}};
  j["bpcer10"] = operating_point_json(report.bpcer10);
  j["bpcer20"] = operating_point_json(report.bpcer20);
  j["bpcer100"] = operating_point_json(report.bpcer100);
  nlohmann::ordered_json per_pai = nlohmann::ordered_json::object();
  for (const auto& [species, value] : report.apcer_per_pai) per_pai[species.name()] = value;
  j["at_eer_threshold"] = {{"tau", tau_json(report.eer.tau)},
                           {"bpcer", report.bpcer_at_eer},
                           {"apcer_per_pai", per_pai},
                           {"worst_case_apcer",
                            {{"value", report.worst_case_at_eer.apcer},
                             {"species", report.worst_case_at_eer.species.name()}}}};
  nlohmann::ordered_json n_pais = nlohmann::ordered_json::object();
  for (const auto& [species, n] : report.n_pais) n_pais[species.name()] = n;
  j["counts"] = {{"bona_fide", report.n_bf}, {"attack_per_pai", n_pais}};
  return j;
}

void write_report(const MetricsReport& report, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::Json:
      out << report_to_json(report).dump(2) << '\n';
      return;
    case ReportFormat::Csv:
      out << "pai_scope,eer,bpcer10,bpcer20,bpcer100,bpcer_at_eer,worst_case_apcer_at_eer,worst_case_species\n";
      out << csv::quote(report.scope.name()) << ',' << format_double(report.eer.value) << ','
          << format_double(report.bpcer10.bpcer) << ',' << format_double(report.bpcer20.bpcer) << ','
          << format_double(report.bpcer100.bpcer) << ',' << format_double(report.bpcer_at_eer) << ','
          << format_double(report.worst_case_at_eer.apcer) << ','
          << csv::quote(report.worst_case_at_eer.species.name()) << '\n';
      return;
    case ReportFormat::Text: {
      std::size_t n_attacks = 0;
      for (const auto& [species, n] : report.n_pais) n_attacks += n;
      out << "pai scope: " << report.scope.name() << '\n';
      out << "bona fide: " << with_thousands(report.n_bf) << "  attacks: " << with_thousands(n_attacks) << '\n';
      out << "    EER (%)  BPCER10 (%)  BPCER20 (%)  BPCER100 (%)\n";
      out << padded(pct(report.eer.value), 11) << padded(pct(report.bpcer10.bpcer), 13)
          << padded(pct(report.bpcer20.bpcer), 13) << padded(pct(report.bpcer100.bpcer), 14) << '\n';
      for (const OperatingPoint* op : {&report.bpcer10, &report.bpcer20, &report.bpcer100}) {
        if (!op->attained) out << "note: APCER target " << pct(op->apcer_target) << "% not attained\n";
      }
      out << "APCER (%) per PAI at the EER threshold, BPCER " << pct(report.bpcer_at_eer) << "%:\n";
      for (const auto& [species, value] : report.apcer_per_pai) {
        out << "  " << species.name() << " (n=" << with_thousands(report.n_pais.at(species)) << "): " << pct(value)
            << '\n';
      }
      out << "  worst case: " << pct(report.worst_case_at_eer.apcer) << " ("
          << report.worst_case_at_eer.species.name() << ")\n";
      return;
    }
  }
}

nlohmann::ordered_json summary_to_json(const Summary& summary) {
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& r : summary.rows) {
    rows.push_back({{"label", std::string(to_string(r.label))},
                    {"pai_species", r.species.name()},
                    {"train", r.train},
                    {"val", r.val},
                    {"test", r.test},
                    {"total", r.total()}});
  }
  nlohmann::ordered_json j;
  j["rows"] = rows;
  j["totals"] = {{"train", summary.train}, {"val", summary.val}, {"test", summary.test}, {"total", summary.total()}};
  return j;
}

void write_summary(const Summary& summary, ReportFormat format, std::ostream& out) {
  switch (format) {
    case ReportFormat::Json:
      out << summary_to_json(summary).dump(2) << '\n';
      return;
    case ReportFormat::Csv:
      out << "label,pai_species,train,val,test,total\n";
      for (const auto& r : summary.rows) {
        out << to_string(r.label) << ',' << csv::quote(r.species.name()) << ',' << r.train << ',' << r.val << ','
            << r.test << ',' << r.total() << '\n';
      }
      out << "total,," << summary.train << ',' << summary.val << ',' << summary.test << ',' << summary.total() << '\n';
      return;
    case ReportFormat::Text: {
      std::size_t name_width = 5;
      for (const auto& r : summary.rows) name_width = std::max(name_width, r.species.name().size() + 11);
      auto line = [&](const std::string& name, std::size_t tr, std::size_t va, std::size_t te, std::size_t total) {
        out << name << std::string(name_width - std::min(name_width, name.size()), ' ') << padded(with_thousands(tr), 10)
            << padded(with_thousands(va), 10) << padded(with_thousands(te), 10) << padded(with_thousands(total), 10)
            << '\n';
      };
      out << "class" << std::string(name_width - 5, ' ') << padded("Train", 10) << padded("Val", 10)
          << padded("Test", 10) << padded("Num Im.", 10) << '\n';
      for (const auto& r : summary.rows) {
        const std::string name =
            r.label == Label::BonaFide ? std::string("bona fide") : "attack/" + r.species.name();
        line(name, r.train, r.val, r.test, r.total());
      }
      line("total", summary.train, summary.val, summary.test, summary.total());
      return;
    }
  }
}

}  // namespace padkit
