#include "rjd/report.hpp"

#include <cmath>

namespace rjd {

void CsvSink::begin(const std::string&, const std::vector<std::string>& columns) {
  if (writer_) throw std::logic_error("CsvSink holds a single table");
  writer_.emplace(*out_, columns);
}

void CsvSink::row(std::span<const double> values) { writer_->row(values); }

void CollectSink::begin(const std::string& name, const std::vector<std::string>& columns) {
  tables.emplace_back(name, CsvTable{columns, {}});
}

void CollectSink::row(std::span<const double> values) {
  if (values.size() != tables.back().second.columns.size())
    throw std::invalid_argument("table row width does not match the header");
  tables.back().second.rows.emplace_back(values.begin(), values.end());
}

bool Report::all_pass() const {
  for (const auto& v : verdicts)
    if (!v.pass) return false;
  return true;
}

std::string Report::failures() const {
  std::string out;
  for (const auto& v : verdicts)
    if (!v.pass) out += (out.empty() ? "" : ", ") + v.name;
  return out;
}

Json number_json(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

Json certificate_json(const RateCertificate& cert) {
  Json j;
  j["lambda"] = number_json(cert.lambda);
  j["k"] = number_json(cert.k);
  j["G"] = cert.G ? number_json(*cert.G) : Json(nullptr);
  j["K"] = cert.K ? number_json(*cert.K) : Json(nullptr);
  j["p"] = cert.p;
  j["lambda_max"] = number_json(cert.lambda_max);
  j["a3_holds"] = cert.a3_holds;
  j["thm2_applicable"] = cert.thm2_applicable;
  j["notes"] = cert.notes;
  return j;
}

Json to_json(const Report& report) {
  Json j;
  j["tool_version"] = kToolVersion;
  j["config"] = report.config;
  j["defaults_applied"] = report.defaults_applied;
  if (report.certificate) j["certificate"] = certificate_json(*report.certificate);
  Json verdicts = Json::array();
  for (const auto& v : report.verdicts)
    verdicts.push_back(Json{{"name", v.name},
                            {"pass", v.pass},
                            {"measured", number_json(v.measured)},
                            {"relation", v.relation},
                            {"threshold", number_json(v.threshold)}});
  j["verdicts"] = verdicts;
  j["all_pass"] = report.all_pass();
  if (!report.details.empty()) j["details"] = report.details;
  Json tables = Json::object();
  for (const auto& [name, table] : report.tables) {
    Json rows = Json::array();
    for (const auto& r : table.rows) {
      Json row = Json::array();
      for (double v : r) row.push_back(number_json(v));
      rows.push_back(row);
    }
    tables[name] = Json{{"columns", table.columns}, {"rows", rows}};
  }
  if (!tables.empty()) j["tables"] = tables;
  j["wall_clock_seconds"] = report.wall_clock_seconds;
  return j;
}

}  // namespace rjd
