#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rjd/certificate.hpp"
#include "rjd/config.hpp"
#include "rjd/csv.hpp"

namespace rjd {

inline constexpr const char* kToolVersion = "0.1.0";

struct Verdict {
  std::string name;
  bool pass = false;
  double measured = 0.0;
  double threshold = 0.0;
  /// How measured is compared with threshold, e.g. "<=".
  std::string relation = "<=";
};

/// Receives table rows as they are produced.
class TableSink {
 public:
  virtual ~TableSink() = default;
  virtual void begin(const std::string& name, const std::vector<std::string>& columns) = 0;
  virtual void row(std::span<const double> values) = 0;
};

/// Writes a single table as CSV.
class CsvSink : public TableSink {
 public:
  explicit CsvSink(std::ostream& out) : out_(&out) {}
  void begin(const std::string& name, const std::vector<std::string>& columns) override;
  void row(std::span<const double> values) override;

 private:
  std::ostream* out_;
  std::optional<CsvWriter> writer_;
};

/// Keeps every table in memory.
class CollectSink : public TableSink {
 public:
  void begin(const std::string& name, const std::vector<std::string>& columns) override;
  void row(std::span<const double> values) override;

  std::vector<std::pair<std::string, CsvTable>> tables;
};

struct Report {
  Json config;
  std::vector<std::string> defaults_applied;
  std::optional<RateCertificate> certificate;
  std::vector<std::pair<std::string, CsvTable>> tables;
  std::vector<Verdict> verdicts;
  Json details = Json::object();
  double wall_clock_seconds = 0.0;

  bool all_pass() const;
  /// Names of failing verdicts, comma separated.
  std::string failures() const;
  void add(Verdict v) { verdicts.push_back(std::move(v)); }
};

/// JSON view of a certificate with keys lambda, k, G, K, p, lambda_max,
/// a3_holds, thm2_applicable, notes. Infinite values become the string "inf".
Json certificate_json(const RateCertificate& cert);

/// Non-finite numbers become the strings "nan", "inf", "-inf".
Json number_json(double v);

/// Full report. wall_clock_seconds is the last key so that two runs differ
/// only on that line.
Json to_json(const Report& report);

}  // namespace rjd
