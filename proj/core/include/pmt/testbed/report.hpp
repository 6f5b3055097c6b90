#pragma once

#include <string>
#include <vector>

#include "pmt/mass/mass.hpp"

namespace pmt {

// record: measured value kept for reference; tolerance is NaN and pass is true
enum class Relation { le, lt, ge, gt, record };

const char* to_string(Relation r);
Relation relation_from_string(const std::string& s);

struct Check {
  std::string name;
  double value = 0.0;
  double tolerance = 0.0;
  Relation relation = Relation::le;
  bool pass = true;
};

Check make_check(std::string name, double value, Relation rel, double tolerance);
Check make_record(std::string name, double value);

enum class StageStatus { passed, failed, skipped, error };

const char* to_string(StageStatus s);
StageStatus stage_status_from_string(const std::string& s);

struct StageResult {
  std::string name;
  StageStatus status = StageStatus::passed;
  std::string message;
  std::vector<Check> checks;
  double seconds = 0.0;  // wall time, excluded from comparisons

  Check& add(Check c);
  const Check* find(const std::string& check) const;
  // passed unless a check failed; skipped and error are left alone
  void settle();
};

struct MassSeries {
  std::string name;
  double m_infinity = 0.0;
  double fit_exponent = 0.0;
  double fit_residual = 0.0;
  std::vector<MassSample> samples;
};

MassSeries make_series(std::string name, const MassEstimate& e);

struct Report {
  std::string pipeline;
  std::string scenario;
  std::string config_hash;
  std::vector<Check> grid;  // provenance: grid and quadrature parameters (records)
  std::vector<StageResult> stages;
  std::vector<MassSeries> series;

  // true when no stage failed or errored
  bool passed() const;
  const StageResult* stage(const std::string& name) const;
};

// equality ignoring StageResult::seconds; NaN compares equal to NaN
bool same_report(const Report& a, const Report& b);

enum class ReportFormat { json, csv };

ReportFormat report_format_from_string(const std::string& s);

std::string report_to_json(const Report& r);
Report report_from_json(const std::string& text);
// columns rho, flux, boundary_1 .. boundary_k, total
std::string series_to_csv(const MassSeries& s);

// json: the document at path and one CSV per series next to it, <stem>.<series>.csv.
// csv: the series files only; with no series an empty table is written at path.
// Returns the paths written.
std::vector<std::string> emit_report(const Report& r, ReportFormat format, const std::string& path);

}  // namespace pmt
