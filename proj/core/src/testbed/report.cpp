#include "pmt/testbed/report.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace pmt {

using nlohmann::json;

namespace {

json number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double number(const json& j) {
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "nan") return std::numeric_limits<double>::quiet_NaN();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
    throw ConfigError("report: bad number '" + s + "'");
  }
  return j.get<double>();
}

bool same(double a, double b) { return (std::isnan(a) && std::isnan(b)) || a == b; }

json check_json(const Check& c) {
  return {{"name", c.name},
          {"value", number(c.value)},
          {"tolerance", number(c.tolerance)},
          {"relation", to_string(c.relation)},
          {"pass", c.pass}};
}

Check check_from(const json& j) {
  Check c;
  c.name = j.at("name").get<std::string>();
  c.value = number(j.at("value"));
  c.tolerance = number(j.at("tolerance"));
  c.relation = relation_from_string(j.at("relation").get<std::string>());
  c.pass = j.at("pass").get<bool>();
  return c;
}

bool same_check(const Check& a, const Check& b) {
  return a.name == b.name && same(a.value, b.value) && same(a.tolerance, b.tolerance) &&
         a.relation == b.relation && a.pass == b.pass;
}

bool same_checks(const std::vector<Check>& a, const std::vector<Check>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!same_check(a[i], b[i])) return false;
  return true;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

const char* to_string(Relation r) {
  switch (r) {
    case Relation::le: return "<=";
    case Relation::lt: return "<";
    case Relation::ge: return ">=";
    case Relation::gt: return ">";
    case Relation::record: return "record";
  }
  return "record";
}

Relation relation_from_string(const std::string& s) {
  if (s == "<=") return Relation::le;
  if (s == "<") return Relation::lt;
  if (s == ">=") return Relation::ge;
  if (s == ">") return Relation::gt;
  if (s == "record") return Relation::record;
  throw ConfigError("report: unknown relation '" + s + "'");
}

Check make_check(std::string name, double value, Relation rel, double tolerance) {
  Check c;
  c.name = std::move(name);
  c.value = value;
  c.tolerance = tolerance;
  c.relation = rel;
  switch (rel) {
    case Relation::le: c.pass = value <= tolerance; break;
    case Relation::lt: c.pass = value < tolerance; break;
    case Relation::ge: c.pass = value >= tolerance; break;
    case Relation::gt: c.pass = value > tolerance; break;
    case Relation::record:
      c.tolerance = std::numeric_limits<double>::quiet_NaN();
      c.pass = true;
      break;
  }
  return c;
}

Check make_record(std::string name, double value) {
  return make_check(std::move(name), value, Relation::record, 0.0);
}

const char* to_string(StageStatus s) {
  switch (s) {
    case StageStatus::passed: return "passed";
    case StageStatus::failed: return "failed";
    case StageStatus::skipped: return "skipped";
    case StageStatus::error: return "error";
  }
  return "error";
}

StageStatus stage_status_from_string(const std::string& s) {
  if (s == "passed") return StageStatus::passed;
  if (s == "failed") return StageStatus::failed;
  if (s == "skipped") return StageStatus::skipped;
  if (s == "error") return StageStatus::error;
  throw ConfigError("report: unknown stage status '" + s + "'");
}

Check& StageResult::add(Check c) {
  checks.push_back(std::move(c));
  return checks.back();
}

const Check* StageResult::find(const std::string& check) const {
  for (const Check& c : checks)
    if (c.name == check) return &c;
  return nullptr;
}

void StageResult::settle() {
  if (status == StageStatus::skipped || status == StageStatus::error) return;
  status = StageStatus::passed;
  for (const Check& c : checks)
    if (!c.pass) status = StageStatus::failed;
}

MassSeries make_series(std::string name, const MassEstimate& e) {
  MassSeries s;
  s.name = std::move(name);
  s.m_infinity = e.m_infinity;
  s.fit_exponent = e.fit_exponent;
  s.fit_residual = e.fit_residual;
  s.samples = e.samples;
  return s;
}

bool Report::passed() const {
  for (const StageResult& s : stages)
    if (s.status == StageStatus::failed || s.status == StageStatus::error) return false;
  return true;
}

const StageResult* Report::stage(const std::string& name) const {
  for (const StageResult& s : stages)
    if (s.name == name) return &s;
  return nullptr;
}

bool same_report(const Report& a, const Report& b) {
  if (a.pipeline != b.pipeline || a.scenario != b.scenario || a.config_hash != b.config_hash)
    return false;
  if (!same_checks(a.grid, b.grid)) return false;
  if (a.stages.size() != b.stages.size() || a.series.size() != b.series.size()) return false;
  for (std::size_t i = 0; i < a.stages.size(); ++i) {
    const StageResult &x = a.stages[i], &y = b.stages[i];
    if (x.name != y.name || x.status != y.status || x.message != y.message) return false;
    if (!same_checks(x.checks, y.checks)) return false;
  }
  for (std::size_t i = 0; i < a.series.size(); ++i) {
    const MassSeries &x = a.series[i], &y = b.series[i];
    if (x.name != y.name || !same(x.m_infinity, y.m_infinity) ||
        !same(x.fit_exponent, y.fit_exponent) || !same(x.fit_residual, y.fit_residual) ||
        x.samples.size() != y.samples.size())
      return false;
    for (std::size_t k = 0; k < x.samples.size(); ++k) {
      const MassSample &p = x.samples[k], &q = y.samples[k];
      if (!same(p.rho, q.rho) || !same(p.flux_term, q.flux_term) || !same(p.total, q.total) ||
          !same(p.flux_upper, q.flux_upper) || !same(p.flux_mirrored, q.flux_mirrored) ||
          p.nodes != q.nodes || p.boundary_terms.size() != q.boundary_terms.size())
        return false;
      for (std::size_t t = 0; t < p.boundary_terms.size(); ++t)
        if (!same(p.boundary_terms[t], q.boundary_terms[t])) return false;
    }
  }
  return true;
}

ReportFormat report_format_from_string(const std::string& s) {
  if (s == "json") return ReportFormat::json;
  if (s == "csv") return ReportFormat::csv;
  throw ConfigError("unknown report format '" + s + "'");
}

std::string report_to_json(const Report& r) {
  json doc;
  doc["pipeline"] = r.pipeline;
  doc["scenario"] = r.scenario;
  doc["config_hash"] = r.config_hash;
  doc["passed"] = r.passed();
  doc["grid"] = json::array();
  for (const Check& c : r.grid) doc["grid"].push_back(check_json(c));
  doc["stages"] = json::array();
  for (const StageResult& s : r.stages) {
    json js = {{"name", s.name},
               {"status", to_string(s.status)},
               {"message", s.message},
               {"seconds", number(s.seconds)},
               {"checks", json::array()}};
    for (const Check& c : s.checks) js["checks"].push_back(check_json(c));
    doc["stages"].push_back(js);
  }
  doc["series"] = json::array();
  for (const MassSeries& s : r.series) {
    json js = {{"name", s.name},
               {"m_infinity", number(s.m_infinity)},
               {"fit_exponent", number(s.fit_exponent)},
               {"fit_residual", number(s.fit_residual)},
               {"samples", json::array()}};
    for (const MassSample& m : s.samples) {
      json b = json::array();
      for (double v : m.boundary_terms) b.push_back(number(v));
      js["samples"].push_back({{"rho", number(m.rho)},
                               {"flux", number(m.flux_term)},
                               {"boundary_terms", b},
                               {"total", number(m.total)},
                               {"flux_upper", number(m.flux_upper)},
                               {"flux_mirrored", number(m.flux_mirrored)},
                               {"nodes", m.nodes}});
    }
    doc["series"].push_back(js);
  }
  return doc.dump(2) + "\n";
}

Report report_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
  Report r;
  try {
    r.pipeline = doc.value("pipeline", "");
    r.scenario = doc.value("scenario", "");
    r.config_hash = doc.value("config_hash", "");
    if (doc.contains("grid"))
      for (const json& c : doc.at("grid")) r.grid.push_back(check_from(c));
    if (doc.contains("stages"))
      for (const json& js : doc.at("stages")) {
        StageResult s;
        s.name = js.at("name").get<std::string>();
        s.status = stage_status_from_string(js.at("status").get<std::string>());
        s.message = js.value("message", "");
        s.seconds = js.contains("seconds") ? number(js.at("seconds")) : 0.0;
        for (const json& c : js.at("checks")) s.checks.push_back(check_from(c));
        r.stages.push_back(std::move(s));
      }
    if (doc.contains("series"))
      for (const json& js : doc.at("series")) {
        MassSeries s;
        s.name = js.at("name").get<std::string>();
        s.m_infinity = number(js.at("m_infinity"));
        s.fit_exponent = number(js.at("fit_exponent"));
        s.fit_residual = number(js.at("fit_residual"));
        for (const json& jm : js.at("samples")) {
          MassSample m;
          m.rho = number(jm.at("rho"));
          m.flux_term = number(jm.at("flux"));
          for (const json& b : jm.at("boundary_terms")) m.boundary_terms.push_back(number(b));
          m.total = number(jm.at("total"));
          m.flux_upper = number(jm.at("flux_upper"));
          m.flux_mirrored = number(jm.at("flux_mirrored"));
          m.nodes = jm.at("nodes").get<int>();
          s.samples.push_back(std::move(m));
        }
        r.series.push_back(std::move(s));
      }
  } catch (const json::exception& e) {
    throw ConfigError(std::string("report: ") + e.what());
  }
  return r;
}

std::string series_to_csv(const MassSeries& s) {
  std::size_t nb = 0;
  for (const MassSample& m : s.samples) nb = std::max(nb, m.boundary_terms.size());
  std::ostringstream os;
  os << "rho,flux";
  for (std::size_t k = 0; k < nb; ++k) os << ",boundary_" << k + 1;
  os << ",total\n";
  for (const MassSample& m : s.samples) {
    os << g17(m.rho) << ',' << g17(m.flux_term);
    for (std::size_t k = 0; k < nb; ++k)
      os << ',' << g17(k < m.boundary_terms.size() ? m.boundary_terms[k] : 0.0);
    os << ',' << g17(m.total) << '\n';
  }
  return os.str();
}

namespace {

void write_file(const std::string& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
  if (!f) throw Error("cannot write '" + path + "'");
}

std::string series_path(const std::string& path, const std::string& name) {
  std::filesystem::path p(path);
  std::filesystem::path stem = p.parent_path() / p.stem();
  return stem.string() + "." + name + ".csv";
}

}  // namespace

std::vector<std::string> emit_report(const Report& r, ReportFormat format, const std::string& path) {
  std::vector<std::string> written;
  if (format == ReportFormat::json) {
    write_file(path, report_to_json(r));
    written.push_back(path);
  } else if (r.series.empty()) {
    write_file(path, "rho,flux,total\n");
    written.push_back(path);
  }
  for (const MassSeries& s : r.series) {
    const std::string p = series_path(path, s.name);
    write_file(p, series_to_csv(s));
    written.push_back(p);
  }
  return written;
}

}  // namespace pmt
