#include "pmt/testbed/config.hpp"

#include <cstdint>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <yaml-cpp/yaml.h>

namespace pmt {

namespace {

template <class T>
T scalar(const YAML::Node& n, const std::string& key) {
  try {
    return n.as<T>();
  } catch (const YAML::Exception&) {
    throw ConfigError("config: bad value for '" + key + "'");
  }
}

void reject_unknown(const YAML::Node& map, std::initializer_list<const char*> allowed,
                    const std::string& where) {
  if (!map.IsMap()) throw ConfigError("config: '" + where + "' must be a mapping");
  for (const auto& kv : map) {
    const std::string k = kv.first.as<std::string>();
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError("config: unknown key '" + k + "' in " + where);
  }
}

std::map<std::string, double> real_map(const YAML::Node& n, const std::string& where) {
  if (!n.IsMap()) throw ConfigError("config: '" + where + "' must be a mapping");
  std::map<std::string, double> out;
  for (const auto& kv : n) {
    const std::string k = kv.first.as<std::string>();
    out[k] = scalar<double>(kv.second, where + "." + k);
  }
  return out;
}

std::string g17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

ScenarioConfig parse_config(const std::string& text) {
  YAML::Node root;
  try {
    root = YAML::Load(text);
  } catch (const YAML::Exception& e) {
    throw ConfigError(std::string("config: ") + e.what());
  }
  ScenarioConfig c;
  if (!root || root.IsNull()) return c;
  reject_unknown(root,
                 {"name", "scenario", "params", "domain", "mollifier", "grid", "flatten", "pipeline",
                  "tolerances", "expression"},
                 "document");
  if (root["name"]) c.name = scalar<std::string>(root["name"], "name");
  if (root["scenario"])
    c.scenario = scenario_kind_from_string(scalar<std::string>(root["scenario"], "scenario"));
  if (root["params"]) c.params = real_map(root["params"], "params");
  if (const YAML::Node d = root["domain"]) {
    reject_unknown(d, {"kind", "n", "r_inner", "r_outer", "h"}, "domain");
    if (d["kind"]) c.domain.kind = domain_kind_from_string(scalar<std::string>(d["kind"], "domain.kind"));
    if (d["n"]) c.domain.n = scalar<int>(d["n"], "domain.n");
    if (d["r_inner"]) c.domain.r_inner = scalar<double>(d["r_inner"], "domain.r_inner");
    if (d["r_outer"]) c.domain.r_outer = scalar<double>(d["r_outer"], "domain.r_outer");
    if (d["h"]) c.domain.h = scalar<double>(d["h"], "domain.h");
  }
  if (const YAML::Node m = root["mollifier"]) {
    reject_unknown(m, {"deltas", "delta"}, "mollifier");
    if (m["delta"]) c.deltas = {scalar<double>(m["delta"], "mollifier.delta")};
    if (m["deltas"]) {
      if (!m["deltas"].IsSequence()) throw ConfigError("config: mollifier.deltas must be a list");
      c.deltas.clear();
      for (const auto& v : m["deltas"]) c.deltas.push_back(scalar<double>(v, "mollifier.deltas"));
    }
  }
  if (const YAML::Node g = root["grid"]) {
    reject_unknown(g, {"L", "h"}, "grid");
    if (g["L"]) c.grid_L = scalar<double>(g["L"], "grid.L");
    if (g["h"]) c.grid_h = scalar<double>(g["h"], "grid.h");
  }
  if (const YAML::Node f = root["flatten"]) {
    reject_unknown(f, {"R_cut"}, "flatten");
    if (f["R_cut"]) c.flatten_radius = scalar<double>(f["R_cut"], "flatten.R_cut");
  }
  if (const YAML::Node p = root["pipeline"]) {
    if (p.IsSequence()) {
      for (const auto& v : p) c.pipeline.push_back(scalar<std::string>(v, "pipeline"));
    } else {
      c.pipeline = {scalar<std::string>(p, "pipeline")};
    }
  }
  if (root["tolerances"]) c.tolerances = real_map(root["tolerances"], "tolerances");
  if (root["expression"]) c.expression = scalar<std::string>(root["expression"], "expression");
  c.validate();
  return c;
}

ScenarioConfig load_config(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ConfigError("cannot read config '" + path + "'");
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_config(ss.str());
}

std::string config_to_yaml(const ScenarioConfig& c) {
  YAML::Emitter e;
  e << YAML::BeginMap;
  e << YAML::Key << "name" << YAML::Value << YAML::DoubleQuoted << c.name;
  e << YAML::Key << "scenario" << YAML::Value << to_string(c.scenario);
  e << YAML::Key << "params" << YAML::Value << YAML::BeginMap;
  for (const auto& [k, v] : c.params) e << YAML::Key << k << YAML::Value << g17(v);
  e << YAML::EndMap;
  e << YAML::Key << "domain" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "kind" << YAML::Value << to_string(c.domain.kind);
  e << YAML::Key << "n" << YAML::Value << c.domain.n;
  e << YAML::Key << "r_inner" << YAML::Value << g17(c.domain.r_inner);
  e << YAML::Key << "r_outer" << YAML::Value << g17(c.domain.r_outer);
  e << YAML::Key << "h" << YAML::Value << g17(c.domain.h);
  e << YAML::EndMap;
  e << YAML::Key << "mollifier" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "deltas" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (double d : c.deltas) e << g17(d);
  e << YAML::EndSeq << YAML::EndMap;
  e << YAML::Key << "grid" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "L" << YAML::Value << g17(c.grid_L);
  e << YAML::Key << "h" << YAML::Value << g17(c.grid_h);
  e << YAML::EndMap;
  e << YAML::Key << "flatten" << YAML::Value << YAML::BeginMap;
  e << YAML::Key << "R_cut" << YAML::Value << g17(c.flatten_radius);
  e << YAML::EndMap;
  e << YAML::Key << "pipeline" << YAML::Value << YAML::Flow << YAML::BeginSeq;
  for (const auto& s : c.pipeline) e << s;
  e << YAML::EndSeq;
  e << YAML::Key << "tolerances" << YAML::Value << YAML::BeginMap;
  for (const auto& [k, v] : c.tolerances) e << YAML::Key << k << YAML::Value << g17(v);
  e << YAML::EndMap;
  e << YAML::Key << "expression" << YAML::Value << YAML::DoubleQuoted << c.expression;
  e << YAML::EndMap;
  return std::string(e.c_str()) + "\n";
}

std::string config_hash(const ScenarioConfig& c) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char ch : config_to_yaml(c)) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pmt
