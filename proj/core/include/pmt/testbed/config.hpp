#pragma once

#include <string>

#include "pmt/testbed/scenario.hpp"

namespace pmt {

// YAML document:
//   name: glued-default
//   scenario: glued_schwarzschild_flat
//   params: {m: 1.0, r0: 2.0}
//   domain: {kind: half_space, n: 3, r_inner: 2.0, r_outer: 16.0, h: 0.0625}
//   mollifier: {deltas: [0.2, 0.1, 0.05]}
//   grid: {L: 8.0, h: 0.25}
//   flatten: {R_cut: 4.0}
//   pipeline: theorem-1          # or a list of stage names
//   tolerances: {mass_relative: 0.005}
//   expression: "1 + m / (2 * r)"  # custom_expression only
// Missing keys keep the ScenarioConfig defaults.
ScenarioConfig parse_config(const std::string& text);
ScenarioConfig load_config(const std::string& path);

// canonical YAML with every field spelled out; parse_config(config_to_yaml(c)) reproduces c
std::string config_to_yaml(const ScenarioConfig& c);

// FNV-1a 64 of the canonical text, 16 hex digits
std::string config_hash(const ScenarioConfig& c);

}  // namespace pmt
