#pragma once

#include <map>
#include <string>
#include <vector>

#include "pmt/collar/mollifier.hpp"
#include "pmt/elliptic/robin.hpp"
#include "pmt/geometry/metric_field.hpp"

namespace pmt {

enum class ScenarioKind {
  euclidean,
  schwarzschild_half,
  glued_schwarzschild_flat,
  compact_perturbation,
  quarter_schwarzschild,
  custom_expression
};

const char* to_string(ScenarioKind k);
ScenarioKind scenario_kind_from_string(const std::string& s);

struct ScenarioConfig {
  std::string name;
  ScenarioKind scenario = ScenarioKind::euclidean;
  std::map<std::string, double> params;
  Domain domain;
  std::vector<double> deltas = {0.2, 0.1, 0.05};  // mollifier sequence
  std::vector<std::string> pipeline;             // stage names or one named pipeline
  std::map<std::string, double> tolerances;      // overrides of default_tolerances()
  std::string expression;                        // custom_expression: conformal factor u
  double grid_L = 8.0;                           // BVP box half-width
  double grid_h = 0.25;                          // BVP grid spacing
  double flatten_radius = 4.0;                   // R of the cutoff chi_R (theorem-2)

  void validate() const;
};

// Parameters, with defaults:
//   schwarzschild_half        m = 1 (> 0)
//   glued_schwarzschild_flat  m = 1 (> 0), r0 = domain.r_inner
//   compact_perturbation      eps = 0.05 (|eps| < 0.25), s = 1, c1 = 1.5 (> s)
//   quarter_schwarzschild     m = 1 (> 0), a = 1 (> 0); domain must be quarter_space
//   custom_expression         tau = n - 2, C = 1; remaining params bound in the expression
// euclidean carries tau = +infinity.
MetricField builtin_metric(ScenarioKind kind, const std::map<std::string, double>& params,
                           const Domain& domain, const std::string& expression = "");
MetricField builtin_metric(const ScenarioConfig& config);

struct ScenarioTraits {
  bool has_interface = false;
  bool satisfies_hypotheses = false;  // R >= 0, H >= 0 on each piece, H_- >= H_+ at the interface
  bool strict_jump = false;           // H_- > H_+ somewhere
  bool quarter = false;
  double expected_mass = 0.0;         // NaN when no closed form is known
};

ScenarioTraits scenario_traits(ScenarioKind kind, const std::map<std::string, double>& params,
                               const Domain& domain);

// value of a parameter or its documented default
double scenario_param(ScenarioKind kind, const std::map<std::string, double>& params,
                      const std::string& key, const Domain& domain);

}  // namespace pmt
