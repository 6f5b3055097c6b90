#pragma once

#include <map>
#include <string>
#include <vector>

#include "pmt/testbed/report.hpp"
#include "pmt/testbed/scenario.hpp"

namespace pmt {

using Tolerances = std::map<std::string, double>;

// Library constants used when a config leaves a tolerance out:
//   decay_tau_slack          0.1     tau_hat >= tau - slack
//   collar_roundtrip         1e-10   |from_ambient(to_ambient(x, t)) - (x, t)|
//   locality_mismatches      0       g_delta != g outside the band, count
//   control_singular_fit     0.05    relative error of the spike integral against the jump
//   control_variation        2       max / min across the delta sequence
//   control_noise_floor      1e-8    values below are treated as equal
//   curvature_floor          1e-6    R >= -floor, H >= -floor when hypotheses hold
//   mass_relative            0.005   against the closed-form mass
//   shift_relative           0.02    mass-shift identity
//   positivity_abs           1e-6    added to the extrapolation residual
//   strict_positivity_upper  1e-9    v <= 1 + bound
//   flatten_defect           1e-12   g_eps - u^{4/(n-2)} delta beyond K
//   c2                       1e-3    C^2 seam diagnostics
//   doubling_ratio           1e-10   |m_doubled - 2 m_corner| / max(1, |m_corner|)
//   order_min                1.7     observed convergence orders
//   green_symmetry           1e-14   face-normal derivative of G against |grad G|
//   green_representation     0.01    relative reconstruction error
//   euclidean_zero           1e-12   mass terms of the Euclidean metric
//   runtime_euclidean        1       seconds
//   runtime_schwarzschild    60      seconds
Tolerances default_tolerances();

// defaults overlaid with the given values
Tolerances merged_tolerances(const Tolerances& overrides);

// Named pipelines: theorem-1, theorem-2, acceptance, criterion-1 .. criterion-11, and the
// CLI sets curvature, mass, mollify, solve, flatten, double.
bool is_named_pipeline(const std::string& name);
std::vector<std::string> named_pipeline(const std::string& name);

// Expands a single named pipeline, then checks that every stage is known and that its
// prerequisites come earlier. Throws ConfigError.
std::vector<std::string> resolve_pipeline(const std::vector<std::string>& stages);

// Stages run in order. A stage that throws is reported as error with its name and the
// stages after it are skipped.
Report run_pipeline(const ScenarioConfig& config);

// acceptance criterion k in 1..11 on its fixed scenario
StageResult run_criterion(int k, const Tolerances& tol);
const char* criterion_title(int k);

}  // namespace pmt
