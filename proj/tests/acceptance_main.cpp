#include <chrono>
#include <cstdio>
#include <exception>

#include "pmt/testbed/pipeline.hpp"

using namespace pmt;

namespace {

// pinned; independent of the library defaults
const Tolerances kTolerances = {
    {"decay_tau_slack", 0.1},
    {"collar_roundtrip", 1e-10},
    {"locality_mismatches", 0.0},
    {"control_singular_fit", 0.05},
    {"control_variation", 2.0},
    {"control_noise_floor", 1e-8},
    {"curvature_floor", 1e-6},
    {"mass_relative", 0.005},
    {"shift_relative", 0.02},
    {"positivity_abs", 1e-6},
    {"strict_positivity_upper", 1e-9},
    {"flatten_defect", 1e-12},
    {"c2", 1e-3},
    {"doubling_ratio", 1e-10},
    {"order_min", 1.7},
    {"green_symmetry", 1e-14},
    {"green_representation", 0.01},
    {"euclidean_zero", 1e-12},
    {"runtime_euclidean", 1.0},
    {"runtime_schwarzschild", 60.0},
};

const char* verdict(const StageResult& r) {
  switch (r.status) {
    case StageStatus::passed: return "PASS";
    case StageStatus::failed: return "FAIL";
    case StageStatus::skipped: return "SKIP";
    case StageStatus::error: return "ERROR";
  }
  return "ERROR";
}

}  // namespace

int main() {
  int failures = 0;
  for (int k = 1; k <= 11; ++k) {
    const auto t0 = std::chrono::steady_clock::now();
    StageResult r;
    try {
      r = run_criterion(k, kTolerances);
    } catch (const std::exception& e) {
      r.status = StageStatus::error;
      r.message = e.what();
    }
    const double s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (r.status != StageStatus::passed) ++failures;
    std::printf("criterion %2d: %s  %s  (%.2f s)\n", k, verdict(r), criterion_title(k), s);
    for (const auto& c : r.checks) {
      if (!c.pass) {
        std::printf("    %s = %.6g, tolerance %.6g\n", c.name.c_str(), c.value, c.tolerance);
      }
    }
    if (!r.message.empty() && r.message != criterion_title(k))
      std::printf("    %s\n", r.message.c_str());
    std::fflush(stdout);
  }
  std::printf("%d of 11 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
