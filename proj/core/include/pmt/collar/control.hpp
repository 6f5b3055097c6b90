#pragma once

#include <vector>

#include "pmt/collar/mollify.hpp"

namespace pmt {

struct JumpSample {
  Vec x;
  double H_minus = 0.0;
  double H_plus = 0.0;
  double jump = 0.0;      // H_minus - H_plus
  double integral = 0.0;  // int_{|t| <= delta^2/100} R_{g_delta}(x, t) dt
  double fit_error = 0.0;
  double coefficient = 0.0;  // integral / jump
};

struct CurvatureControlReport {
  double delta = 0.0;
  double smooth_bound = 0.0;          // max |R - jump * kernel| on |t| <= delta/2
  double smooth_bound_fitted = 0.0;   // same with the fitted coefficient
  double outer_bound = 0.0;           // max |R| on delta^2/100 < |t| <= delta/2
  double peak = 0.0;                  // max |R| in the band
  std::vector<JumpSample> jump_samples;
  double singular_fit_error = 0.0;    // max over samples
  double fitted_coefficient = 0.0;    // mean of integral / jump
  double boundary_mean_bound = 0.0;   // max |H^{dM}_{g_delta}|
};

struct ControlOptions {
  int sigma_samples = 4;   // interior sample points of Sigma, plus one boundary point
  int t_samples = 41;      // per region
  int spike_nodes = 64;
  double h = 1e-2;         // FD step in collar coordinates (non-warped collars)
  double jump_floor = 1e-12;  // below this |jump| the fit error is absolute
};

CurvatureControlReport curvature_control_report(const MetricField& field_delta,
                                                const MetricField& field,
                                                const CollarChart& collar,
                                                const MollifierSpec& spec,
                                                const ControlOptions& opt = {});

// R_{g_delta} at collar coordinates (x on Sigma, t)
double mollified_scalar(const MollifiedMetric& mm, const Vec& x, double t, double h);

}  // namespace pmt
