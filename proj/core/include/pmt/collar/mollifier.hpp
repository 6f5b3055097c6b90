#pragma once

#include <array>

namespace pmt {

// chi: normalized bump exp(-1/(1-t^2)) on (-1, 1).
// sigma: 1/100 on |t| <= 1/4, smooth step down to 0 at |t| = 1/2.
struct MollifierSpec {
  double delta = 0.1;

  static double chi(double t);
  static double dchi(double t);
  static double chi_normalization();

  static double sigma(double t);
  static std::array<double, 3> sigma_jet(double t);  // sigma, sigma', sigma''

  double sigma_delta(double t) const;
  std::array<double, 3> sigma_delta_jet(double t) const;
  // scale of the spike region: |t| <= delta^2/100
  double spike_half_width() const { return delta * delta / 100.0; }
  double band_half_width() const { return 0.5 * delta; }

  void validate() const;
};

double sigma_delta(double t, const MollifierSpec& spec);

// S(x) = f(x) / (f(x) + f(1 - x)), f(x) = exp(-1/x): 0 for x <= 0, 1 for x >= 1; S, S', S''
std::array<double, 3> smooth_step_jet(double x);

// (100/delta^2) chi(100 t / delta^2)
double spike_kernel(double t, const MollifierSpec& spec);

}  // namespace pmt
