#include "pmt/collar/mollifier.hpp"

#include <cmath>

#include "pmt/quadrature.hpp"
#include "pmt/types.hpp"

namespace pmt {

namespace {

double raw_bump(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  return std::exp(-1.0 / (1.0 - t * t));
}

// f(x) = exp(-1/x) and derivatives, zero for x <= 0
std::array<double, 3> f_jet(double x) {
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  const double f = std::exp(-1.0 / x);
  const double x2 = x * x;
  return {f, f / x2, f * (1.0 / (x2 * x2) - 2.0 / (x2 * x))};
}

}  // namespace

std::array<double, 3> smooth_step_jet(double x) {
  if (x <= 0.0) return {0.0, 0.0, 0.0};
  if (x >= 1.0) return {1.0, 0.0, 0.0};
  auto a = f_jet(x);
  auto bb = f_jet(1.0 - x);
  const double b = bb[0], b1 = -bb[1], b2 = bb[2];
  const double D = a[0] + b, D1 = a[1] + b1, D2 = a[2] + b2;
  const double S = a[0] / D;
  const double S1 = a[1] / D - a[0] * D1 / (D * D);
  const double S2 = a[2] / D - 2.0 * a[1] * D1 / (D * D) - a[0] * D2 / (D * D) +
                    2.0 * a[0] * D1 * D1 / (D * D * D);
  return {S, S1, S2};
}

double MollifierSpec::chi_normalization() {
  static const double z = [] {
    const GaussRule& g = gauss_legendre(200);
    double s = 0.0;
    for (size_t i = 0; i < g.x.size(); ++i) s += g.w[i] * raw_bump(g.x[i]);
    return s;
  }();
  return z;
}

double MollifierSpec::chi(double t) { return raw_bump(t) / chi_normalization(); }

double MollifierSpec::dchi(double t) {
  if (std::abs(t) >= 1.0) return 0.0;
  const double q = 1.0 - t * t;
  return -2.0 * t / (q * q) * chi(t);
}

double MollifierSpec::sigma(double t) { return sigma_jet(t)[0]; }

std::array<double, 3> MollifierSpec::sigma_jet(double t) {
  const double a = std::abs(t);
  if (a <= 0.25) return {0.01, 0.0, 0.0};
  if (a >= 0.5) return {0.0, 0.0, 0.0};
  const double sg = t > 0 ? 1.0 : -1.0;
  auto s = smooth_step_jet(4.0 * (0.5 - a));
  return {0.01 * s[0], 0.01 * s[1] * (-4.0 * sg), 0.01 * s[2] * 16.0};
}

double MollifierSpec::sigma_delta(double t) const { return delta * delta * sigma(t / delta); }

std::array<double, 3> MollifierSpec::sigma_delta_jet(double t) const {
  auto s = sigma_jet(t / delta);
  return {delta * delta * s[0], delta * s[1], s[2]};
}

void MollifierSpec::validate() const {
  if (!(delta > 0.0) || !std::isfinite(delta)) throw Error("mollifier delta must be positive");
}

double sigma_delta(double t, const MollifierSpec& spec) { return spec.sigma_delta(t); }

double spike_kernel(double t, const MollifierSpec& spec) {
  const double w = spec.spike_half_width();
  return MollifierSpec::chi(t / w) / w;
}

}  // namespace pmt
