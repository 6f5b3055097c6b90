#include "pmt/geometry/decay.hpp"

#include <cmath>

#include "pmt/geometry/curvature.hpp"

namespace pmt {

std::vector<Vec> sector_directions(DomainKind kind, int n, int count) {
  // generalized Fibonacci-like lattice folded into the sector
  std::vector<Vec> out;
  const double golden = (1.0 + std::sqrt(5.0)) / 2.0;
  for (int i = 0; i < count; ++i) {
    Vec v(n);
    double z = 1.0 - (2.0 * i + 1.0) / count;
    double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    double phi = 2.0 * M_PI * i / golden;
    v(0) = z;
    v(1) = rho * std::cos(phi);
    for (int a = 2; a < n; ++a) v(a) = rho * std::sin(phi + a * 0.7) / std::sqrt(n - 2.0);
    v /= v.norm();
    v(0) = std::abs(v(0));
    if (kind == DomainKind::quarter_space) v(n - 1) = std::abs(v(n - 1));
    out.push_back(v);
  }
  return out;
}

DecayProfile decay_profile(const MetricField& field, const std::vector<double>& radii, double h,
                           int directions) {
  if (radii.size() < 3) throw Error("decay profile needs at least 3 radii");
  for (size_t i = 1; i < radii.size(); ++i)
    if (!(radii[i] > radii[i - 1])) throw Error("radii must increase");
  const int n = field.dim();
  const auto dirs = sector_directions(field.kind(), n, directions);
  DerivativePolicy pol;
  pol.h = h;
  DecayProfile out;
  out.radii = radii;
  for (double r : radii) {
    double worst = 0.0;
    for (const Vec& d : dirs) {
      const MetricJet j = metric_jet(field, Vec(r * d), 2, Side::automatic, pol);
      double v0 = (j.v - Mat::Identity(n, n)).cwiseAbs().maxCoeff();
      double v1 = 0.0, v2 = 0.0;
      for (int a = 0; a < n; ++a) v1 = std::max(v1, j.d[a].cwiseAbs().maxCoeff());
      for (const Mat& m : j.dd) v2 = std::max(v2, m.cwiseAbs().maxCoeff());
      worst = std::max(worst, v0 + r * v1 + r * r * v2);
    }
    out.profile.push_back(worst);
  }
  std::vector<double> lx, ly;
  for (size_t i = 0; i < radii.size(); ++i)
    if (out.profile[i] > 1e-14) {
      lx.push_back(std::log(radii[i]));
      ly.push_back(std::log(out.profile[i]));
    }
  if (lx.size() >= 2 && out.profile.back() > 1e-14) {
    const double m = static_cast<double>(lx.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < lx.size(); ++i) {
      sx += lx[i];
      sy += ly[i];
      sxx += lx[i] * lx[i];
      sxy += lx[i] * ly[i];
    }
    const double slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
    out.tau_hat = -slope;
    out.C_hat = std::exp((sy - slope * sx) / m);
  }
  out.violation = out.tau_hat < field.tau() - 0.2;
  return out;
}

}  // namespace pmt
