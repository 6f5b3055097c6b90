#include <algorithm>
#include <cmath>

#include "pmt/geometry/curvature.hpp"
#include "pmt/geometry/hypersurface.hpp"
#include "pmt/mass/mass.hpp"

namespace pmt {

MassShift conformal_mass_shift(const MetricField& field, const ConformalFactor& u,
                               const QuadratureSpec& q) {
  return conformal_energy(field, u, EnergyPotential::negative_parts, q);
}

MassShift conformal_energy(const MetricField& field, const ConformalFactor& u, EnergyPotential pot,
                           const QuadratureSpec& q) {
  const bool full = pot == EnergyPotential::full;
  const int n = field.dim();
  const DomainKind kind = field.kind();
  const double R = q.r_outer;
  const double kappa = 4.0 * (n - 1.0) / (n - 2.0);
  MassShift out;

  for (const VolumeNode& v : volume_nodes(field, R, q)) {
    const ScalarJet uj = scalar_jet(u.u, v.x, 1, q.h, kind);
    if (!(uj.v > 0.0)) throw DomainError("conformal factor must be positive");
    const Mat gi = field.eval(v.x).inverse();
    double grad = 0.0;
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) grad += gi(a, b) * uj.d[a] * uj.d[b];
    const double Rs = scalar_curvature(field, v.x, q.h);
    const double P = full ? Rs : std::min(Rs, 0.0);
    out.bulk += v.w_g * (kappa * grad + P * uj.v * uj.v);
  }

  std::vector<std::pair<int, HypersurfaceChart>> faces{{0, HypersurfaceChart::face_x1()}};
  if (kind == DomainKind::quarter_space) faces.push_back({n - 1, HypersurfaceChart::face_xn()});
  for (const auto& [axis, chart] : faces)
    for (const FaceNode& f : face_nodes(field, R, axis, q)) {
      const double H = mean_curvature(field, chart, f.x, q.h);
      if (!full && H >= 0.0) continue;
      const double uv = u.u(f.x);
      if (!(uv > 0.0)) throw DomainError("conformal factor must be positive");
      out.boundary += 2.0 * H * uv * uv * f.w_g;
    }

  // tail of kappa |du|^2 beyond R for u - 1 ~ A r^gamma
  const double e = 2.0 * u.gamma + n - 2.0;
  if (e < 0.0) {
    const auto nodes = sector_sphere_nodes(kind, n, R, q.volume_angular);
    double area = 0.0, mean = 0.0;
    for (const SphereNode& s : nodes) {
      area += s.w;
      mean += s.w * (u.u(s.x) - 1.0);
    }
    mean /= area;
    const double A = mean * std::pow(R, -u.gamma);
    const double frac = area / std::pow(R, n - 1);
    out.tail = kappa * A * A * u.gamma * u.gamma * frac * std::pow(R, e) / (-e);
  }
  out.total = out.bulk + out.boundary + out.tail;
  return out;
}

}  // namespace pmt
