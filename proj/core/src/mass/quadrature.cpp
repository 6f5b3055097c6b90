#include "pmt/mass/quadrature.hpp"

#include <algorithm>
#include <cmath>

#include "pmt/geometry/adapted.hpp"
#include "pmt/quadrature.hpp"

namespace pmt {

int QuadratureSpec::angular_nodes(double rho) const {
  int N = static_cast<int>(std::ceil(node_scale * rho / h));
  return std::clamp(N, min_nodes, max_nodes);
}

std::vector<SphereNode> sphere_nodes(int m, double rho, int N, bool first_nonneg, bool mirror) {
  std::vector<SphereNode> out;
  if (m == 2) {
    const GaussRule g = gauss_legendre(first_nonneg ? N : 2 * N, 0.0, first_nonneg ? M_PI / 2 : M_PI);
    for (size_t i = 0; i < g.x.size(); ++i) {
      SphereNode s;
      s.x = rho * make_vec({std::cos(g.x[i]), std::sin(g.x[i])});
      s.w = rho * g.w[i];
      out.push_back(s);
    }
  } else {
    std::vector<GaussRule> rules;
    rules.push_back(gauss_legendre(first_nonneg ? N : 2 * N, 0.0, first_nonneg ? M_PI / 2 : M_PI));
    for (int k = 2; k <= m - 2; ++k) rules.push_back(gauss_legendre(2 * N, 0.0, M_PI));
    rules.push_back(gauss_legendre(2 * N, 0.0, M_PI));  // azimuth, last coordinate >= 0
    const int na = static_cast<int>(rules.size());
    std::vector<int> idx(na, 0);
    const double rp = std::pow(rho, m - 1);
    while (true) {
      Vec y(m);
      double w = rp, prod = 1.0;
      for (int k = 0; k < na - 1; ++k) {
        const double a = rules[k].x[idx[k]];
        y(k) = prod * std::cos(a);
        w *= rules[k].w[idx[k]] * std::pow(std::sin(a), m - 2 - k);
        prod *= std::sin(a);
      }
      const double phi = rules[na - 1].x[idx[na - 1]];
      w *= rules[na - 1].w[idx[na - 1]];
      y(m - 2) = prod * std::cos(phi);
      y(m - 1) = prod * std::sin(phi);
      SphereNode s;
      s.x = rho * y;
      s.w = w;
      out.push_back(s);
      int k = na - 1;
      while (k >= 0 && ++idx[k] == static_cast<int>(rules[k].x.size())) idx[k--] = 0;
      if (k < 0) break;
    }
  }
  if (mirror) {
    const size_t base = out.size();
    for (size_t i = 0; i < base; ++i) {
      SphereNode s = out[i];
      s.x(m - 1) = -s.x(m - 1);
      s.mirrored = true;
      out.push_back(s);
    }
  }
  return out;
}

std::vector<SphereNode> sector_sphere_nodes(DomainKind kind, int n, double rho, int N) {
  return sphere_nodes(n, rho, N, true, kind == DomainKind::half_space);
}

namespace {

struct Band {
  std::shared_ptr<const AdaptedMetric> am;
  const WarpProfile* warp = nullptr;
  double r_lo = 0.0, r_hi = 0.0;
};

Band band_of(const MetricField& field) {
  Band b;
  b.am = field.adapted();
  if (b.am) b.warp = b.am->band_warp();
  if (b.warp) {
    const double hw = b.am->band_half_width();
    b.r_lo = b.warp->r_of_t(-hw, Side::minus);
    b.r_hi = b.warp->r_of_t(hw, Side::plus);
  }
  return b;
}

std::vector<GaussRule> band_rules(const AdaptedMetric& am, int m) {
  const double d = 2.0 * am.band_half_width(), w = am.spike_half_width();
  const double br[] = {-0.5 * d, -0.25 * d, -w, w, 0.25 * d, 0.5 * d};
  std::vector<GaussRule> out;
  for (int i = 0; i < 5; ++i) out.push_back(gauss_legendre(m, br[i], br[i + 1]));
  return out;
}

Mat drop_axis(const Mat& g, int axis) {
  const int n = static_cast<int>(g.rows());
  Mat f(n - 1, n - 1);
  for (int i = 0, ii = 0; i < n; ++i) {
    if (i == axis) continue;
    for (int j = 0, jj = 0; j < n; ++j) {
      if (j == axis) continue;
      f(ii, jj++) = g(i, j);
    }
    ++ii;
  }
  return f;
}

}  // namespace

std::vector<double> radial_breaks(const MetricField& field, double R) {
  const Band b = band_of(field);
  std::vector<double> br{0.0};
  if (b.warp) {
    br.push_back(b.r_lo);
    br.push_back(b.r_hi);
  } else if (field.mode() == FieldMode::two_piece) {
    br.push_back(field.interface_radius());
  } else if (b.am) {
    br.push_back(b.am->r0());
  }
  if (br.back() >= R) throw DomainError("integration radius inside the interface region");
  double r = br.back() > 0.0 ? br.back() : R / 16.0;
  if (br.back() == 0.0) br.push_back(r);
  while (2.0 * r < R) {
    r *= 2.0;
    br.push_back(r);
  }
  br.push_back(R);
  return br;
}

std::vector<VolumeNode> volume_nodes(const MetricField& field, double R, const QuadratureSpec& q) {
  const int n = field.dim();
  const Band b = band_of(field);
  const std::vector<double> br = radial_breaks(field, R);
  const auto unit = sector_sphere_nodes(field.kind(), n, 1.0, q.volume_angular);
  std::vector<VolumeNode> out;
  for (size_t k = 0; k + 1 < br.size(); ++k) {
    if (b.warp && br[k] == b.r_lo) continue;  // band handled below
    const GaussRule g = gauss_legendre(q.radial_nodes, br[k], br[k + 1]);
    for (size_t i = 0; i < g.x.size(); ++i) {
      const double r = g.x[i];
      const double wr = g.w[i] * std::pow(r, n - 1);
      for (const SphereNode& s : unit) {
        VolumeNode v;
        v.x = r * s.x;
        v.w_euclid = wr * s.w;
        v.w_g = v.w_euclid * std::sqrt(field.eval_raw(v.x).determinant());
        out.push_back(v);
      }
    }
  }
  if (b.warp) {
    const double r0 = b.am->r0();
    const auto base = sector_sphere_nodes(field.kind(), n, r0, q.volume_angular);
    for (const GaussRule& g : band_rules(*b.am, q.band_nodes))
      for (size_t i = 0; i < g.x.size(); ++i) {
        const double t = g.x[i];
        const double r = b.warp->r_of_t(t, Side::automatic);
        const double je = std::pow(r / r0, n - 1) * b.warp->dr_dt(t, Side::automatic);
        for (const SphereNode& s : base) {
          VolumeNode v;
          v.x = (r / r0) * s.x;
          v.w_euclid = s.w * g.w[i] * je;
          v.w_g = s.w * g.w[i] * b.am->volume_factor(s.x, t);
          v.band = true;
          out.push_back(v);
        }
      }
  }
  return out;
}

std::vector<FaceNode> face_nodes(const MetricField& field, double R, int axis,
                                 const QuadratureSpec& q) {
  const int n = field.dim();
  if (axis != 0 && !(axis == n - 1 && field.kind() == DomainKind::quarter_space))
    throw DomainError("no such boundary face");
  const Band b = band_of(field);
  const std::vector<double> br = radial_breaks(field, R);
  // unit sphere of the face in the remaining coordinates
  std::vector<SphereNode> unit;
  if (axis == 0)
    unit = sphere_nodes(n - 1, 1.0, q.volume_angular, false, field.kind() == DomainKind::half_space);
  else
    unit = sphere_nodes(n - 1, 1.0, q.volume_angular, true, true);
  auto embed = [&](const Vec& y) {
    Vec x = Vec::Zero(n);
    for (int i = 0, j = 0; i < n; ++i)
      if (i != axis) x(i) = y(j++);
    return x;
  };
  std::vector<FaceNode> out;
  for (size_t k = 0; k + 1 < br.size(); ++k) {
    if (b.warp && br[k] == b.r_lo) continue;
    const GaussRule g = gauss_legendre(q.radial_nodes, br[k], br[k + 1]);
    for (size_t i = 0; i < g.x.size(); ++i) {
      const double r = g.x[i];
      const double wr = g.w[i] * std::pow(r, n - 2);
      for (const SphereNode& s : unit) {
        FaceNode f;
        f.x = embed(r * s.x);
        f.axis = axis;
        f.w_euclid = wr * s.w;
        f.w_g = f.w_euclid * std::sqrt(drop_axis(field.eval_raw(f.x), axis).determinant());
        out.push_back(f);
      }
    }
  }
  if (b.warp) {
    const double r0 = b.am->r0();
    for (const GaussRule& g : band_rules(*b.am, q.band_nodes))
      for (size_t i = 0; i < g.x.size(); ++i) {
        const double t = g.x[i];
        const double r = b.warp->r_of_t(t, Side::automatic);
        const double je = std::pow(r / r0, n - 2) * b.warp->dr_dt(t, Side::automatic);
        for (const SphereNode& s : unit) {
          FaceNode f;
          f.x = embed(r * s.x);
          f.axis = axis;
          const double wl = s.w * std::pow(r0, n - 2);
          f.w_euclid = wl * g.w[i] * je;
          f.w_g = wl * g.w[i] * b.am->face_factor(embed(r0 * s.x), t);
          f.band = true;
          out.push_back(f);
        }
      }
  }
  return out;
}

}  // namespace pmt
