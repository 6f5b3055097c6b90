#include "pmt/doubling/doubling.hpp"

#include <algorithm>
#include <cmath>

#include "pmt/geometry/curvature.hpp"
#include "pmt/geometry/decay.hpp"

namespace pmt {

Mat reflect_tensor(const Mat& m) {
  const int n = static_cast<int>(m.rows());
  Mat r = m;
  for (int i = 0; i < n - 1; ++i) {
    r(n - 1, i) = -m(n - 1, i);
    r(i, n - 1) = -m(i, n - 1);
  }
  return r;
}

Vec reflect_point(const Vec& z) {
  Vec r = z;
  r(z.size() - 1) = -z(z.size() - 1);
  return r;
}

namespace {

MetricPiece reflected_piece(const MetricPiece& p, int n) {
  MetricPiece out;
  out.g = [p](const Vec& z) {
    if (z(z.size() - 1) >= 0.0) return p.g(z);
    return reflect_tensor(p.g(reflect_point(z)));
  };
  if (p.jet) {
    out.jet = [p, n](const Vec& z, int order) {
      if (z(n - 1) >= 0.0) return p.jet(z, order);
      MetricJet j = p.jet(reflect_point(z), order);
      j.v = reflect_tensor(j.v);
      auto sg = [n](int a) { return a == n - 1 ? -1.0 : 1.0; };
      for (int a = 0; a < static_cast<int>(j.d.size()); ++a) j.d[a] = sg(a) * reflect_tensor(j.d[a]);
      if (!j.dd.empty())
        for (int a = 0; a < n; ++a)
          for (int b = 0; b < n; ++b) j.d2(a, b) = (sg(a) * sg(b)) * reflect_tensor(j.d2(a, b));
      return j;
    };
  }
  return out;
}

MetricField doubled_field(const MetricField& g) {
  const int n = g.dim();
  const std::string name = g.name() + "_doubled";
  if (g.mode() == FieldMode::two_piece)
    return MetricField::two_piece(n, DomainKind::half_space, reflected_piece(g.piece(Side::minus), n),
                                  reflected_piece(g.piece(Side::plus), n), g.interface_radius(),
                                  g.tau(), g.C_decay(), g.match_tol(), name);
  if (g.mode() == FieldMode::sampled)
    return MetricField::sampled(n, DomainKind::half_space, reflected_piece(g.piece(Side::minus), n),
                                g.tau(), g.C_decay(), name);
  return MetricField::analytic(n, DomainKind::half_space, reflected_piece(g.piece(Side::minus), n),
                               g.tau(), g.C_decay(), name);
}

double max_abs(const Mat& m) { return m.cwiseAbs().maxCoeff(); }

// geodesic from y with initial velocity v, RK4 over parameter s
void shoot(const MetricField& g, Vec& x, Vec& v, double s, double h) {
  if (s == 0.0) return;
  const int steps = 8;
  const double ds = s / steps;
  const int n = g.dim();
  auto acc = [&](const Vec& p, const Vec& w) {
    const Christoffel G = cartesian_christoffel(g, p, h);
    Vec a = Vec::Zero(n);
    for (int i = 0; i < n; ++i)
      for (int b = 0; b < n; ++b)
        for (int c = 0; c < n; ++c) a(i) -= G(i, b, c) * w(b) * w(c);
    return a;
  };
  for (int k = 0; k < steps; ++k) {
    const Vec k1x = v, k1v = acc(x, v);
    const Vec k2x = v + 0.5 * ds * k1v, k2v = acc(x + 0.5 * ds * k1x, k2x);
    const Vec k3x = v + 0.5 * ds * k2v, k3v = acc(x + 0.5 * ds * k2x, k3x);
    const Vec k4x = v + ds * k3v, k4v = acc(x + ds * k3x, k4x);
    x += ds / 6.0 * (k1x + 2.0 * k2x + 2.0 * k3x + k4x);
    v += ds / 6.0 * (k1v + 2.0 * k2v + 2.0 * k3v + k4v);
  }
}

// Fermi chart of {x_n = 0}: Phi(y, s) = exp_y(s nu(y)), nu the unit normal into x_n > 0
struct FermiPoint {
  Vec x;
  Vec velocity;
};

FermiPoint fermi_point(const MetricField& g, const Vec& y, double s, double h) {
  const int n = g.dim();
  const Mat gi = g.eval(y).inverse();
  Vec v = gi.col(n - 1) / std::sqrt(gi(n - 1, n - 1));
  Vec x = y;
  shoot(g, x, v, s, h);
  return {x, v};
}

Mat fermi_metric(const MetricField& g, const Vec& y, double s, double h) {
  const int n = g.dim();
  const double e = 1e-4;
  Mat J(n, n);
  for (int i = 0; i < n - 1; ++i) {
    Vec yp = y, ym = y;
    yp(i) += e;
    ym(i) -= e;
    J.col(i) = (fermi_point(g, yp, s, h).x - fermi_point(g, ym, s, h).x) / (2.0 * e);
  }
  const FermiPoint p = fermi_point(g, y, s, h);
  J.col(n - 1) = p.velocity;
  return J.transpose() * g.eval_raw(p.x) * J;
}

}  // namespace

std::vector<Vec> seam_probes(int n, double K_radius, double r_outer, int count) {
  std::vector<Vec> out;
  const auto dirs = sector_directions(DomainKind::half_space, n - 1, 4 * count);
  int k = 0;
  for (const Vec& d : dirs) {
    if (static_cast<int>(out.size()) >= count) break;
    if (d(0) < 0.2) continue;
    const double f = (k % 5 + 0.5) / 5.0;
    const double r = K_radius + (0.8 * r_outer - K_radius) * f;
    Vec x = Vec::Zero(n);
    for (int a = 0; a < n - 1; ++a) x(a) = r * d(a);
    out.push_back(x);
    ++k;
  }
  return out;
}

DoubledConfig double_manifold(const MetricField& field, const DoublingOptions& opt) {
  if (field.kind() != DomainKind::quarter_space) throw DomainError("doubling needs a quarter-space field");
  const int n = field.dim();
  DoubledConfig c;
  c.base = field;
  c.K_radius = opt.K_radius;
  const HypersurfaceChart face = HypersurfaceChart::face_xn();
  for (const Vec& x : seam_probes(n, opt.K_radius, opt.r_outer, opt.probes))
    c.max_second_ff = std::max(c.max_second_ff, max_abs(second_fundamental_form(field, face, x, opt.h)));
  if (opt.require_totally_geodesic && c.max_second_ff > opt.tol)
    throw DomainError("face x_n = 0 is not totally geodesic outside K; flatten first");
  c.doubled = doubled_field(field);
  return c;
}

C2Report check_c2_across_interface(const DoubledConfig& config, const std::vector<Vec>& probes,
                                   double h, double tol) {
  const MetricField& g = config.base;
  const MetricField& d = config.doubled;
  const int n = g.dim();
  C2Report r;
  r.tol = tol;
  const HypersurfaceChart face = HypersurfaceChart::face_xn();
  for (const Vec& x : probes) {
    if (!(x.norm() > config.K_radius)) throw DomainError("C2 probes must lie outside K");
    if (std::abs(x(n - 1)) > 0.0) throw DomainError("C2 probes must lie on x_n = 0");
    ++r.probes;
    Mat G[3];
    for (int k = 0; k < 3; ++k) {
      G[k] = fermi_metric(g, x, k * h, h);
      for (int a = 0; a < n; ++a)
        r.max_g_an_defect =
            std::max(r.max_g_an_defect, std::abs(G[k](a, n - 1) - (a == n - 1 ? 1.0 : 0.0)));
    }
    const Mat ds = (-3.0 * G[0] + 4.0 * G[1] - G[2]) / (2.0 * h);
    r.max_g_ij_n = std::max(r.max_g_ij_n, max_abs(ds.topLeftCorner(n - 1, n - 1)));
    r.max_second_ff = std::max(r.max_second_ff, max_abs(second_fundamental_form(g, face, x, h)));

    const Mat gx = d.eval(x);
    for (int i = 0; i < n - 1; ++i) r.cartesian_g_in = std::max(r.cartesian_g_in, std::abs(gx(i, n - 1)));
    const Vec e = unit(n, n - 1);
    const Mat c = (d.eval_raw(Vec(x + h * e)) - d.eval_raw(Vec(x - h * e))) / (2.0 * h);
    r.cartesian_d_n = std::max(r.cartesian_d_n, max_abs(c.topLeftCorner(n - 1, n - 1)));
    const Mat up = (-3.0 * d.eval_raw(x) + 4.0 * d.eval_raw(Vec(x + h * e)) - d.eval_raw(Vec(x + 2.0 * h * e))) / (2.0 * h);
    const Mat dn = (3.0 * d.eval_raw(x) - 4.0 * d.eval_raw(Vec(x - h * e)) + d.eval_raw(Vec(x - 2.0 * h * e))) / (2.0 * h);
    r.derivative_jump = std::max(r.derivative_jump, max_abs(up - dn));
  }
  r.pass = r.max_g_an_defect <= tol && r.max_g_ij_n <= tol;
  return r;
}

SeamCurvature seam_mean_curvatures(const DoubledConfig& config, const Vec& x, double h) {
  const int n = config.base.dim();
  SeamCurvature s;
  s.H_sigma2 = mean_curvature(config.base, HypersurfaceChart::face_xn(), x, h);
  auto f = [&](const Vec& y) { return config.doubled.eval_raw(y); };
  FdOptions opt;
  opt.h = h;
  for (Stencil k : {Stencil::forward, Stencil::backward}) {
    std::vector<Stencil> kinds(n, Stencil::central);
    kinds[n - 1] = k;
    const MetricJet j = fd_jet<Mat>(f, x, 1, kinds, opt);
    const double H = coordinate_hypersurface(j, n - 1, -1.0).H;
    (k == Stencil::forward ? s.from_base : s.from_mirror) = H;
  }
  return s;
}

DoubledMass doubled_mass_relation(const DoubledConfig& config, const std::vector<double>& radii,
                                  const QuadratureSpec& q, double face_tol) {
  DoubledMass out;
  for (double rho : radii) {
    MassSample c = corner_mass_at_radius(config.base, rho, q);
    MassSample d = half_space_mass_at_radius(config.doubled, rho, q);
    const double xn_face = c.boundary_terms.size() > 1 ? std::abs(c.boundary_terms[1]) : 0.0;
    out.max_face_term = std::max(out.max_face_term, xn_face);
    if (xn_face > face_tol * std::max(1.0, std::abs(c.total)))
      throw DomainError("face terms do not vanish; the base is not conformally flat here");
    out.max_sample_defect = std::max(
        out.max_sample_defect, std::abs(d.total - 2.0 * c.total) / std::max(1.0, std::abs(c.total)));
    out.corner.push_back(std::move(c));
    out.doubled.push_back(std::move(d));
  }
  const int n = config.base.dim();
  const double tau = config.base.tau();
  out.m_corner = extrapolate_mass(out.corner, ExtrapolationModel::richardson, tau, n).m_infinity;
  out.m_doubled = extrapolate_mass(out.doubled, ExtrapolationModel::richardson, tau, n).m_infinity;
  if (out.m_corner != 0.0)
    out.ratio = out.m_doubled / out.m_corner;
  else
    out.ratio = out.m_doubled == 0.0 ? 2.0 : std::copysign(INFINITY, out.m_doubled);
  return out;
}

double paired_node_defect(int n, double rho, const QuadratureSpec& q) {
  const auto nodes = sphere_nodes(n, rho, q.angular_nodes(rho), true, true);
  const size_t half = nodes.size() / 2;
  double worst = 0.0;
  for (size_t i = 0; i < half; ++i) {
    const SphereNode& a = nodes[i];
    const SphereNode& b = nodes[half + i];
    if (a.mirrored || !b.mirrored) return INFINITY;
    worst = std::max(worst, (reflect_point(a.x) - b.x).cwiseAbs().maxCoeff());
    worst = std::max(worst, std::abs(a.w - b.w));
  }
  return worst;
}

double orthogonality_defect(const MetricField& field, double r0, int probes) {
  const int n = field.dim();
  double worst = 0.0;
  for (const Vec& d : sector_directions(DomainKind::half_space, n - 1, probes)) {
    Vec x = Vec::Zero(n);
    for (int a = 1; a < n; ++a) x(a) = r0 * d(a - 1);
    if (field.kind() == DomainKind::quarter_space) x(n - 1) = std::abs(x(n - 1));
    const Mat gi = field.eval(x).inverse();
    const Vec dr = x / r0;
    const double nr = std::sqrt(dr.dot(gi * dr));
    // g(nu, eta) with nu = g^{-1} dr / |dr|, eta = -g^{-1} e_1 / sqrt(g^{11})
    const double v = -(gi.row(0).dot(dr)) / (nr * std::sqrt(gi(0, 0)));
    worst = std::max(worst, std::abs(v));
  }
  return worst;
}

InterfaceExtension extend_interface(const MetricField& doubled, double r0, double K_radius, double h) {
  if (doubled.kind() != DomainKind::half_space) throw DomainError("interface extension needs the doubled half space");
  if (!(r0 > K_radius)) throw DomainError("interface radius inside K");
  Domain dom;
  dom.kind = DomainKind::half_space;
  dom.n = doubled.dim();
  dom.r_inner = r0;
  dom.r_outer = std::max(16.0, 4.0 * r0);
  dom.h = h;
  CollarOptions co;
  co.epsilon = std::min(1.0, 0.25 * (r0 - K_radius));
  InterfaceExtension e;
  e.collar = build_collar_field(doubled, dom, co);
  e.chart = HypersurfaceChart::interface_level(e.collar, 0.0);
  e.orthogonality_defect = orthogonality_defect(doubled, r0);
  return e;
}

}  // namespace pmt
