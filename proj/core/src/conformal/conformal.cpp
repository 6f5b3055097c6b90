#include "pmt/conformal/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <unordered_map>

#include "pmt/collar/mollifier.hpp"
#include "pmt/geometry/curvature.hpp"
#include "pmt/geometry/decay.hpp"

namespace pmt {

namespace {

double conformal_power(int n) { return 4.0 / (n - 2.0); }

ScalarField memoized(std::function<double(const Vec&)> f) {
  auto cache = std::make_shared<std::unordered_map<std::string, double>>();
  ScalarField s;
  s.f = [cache, f = std::move(f)](const Vec& x) {
    std::string key(reinterpret_cast<const char*>(x.data()), sizeof(double) * x.size());
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    const double v = f(x);
    cache->emplace(std::move(key), v);
    return v;
  };
  return s;
}

ScalarField scaled(const ScalarField& s, double c) {
  ScalarField o;
  o.f = [s, c](const Vec& x) { return c * s(x); };
  return o;
}

HypersurfaceChart face_chart(int axis) {
  return axis == 0 ? HypersurfaceChart::face_x1() : HypersurfaceChart::face_xn();
}

std::vector<int> face_axes(const MetricField& f) {
  std::vector<int> a{0};
  if (f.kind() == DomainKind::quarter_space) a.push_back(f.dim() - 1);
  return a;
}

template <class Piece>
MetricField rebuild(const MetricField& g, Piece&& make, double tau, const std::string& name) {
  const int n = g.dim();
  if (g.mode() == FieldMode::two_piece)
    return MetricField::two_piece(n, g.kind(), make(g.piece(Side::minus)), make(g.piece(Side::plus)),
                                  g.interface_radius(), tau, g.C_decay(), g.match_tol(), name);
  if (g.mode() == FieldMode::sampled)
    return MetricField::sampled(n, g.kind(), make(g.piece(Side::minus)), tau, g.C_decay(), name);
  return MetricField::analytic(n, g.kind(), make(g.piece(Side::minus)), tau, g.C_decay(), name);
}

MetricJet scale_jet(const ScalarJet& s, const MetricJet& G) {
  const int n = G.n;
  MetricJet j;
  j.n = n;
  j.order = std::min(s.order, G.order);
  j.v = s.v * G.v;
  if (j.order < 1) return j;
  j.d.resize(n);
  for (int a = 0; a < n; ++a) j.d[a] = s.d[a] * G.v + s.v * G.d[a];
  if (j.order < 2) return j;
  j.dd.resize(n * n);
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      j.d2(a, b) = s.d2(a, b) * G.v + s.d[a] * G.d[b] + s.d[b] * G.d[a] + s.v * G.d2(a, b);
  return j;
}

}  // namespace

// ---------------------------------------------------------------------------

ConformalAdapted::ConformalAdapted(std::shared_ptr<const AdaptedMetric> base, ScalarField u)
    : base_(std::move(base)), u_(std::move(u)) {
  if (!base_) throw GeometryError("conformal collar description needs a base");
}

double ConformalAdapted::phi(const Vec& y) const {
  const double uv = u_(y);
  if (!(uv > 0.0)) throw DomainError("conformal factor must be positive");
  return std::pow(uv, conformal_power(dim()));
}

MetricJet ConformalAdapted::adapted_jet(const Vec& x, double t, int order, double h,
                                        Side side) const {
  const int n = dim();
  const MetricJet G = base_->adapted_jet(x, t, order, h, side);
  const SigmaChart ch = make_sigma_chart(x, r0());
  auto F = [&](const Vec& q) { return phi(base_->ambient(ch.point(q.head(n - 1)), q(n - 1))); };
  Vec q = Vec::Zero(n);
  q(n - 1) = t;
  FdOptions opt;
  opt.h = h;
  const ScalarJet P = fd_jet<double>(F, q, order, adapted_stencils(ch, order), opt);
  return scale_jet(P, G);
}

double ConformalAdapted::volume_factor(const Vec& x, double t) const {
  return std::pow(phi(base_->ambient(x, t)), 0.5 * dim()) * base_->volume_factor(x, t);
}

double ConformalAdapted::face_factor(const Vec& x, double t) const {
  return std::pow(phi(base_->ambient(x, t)), 0.5 * (dim() - 1)) * base_->face_factor(x, t);
}

MetricField conformal_field(const MetricField& g, const ConformalFactor& u, const std::string& name) {
  const int n = g.dim();
  const double tau = std::min(g.tau(), -u.gamma);
  auto make = [&](const MetricPiece& p) { return conformal_piece(n, u.u, p); };
  MetricField out = rebuild(g, make, tau, name.empty() ? g.name() + "_conformal" : name);
  if (g.adapted()) out = out.with_adapted(std::make_shared<ConformalAdapted>(g.adapted(), u.u));
  return out;
}

double conformal_scalar(const MetricField& field, const ConformalFactor& u, const Vec& x, double h) {
  const int n = field.dim();
  const double c = conformal_constant(n);
  const ScalarJet uj = scalar_jet(u.u, x, 2, h, field.kind());
  if (!(uj.v > 0.0)) throw DomainError("conformal factor must be positive");
  const double lap = laplacian(field, uj, x, h);
  const double R = scalar_curvature(field, x, h);
  return std::pow(uj.v, -(n + 2.0) / (n - 2.0)) * (-lap + c * R * uj.v) / c;
}

double face_normal_derivative(const MetricField& field, const ScalarJet& u,
                              const HypersurfaceChart& surf, const Vec& x) {
  const int n = field.dim();
  if (surf.kind == SurfaceKind::interface_sphere_t)
    throw GeometryError("normal derivative is implemented for boundary faces");
  const int axis = surf.kind == SurfaceKind::boundary_face_x1 ? 0 : n - 1;
  const Mat gi = field.eval(x).inverse();
  double dn = 0.0;
  for (int a = 0; a < n; ++a) dn -= gi(axis, a) * u.d[a];
  dn /= std::sqrt(gi(axis, axis));
  return surf.orientation == NormalOrientation::outward_domain ? dn : -dn;
}

MeanCurvaturePair conformal_mean_curvature(const MetricField& field, const ConformalFactor& u,
                                           const HypersurfaceChart& surf, const Vec& x, double h) {
  const int n = field.dim();
  const double c = conformal_constant(n);
  const ScalarJet uj = scalar_jet(u.u, x, 1, h, field.kind());
  if (!(uj.v > 0.0)) throw DomainError("conformal factor must be positive");
  const double H = mean_curvature(field, surf, x, h);
  const double bracket = face_normal_derivative(field, uj, surf, x) + 2.0 * c * H * uj.v;
  const double s = std::pow(uj.v, -n / (n - 2.0));
  return {s * bracket / (2.0 * c), s * bracket / ((n - 1.0) * c)};
}

// ---------------------------------------------------------------------------

DiscretizationCalibration calibrate_discretization(const MetricField& metric, const BvpOptions& opt,
                                                   double h) {
  const int n = metric.dim();
  const double L = opt.L;
  Vec c = Vec::Zero(n);
  c(0) = 0.1 * L;
  for (int a = 1; a < n; ++a) c(a) = -0.05 * L;
  if (metric.kind() == DomainKind::quarter_space) c(n - 1) = 0.1 * L;
  const double s2 = std::pow(0.3 * L, 2);
  ScalarField ws;
  ws.f = [c, s2](const Vec& x) { return std::exp(-(x - c).squaredNorm() / s2); };
  ws.jet = [c, s2, n](const Vec& x, int order) {
    const Vec d = x - c;
    ScalarJet j;
    j.n = n;
    j.order = order;
    j.v = std::exp(-d.squaredNorm() / s2);
    if (order < 1) return j;
    j.d.resize(n);
    for (int a = 0; a < n; ++a) j.d[a] = -2.0 * d(a) / s2 * j.v;
    if (order < 2) return j;
    j.dd.resize(n * n);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        j.d2(a, b) = (4.0 * d(a) * d(b) / (s2 * s2) - (a == b ? 2.0 / s2 : 0.0)) * j.v;
    return j;
  };
  const ScalarField zero = ScalarField::constant(0.0);

  RobinProblem p;
  p.metric = metric;
  p.f = memoized([metric, ws, zero, h](const Vec& x) {
    return continuous_operator(metric, ws, zero, x, h);
  });
  auto face_data = [&](int axis) {
    return memoized([metric, ws, zero, axis, h](const Vec& x) {
      return continuous_boundary_operator(metric, ws, zero, axis, x, h);
    });
  };
  p.f1 = face_data(0);
  if (metric.kind() == DomainKind::quarter_space) p.f2 = face_data(n - 1);
  p.dirichlet = ws;
  p.band_loads = false;
  p.check_signs = false;
  const BvpSolution sol = solve_robin_bvp(p, opt);

  DiscretizationCalibration cal;
  const Grid& g = sol.w->grid();
  double scale = 0.0;
  for (int i = 0; i < g.size(); ++i) {
    const Vec x = g.point(i);
    const double exact = ws(x);
    scale = std::max(scale, std::abs(exact));
    cal.solution_error = std::max(cal.solution_error, std::abs(sol.w->values()[i] - exact));
    if (g.is_outer(i)) continue;
    ++cal.nodes;
    const ScalarJet wj = sol.w->jet(x, 2);
    cal.operator_error = std::max(cal.operator_error, std::abs(-laplacian(metric, wj, x, h) - p.f(x)));
    for (int axis : face_axes(metric)) {
      if (!g.on_face(i, axis)) continue;
      const double dn = face_normal_derivative(metric, wj, face_chart(axis), x);
      const double fk = axis == 0 ? p.f1(x) : p.f2(x);
      cal.boundary_error = std::max(cal.boundary_error, std::abs(dn - fk));
    }
  }
  cal.scale = scale > 0.0 ? scale : 1.0;
  return cal;
}

CurvatureCertificates curvature_certificates(const MetricField& base, const ConformalFactor& u,
                                             const Grid& grid, const DiscretizationCalibration& cal,
                                             double outer_radius, const CertificateOptions& opt) {
  const int n = base.dim();
  const double c = conformal_constant(n);
  CurvatureCertificates out;
  out.outer_radius = outer_radius;
  const double inf = std::numeric_limits<double>::infinity();
  out.min_R = inf;
  out.min_H_trace = inf;
  out.min_H_displayed = inf;
  out.min_R_excluded = inf;

  double sup_w = 0.0;
  for (int i = 0; i < grid.size(); ++i) sup_w = std::max(sup_w, std::abs(u.u(grid.point(i)) - 1.0));
  out.tol_R = opt.tol_factor * cal.relative_operator_error() * sup_w / c;
  out.tol_H = opt.tol_factor * cal.relative_boundary_error() * sup_w / (2.0 * c);

  double r0 = 0.0, reach = -1.0;
  const double margin = opt.band_margin_cells * grid.spacing();
  if (const auto& a = base.adapted()) {
    r0 = a->r0();
    reach = 2.0 * a->band_half_width() + margin;
  } else if (base.mode() == FieldMode::two_piece) {
    r0 = base.interface_radius();
    reach = margin;
  }
  auto excluded = [&](const Vec& x) { return reach >= 0.0 && std::abs(x.norm() - r0) <= reach; };

  for (int i = 0; i < grid.size(); ++i) {
    if (grid.is_outer(i)) continue;
    const Vec x = grid.point(i);
    const double R = conformal_scalar(base, u, x, opt.h);
    if (excluded(x)) {
      ++out.excluded_points;
      out.max_abs_R_excluded = std::max(out.max_abs_R_excluded, std::abs(R));
      out.min_R_excluded = std::min(out.min_R_excluded, R);
      continue;
    }
    ++out.volume_points;
    out.min_R = std::min(out.min_R, R);
    out.max_abs_R = std::max(out.max_abs_R, std::abs(R));
    if (x.norm() > outer_radius) out.max_abs_R_outer = std::max(out.max_abs_R_outer, std::abs(R));
    for (int axis : face_axes(base)) {
      if (!grid.on_face(i, axis)) continue;
      const MeanCurvaturePair H = conformal_mean_curvature(base, u, face_chart(axis), x, opt.h);
      ++out.face_points;
      out.min_H_trace = std::min(out.min_H_trace, H.trace);
      out.min_H_displayed = std::min(out.min_H_displayed, H.displayed);
      out.max_abs_H = std::max(out.max_abs_H, std::abs(H.trace));
      if (x.norm() > outer_radius)
        out.max_abs_H_outer = std::max(out.max_abs_H_outer, std::abs(H.trace));
    }
  }
  if (out.volume_points == 0) out.min_R = 0.0;
  if (out.face_points == 0) out.min_H_trace = out.min_H_displayed = 0.0;
  if (out.excluded_points == 0) out.min_R_excluded = 0.0;
  const double disp = 2.0 / (n - 1.0);
  out.sign_pass = out.min_R >= -out.tol_R && out.min_H_trace >= -out.tol_H &&
                  out.min_H_displayed >= -disp * out.tol_H;
  if (outer_radius > 0.0)
    out.vanish_pass = out.max_abs_R_outer <= out.tol_R && out.max_abs_H_outer <= out.tol_H;
  else
    out.vanish_pass = out.max_abs_R <= out.tol_R && out.max_abs_H <= out.tol_H;
  return out;
}

namespace {

BvpOptions grid_options(const Grid& g) {
  BvpOptions o;
  o.L = g.half_width();
  o.hg = g.spacing();
  return o;
}

ConformalFactor factor_of(const BvpSolution& s, int n) {
  if (!s.w) throw SolveError("solution carries no grid function");
  if (!(1.0 + s.min_value > 0.0)) throw SolveError("conformal factor 1 + w is not positive");
  return {s.field(1.0), 2.0 - n};
}

}  // namespace

CorrectedMetric corrected_metric(const MetricField& field_delta, const BvpSolution& w,
                                 const CertificateOptions& opt) {
  const int n = field_delta.dim();
  CorrectedMetric out;
  out.u = factor_of(w, n);
  out.metric = conformal_field(field_delta, out.u, field_delta.name() + "_corrected");
  out.calibration = opt.calibration ? *opt.calibration
                                    : calibrate_discretization(field_delta, grid_options(w.w->grid()), opt.h);
  out.certificates = curvature_certificates(field_delta, out.u, w.w->grid(), out.calibration, 0.0, opt);
  if (opt.throw_on_failure && !out.certificates.sign_pass)
    throw CertificateError("corrected metric fails the curvature sign certificates");
  return out;
}

HatMetric hat_metric(const MetricField& field_tilde, const BvpSolution& z,
                     const CertificateOptions& opt, const std::optional<QuadratureSpec>& quad) {
  const int n = field_tilde.dim();
  HatMetric out;
  out.v = factor_of(z, n);
  out.max_v = 1.0 + z.max_value;
  if (out.max_v > 1.0 + 1e-9) throw DomainError("v = 1 + z exceeds 1");
  out.metric = conformal_field(field_tilde, out.v, field_tilde.name() + "_hat");
  out.calibration = opt.calibration ? *opt.calibration
                                    : calibrate_discretization(field_tilde, grid_options(z.w->grid()), opt.h);
  out.certificates = curvature_certificates(field_tilde, out.v, z.w->grid(), out.calibration, 0.0, opt);
  if (opt.throw_on_failure && !out.certificates.vanish_pass)
    throw CertificateError("hat metric fails the vanishing curvature certificates");
  if (quad) {
    // inside the grid box: beyond it v only carries the first-order closure
    QuadratureSpec q = *quad;
    const Grid& g = z.w->grid();
    q.r_outer = std::min(q.r_outer, g.half_width() - 2.0 * g.spacing());
    const std::vector<double> radii{q.r_outer / 2.0, 0.75 * q.r_outer, q.r_outer - 2.0 * q.h};
    out.mass_tilde = mass_series(field_tilde, radii, q);
    out.mass_hat = mass_series(out.metric, radii, q);
    out.gap_mass_difference = out.mass_tilde.m_infinity - out.mass_hat.m_infinity;
    out.gap_energy = conformal_energy(field_tilde, out.v, EnergyPotential::full, q);
  }
  return out;
}

// ---------------------------------------------------------------------------

std::array<double, 3> cutoff_jet(double t) {
  const auto s = smooth_step_jet(2.0 - t);
  return {s[0], -s[1], s[2]};
}

ScalarJet chi_R_jet(const Vec& x, double R, int order) {
  const int n = static_cast<int>(x.size());
  const double r = x.norm();
  const auto k = cutoff_jet(r / R);
  ScalarJet j;
  j.n = n;
  j.order = order;
  j.v = k[0];
  if (order < 1) return j;
  j.d.assign(n, 0.0);
  if (r > 0.0)
    for (int a = 0; a < n; ++a) j.d[a] = k[1] / R * x(a) / r;
  if (order < 2) return j;
  j.dd.assign(n * n, 0.0);
  if (r > 0.0)
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        const double xa = x(a) / r, xb = x(b) / r;
        j.d2(a, b) = k[2] / (R * R) * xa * xb + k[1] / R * ((a == b ? 1.0 : 0.0) - xa * xb) / r;
      }
  return j;
}

MetricField cutoff_metric(const MetricField& field, double R_cut) {
  if (!(R_cut >= 1.0)) throw DomainError("cutoff radius must be at least 1");
  const int n = field.dim();
  auto make = [n, R_cut](const MetricPiece& p) {
    MetricPiece out;
    out.g = [p, n, R_cut](const Vec& x) {
      const double r = x.norm();
      if (r <= R_cut) return p.g(x);
      if (r >= 2.0 * R_cut) return Mat(Mat::Identity(n, n));
      const double chi = cutoff_jet(r / R_cut)[0];
      return Mat(chi * p.g(x) + (1.0 - chi) * Mat::Identity(n, n));
    };
    if (p.jet) {
      out.jet = [p, n, R_cut](const Vec& x, int order) {
        const double r = x.norm();
        if (r <= R_cut) return p.jet(x, order);
        MetricJet flat;
        flat.n = n;
        flat.order = order;
        flat.v = Mat::Identity(n, n);
        if (order >= 1) flat.d.assign(n, Mat::Zero(n, n));
        if (order >= 2) flat.dd.assign(n * n, Mat::Zero(n, n));
        if (r >= 2.0 * R_cut) return flat;
        // chi g + (1 - chi) I = I + chi (g - I)
        MetricJet d = p.jet(x, order);
        d.v -= Mat::Identity(n, n);
        MetricJet j = scale_jet(chi_R_jet(x, R_cut, order), d);
        j.v += Mat::Identity(n, n);
        return j;
      };
    }
    return out;
  };
  MetricField out = rebuild(field, make, field.tau(), field.name() + "_cutoff");
  if (field.adapted()) out = out.with_adapted(field.adapted());
  return out;
}

FlatteningResult conformally_flatten(const MetricField& field, double R_cut, const Domain& domain,
                                     const FlattenOptions& opt) {
  const int n = field.dim();
  const double c = conformal_constant(n);
  if (!(R_cut >= 1.0)) throw DomainError("R_cut must be at least 1");
  if (!(2.0 * R_cut < domain.r_outer)) throw DomainError("2 R_cut must lie inside the truncated domain");
  if (const auto& a = field.adapted()) {
    if (!(R_cut > a->r0() + 2.0 * a->band_half_width()))
      throw DomainError("R_cut must lie beyond the collar band");
  } else if (field.mode() == FieldMode::two_piece && !(R_cut > field.interface_radius())) {
    throw DomainError("R_cut must lie beyond the interface");
  }

  FlatteningResult out;
  out.R_cut = R_cut;
  out.K_radius = 2.0 * R_cut;
  out.g_R = cutoff_metric(field, R_cut);

  BvpOptions bvp = opt.bvp;
  if (bvp.hg <= 0.0) bvp.hg = R_cut / 8.0;
  if (bvp.L <= 0.0) bvp.L = 4.0 * R_cut;
  const double h = opt.certificates.h;

  const MetricField g = field, gR = out.g_R;
  auto in_transition = [R_cut](const Vec& x) {
    const double r = x.norm();
    return r > R_cut && r < 2.0 * R_cut;
  };
  const ScalarField gamma = memoized([g, gR, R_cut, h, in_transition](const Vec& x) {
    if (!in_transition(x)) return 0.0;
    const double chi = cutoff_jet(x.norm() / R_cut)[0];
    return scalar_curvature(gR, x, h) - chi * scalar_curvature(g, x, h);
  });
  auto gamma_bar = [&](int axis) {
    const HypersurfaceChart ch = face_chart(axis);
    return memoized([g, gR, R_cut, h, ch, in_transition](const Vec& x) {
      if (!in_transition(x)) return 0.0;
      const double chi = cutoff_jet(x.norm() / R_cut)[0];
      return mean_curvature(gR, ch, x, h) - chi * mean_curvature(g, ch, x, h);
    });
  };

  RobinProblem p;
  p.metric = gR;
  p.h = scaled(gamma, c);
  p.f = scaled(gamma, -c);
  const ScalarField gb1 = gamma_bar(0);
  p.h1 = scaled(gb1, 2.0 * c);
  p.f1 = scaled(gb1, -2.0 * c);
  if (field.kind() == DomainKind::quarter_space) {
    const ScalarField gb2 = gamma_bar(n - 1);
    p.h2 = scaled(gb2, 2.0 * c);
    p.f2 = scaled(gb2, -2.0 * c);
  }
  p.gamma = 0.5 * (2.0 - n) - 0.25;
  p.check_signs = false;
  out.v = solve_robin_bvp(p, bvp);
  if (!out.v.w) {
    // zero data: v = 0 on the grid
    const auto grid = std::make_shared<Grid>(n, field.kind(), bvp.L, bvp.hg);
    out.v.w.emplace(grid, std::vector<double>(grid->size(), 0.0), 2.0 - n);
  }
  if (!(1.0 + out.v.min_value > 0.0)) throw SolveError("1 + v_R is not positive; increase R_cut");
  out.u = {out.v.field(1.0), 2.0 - n};
  out.g_eps = conformal_field(gR, out.u, field.name() + "_flattened");

  const Grid& grid = out.v.w->grid();
  for (int i = 0; i < grid.size(); ++i)
    out.max_abs_gamma = std::max(out.max_abs_gamma, std::abs(gamma(grid.point(i))));

  out.calibration = opt.certificates.calibration ? *opt.certificates.calibration
                                                 : calibrate_discretization(gR, bvp, h);
  out.curvature_certificates =
      curvature_certificates(gR, out.u, grid, out.calibration, out.K_radius, opt.certificates);

  const double pw = conformal_power(n);
  auto flat_check = [&](const Vec& x) {
    const Mat d = out.g_eps.eval(x) - std::pow(out.u.u(x), pw) * Mat::Identity(n, n);
    out.flatness_defect = std::max(out.flatness_defect, d.cwiseAbs().maxCoeff());
    ++out.flatness_points;
  };
  for (int i = 0; i < grid.size(); ++i)
    if (grid.point(i).norm() > out.K_radius) flat_check(grid.point(i));
  for (const Vec& d : sector_directions(field.kind(), n, 8))
    for (double r : {1.5 * bvp.L, 3.0 * bvp.L}) flat_check(r * d);

  if (opt.compute_mass) {
    QuadratureSpec q = opt.quad;
    q.r_outer = domain.r_outer;
    q.h = domain.h;
    std::vector<double> radii = opt.mass_radii;
    if (radii.empty()) {
      // inside the grid box, where v_R is the computed solution
      const double hi = std::min(q.r_outer, bvp.L - 2.0 * bvp.hg) - 2.0 * q.h;
      if (!(hi > out.K_radius)) throw DomainError("no mass radii between K and the grid box");
      for (int k = 1; k <= 3; ++k) radii.push_back(out.K_radius + (hi - out.K_radius) * k / 3.0);
    }
    for (double r : radii)
      if (!(r > out.K_radius)) throw DomainError("mass radii must lie beyond K");
    out.mass_g = mass_series(field, radii, q);
    out.mass_eps = mass_series(out.g_eps, radii, q);
    out.mass_drift = std::abs(out.mass_eps.m_infinity - out.mass_g.m_infinity);
  }
  return out;
}

}  // namespace pmt
