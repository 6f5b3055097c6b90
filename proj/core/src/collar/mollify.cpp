#include "pmt/collar/mollify.hpp"

#include <cmath>
#include <sstream>

#include "pmt/geometry/decay.hpp"
#include "pmt/quadrature.hpp"

namespace pmt {

namespace {

struct Pieces {
  double a[2], b[2];
  Side side[2];
  int count = 0;
};

// tau < s/sigma maps to the plus side
Pieces split(double tstar) {
  Pieces p;
  if (tstar > -1.0) {
    p.a[p.count] = -1.0;
    p.b[p.count] = std::min(tstar, 1.0);
    p.side[p.count++] = Side::plus;
  }
  if (tstar < 1.0) {
    p.a[p.count] = std::max(tstar, -1.0);
    p.b[p.count] = 1.0;
    p.side[p.count++] = Side::minus;
  }
  return p;
}

Mat stack3(const std::array<Mat, 3>& m) {
  const int n = static_cast<int>(m[0].rows());
  Mat out(n, 3 * n);
  for (int k = 0; k < 3; ++k) out.middleCols(k * n, n) = m[k];
  return out;
}

}  // namespace

MollifiedMetric::MollifiedMetric(std::shared_ptr<const CollarChart> collar, MollifierSpec spec,
                                 int nodes)
    : collar_(std::move(collar)), spec_(spec), nodes_(nodes) {
  spec_.validate();
  if (nodes_ < 32) throw Error("mollifier quadrature needs at least 32 nodes");
  if (const WarpProfile* w = collar_->warp()) {
    r_lo_ = w->r_of_t(-spec_.band_half_width(), Side::minus);
    r_hi_ = w->r_of_t(spec_.band_half_width(), Side::plus);
  }
}

std::array<double, 3> MollifiedMetric::F_delta(double s, int nodes) const {
  const WarpProfile* w = collar_->warp();
  if (!w) throw GeometryError("F_delta needs a warped collar");
  const auto sg = spec_.sigma_delta_jet(s);
  if (sg[0] == 0.0) return w->F(s, Side::automatic);
  const int m = nodes > 0 ? nodes : nodes_;
  const double tstar = s / sg[0];
  const Pieces p = split(tstar);
  double V = 0.0, D1 = 0.0, D2 = 0.0;
  for (int k = 0; k < p.count; ++k) {
    const GaussRule g = gauss_legendre(m, p.a[k], p.b[k]);
    for (int i = 0; i < m; ++i) {
      const double tau = g.x[i];
      const double wc = g.w[i] * MollifierSpec::chi(tau);
      const auto f = w->F(s - sg[0] * tau, p.side[k]);
      const double e = 1.0 - sg[1] * tau;
      V += wc * f[0];
      D1 += wc * f[1] * e;
      D2 += wc * (f[2] * e * e - f[1] * sg[2] * tau);
    }
  }
  if (std::abs(tstar) < 1.0) {
    const double jump = w->F(0.0, Side::plus)[1] - w->F(0.0, Side::minus)[1];
    const double q = sg[0] - s * sg[1];
    D2 += jump * q * q / (sg[0] * sg[0] * sg[0]) * MollifierSpec::chi(tstar);
  }
  return {V, D1, D2};
}

std::array<Mat, 3> MollifiedMetric::s_jet(const SigmaChart& ch, const Vec& theta, double s,
                                          int nodes) const {
  const int n = ch.n;
  if (collar_->warp()) {
    const auto f = F_delta(s, nodes);
    const Mat gh = ch.induced(theta);
    std::array<Mat, 3> out;
    for (int k = 0; k < 3; ++k) {
      out[k] = Mat::Zero(n, n);
      out[k].topLeftCorner(n - 1, n - 1) = f[k] * gh;
    }
    out[0](n - 1, n - 1) = 1.0;
    return out;
  }
  const auto sg = spec_.sigma_delta_jet(s);
  if (sg[0] == 0.0) return collar_->pullback_t_jet(ch, theta, s, Side::automatic);
  const int m = nodes > 0 ? nodes : nodes_;
  const double tstar = s / sg[0];
  const Pieces p = split(tstar);
  std::array<Mat, 3> out{Mat::Zero(n, n), Mat::Zero(n, n), Mat::Zero(n, n)};
  for (int k = 0; k < p.count; ++k) {
    const GaussRule g = gauss_legendre(m, p.a[k], p.b[k]);
    for (int i = 0; i < m; ++i) {
      const double tau = g.x[i];
      const double wc = g.w[i] * MollifierSpec::chi(tau);
      const auto G = collar_->pullback_t_jet(ch, theta, s - sg[0] * tau, p.side[k]);
      const double e = 1.0 - sg[1] * tau;
      out[0] += wc * G[0];
      out[1] += (wc * e) * G[1];
      out[2] += wc * (e * e * G[2] - sg[2] * tau * G[1]);
    }
  }
  if (std::abs(tstar) < 1.0) {
    const Mat jump = collar_->pullback_t_jet(ch, theta, 0.0, Side::plus)[1] -
                     collar_->pullback_t_jet(ch, theta, 0.0, Side::minus)[1];
    const double q = sg[0] - s * sg[1];
    out[2] += (q * q / (sg[0] * sg[0] * sg[0]) * MollifierSpec::chi(tstar)) * jump;
  }
  return out;
}

MetricJet MollifiedMetric::adapted_jet(const Vec& x, double s, int order, double h, Side) const {
  const int n = dim();
  const SigmaChart ch = make_sigma_chart(x, r0());
  MetricJet j;
  j.n = n;
  j.order = order;
  if (collar_->warp()) {
    const MetricJet gh = ch.induced_jet(Vec::Zero(n - 1), order);
    const auto f = F_delta(s);
    auto blk = [n](double F, const Mat& m) {
      Mat G = Mat::Zero(n, n);
      G.topLeftCorner(n - 1, n - 1) = F * m;
      return G;
    };
    j.v = blk(f[0], gh.v);
    j.v(n - 1, n - 1) = 1.0;
    if (order < 1) return j;
    j.d.resize(n);
    for (int i = 0; i < n - 1; ++i) j.d[i] = blk(f[0], gh.d[i]);
    j.d[n - 1] = blk(f[1], gh.v);
    if (order < 2) return j;
    j.dd.resize(n * n);
    for (int i = 0; i < n - 1; ++i) {
      for (int k = 0; k < n - 1; ++k) j.d2(i, k) = blk(f[0], gh.d2(i, k));
      j.d2(i, n - 1) = blk(f[1], gh.d[i]);
      j.d2(n - 1, i) = j.d2(i, n - 1);
    }
    j.d2(n - 1, n - 1) = blk(f[2], gh.v);
    return j;
  }
  // theta-derivatives by finite differences of the stacked (G, G_s, G_ss)
  auto f = [&](const Vec& th) { return stack3(s_jet(ch, th, s)); };
  std::vector<Stencil> kinds = adapted_stencils(ch, order);
  kinds.pop_back();
  FdOptions opt;
  opt.h = h;
  const Jet<Mat> S = fd_jet<Mat>(f, Vec::Zero(n - 1), order, kinds, opt);
  auto blkc = [n](const Mat& m, int k) { return Mat(m.middleCols(k * n, n)); };
  j.v = blkc(S.v, 0);
  if (order < 1) return j;
  j.d.resize(n);
  for (int i = 0; i < n - 1; ++i) j.d[i] = blkc(S.d[i], 0);
  j.d[n - 1] = blkc(S.v, 1);
  if (order < 2) return j;
  j.dd.resize(n * n);
  for (int i = 0; i < n - 1; ++i) {
    for (int k = 0; k < n - 1; ++k) j.d2(i, k) = blkc(S.d2(i, k), 0);
    j.d2(i, n - 1) = blkc(S.d[i], 1);
    j.d2(n - 1, i) = j.d2(i, n - 1);
  }
  j.d2(n - 1, n - 1) = blkc(S.v, 2);
  return j;
}

double MollifiedMetric::volume_factor(const Vec& x, double t) const {
  if (!collar_->warp()) return AdaptedMetric::volume_factor(x, t);
  return std::pow(F_delta(t)[0], 0.5 * (dim() - 1));
}

double MollifiedMetric::face_factor(const Vec& x, double t) const {
  if (!collar_->warp()) return AdaptedMetric::face_factor(x, t);
  return std::pow(F_delta(t)[0], 0.5 * (dim() - 2));
}

bool MollifiedMetric::in_band(const Vec& y) const {
  const double hw = spec_.band_half_width();
  if (collar_->warp()) {
    const double r = y.norm();
    return r > r_lo_ && r < r_hi_;
  }
  if (std::abs(y.norm() - r0()) > 4.0 * collar_->epsilon()) return false;
  try {
    return std::abs(collar_->from_ambient(y).second) < hw;
  } catch (const GeometryError&) {
    return false;
  }
}

Mat MollifiedMetric::eval_cartesian(const Vec& y) const {
  const int n = dim();
  auto [x, s] = collar_->from_ambient(y);
  const SigmaChart ch = make_sigma_chart(x, r0());
  const Vec z = Vec::Zero(n - 1);
  const Mat J = collar_->jacobian(ch, z, s, Side::automatic);
  const Mat Ji = J.inverse();
  const Mat G = s_jet(ch, z, s)[0];
  Mat g = Ji.transpose() * G * Ji;
  return 0.5 * (g + g.transpose());
}

MetricField mollify_metric(const MetricField& field, std::shared_ptr<const CollarChart> collar,
                           const MollifierSpec& spec, const MollifyOptions& opt) {
  spec.validate();
  if (spec.delta > opt.max_delta_ratio * collar->epsilon() * (1.0 + 1e-12)) {
    std::ostringstream os;
    os << "delta = " << spec.delta << " exceeds " << opt.max_delta_ratio
       << " * epsilon = " << opt.max_delta_ratio * collar->epsilon();
    throw GeometryError(os.str());
  }
  auto mm = std::make_shared<MollifiedMetric>(collar, spec, opt.nodes);
  // quadrature convergence: coarse and full rules must agree
  const int n = field.dim();
  const Vec x = collar->r0() * sector_directions(field.kind(), n, 1)[0];
  const SigmaChart ch = make_sigma_chart(x, collar->r0());
  const Vec z = Vec::Zero(n - 1);
  const double w = spec.spike_half_width();
  for (double s : {0.0, 0.3 * w, -0.7 * w, 0.2 * spec.delta, -0.4 * spec.delta}) {
    const auto a = mm->s_jet(ch, z, s, opt.coarse_nodes);
    const auto b = mm->s_jet(ch, z, s);
    for (int k = 0; k < 3; ++k) {
      const double scale = std::max(1.0, b[k].cwiseAbs().maxCoeff());
      if ((a[k] - b[k]).cwiseAbs().maxCoeff() > opt.check_tol * scale) {
        std::ostringstream os;
        os << "mollifier quadrature not converged at s = " << s << " (derivative order " << k << ")";
        throw GeometryError(os.str());
      }
    }
  }
  MetricPiece p;
  p.g = [mm, field](const Vec& y) { return mm->in_band(y) ? mm->eval_cartesian(y) : field.eval_raw(y); };
  if (field.has_exact_jet()) {
    p.jet = [mm, field](const Vec& y, int order) {
      if (mm->in_band(y))
        throw GeometryError("Cartesian jet of g_delta inside the band; use collar coordinates");
      return field.exact_jet(y, order);
    };
  }
  MetricField out = MetricField::analytic(n, field.kind(), p, field.tau(), field.C_decay(),
                                          field.name() + "_mollified");
  return out.with_adapted(mm);
}

std::shared_ptr<const MollifiedMetric> mollified_of(const MetricField& field_delta) {
  return std::dynamic_pointer_cast<const MollifiedMetric>(field_delta.adapted());
}

double band_sup_difference(const MetricField& field_delta, const MetricField& field,
                           int sigma_samples, int t_samples) {
  auto mm = mollified_of(field_delta);
  if (!mm) throw GeometryError("field is not a mollified metric");
  const int n = field.dim();
  const double hw = mm->spec().band_half_width();
  double worst = 0.0;
  for (const Vec& d : sector_directions(field.kind(), n, sigma_samples)) {
    const Vec x = mm->r0() * d;
    for (int i = 0; i < t_samples; ++i) {
      const double t = -hw + 2.0 * hw * (i + 0.5) / t_samples;
      const Vec y = mm->collar().to_ambient(x, t);
      worst = std::max(worst, (field_delta.eval_raw(y) - field.eval_raw(y)).cwiseAbs().maxCoeff());
    }
  }
  return worst;
}

}  // namespace pmt
