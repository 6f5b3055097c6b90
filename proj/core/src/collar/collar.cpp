#include "pmt/collar/collar.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "pmt/quadrature.hpp"

namespace pmt {

namespace {

Mat block_warp(double F, const Mat& gh) {
  const int m = static_cast<int>(gh.rows());
  Mat G = Mat::Zero(m + 1, m + 1);
  G.topLeftCorner(m, m) = F * gh;
  return G;
}

}  // namespace

RadialCollar::RadialCollar(MetricField field, double r0, double epsilon, double table_step)
    : field_(std::move(field)), r0_(r0), eps_(epsilon), dt_(table_step) {
  if (!field_.is_radial()) throw GeometryError("radial collar needs a radial metric");
  if (!(r0_ > 0.0) || !(eps_ > 0.0) || !(dt_ > 0.0)) throw GeometryError("bad collar parameters");
  if (field_.mode() == FieldMode::two_piece && std::abs(field_.interface_radius() - r0_) > 1e-12)
    throw GeometryError("collar radius differs from the interface radius");
  const double T = 2.2 * eps_ + 4.0 * dt_;
  const int half = static_cast<int>(std::ceil(T / dt_));
  t_min_ = -half * dt_;
  for (Side s : {Side::minus, Side::plus}) {
    const RadialProfile& p = profile(s);
    auto rhs = [&p](double r) {
      double ph = p.phi(r);
      return ph > 0.0 && r > 0.0 ? 1.0 / std::sqrt(ph) : std::nan("");
    };
    std::vector<double> tab(2 * half + 1, std::nan(""));
    tab[half] = r0_;
    for (int dir : {1, -1}) {
      double r = r0_;
      const double k = dir * dt_;
      for (int i = 1; i <= half; ++i) {
        double k1 = rhs(r), k2 = rhs(r + 0.5 * k * k1), k3 = rhs(r + 0.5 * k * k2),
               k4 = rhs(r + k * k3);
        r += k / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
        if (!(r > 0.0) || !std::isfinite(r)) break;
        tab[half + dir * i] = r;
      }
    }
    (s == Side::minus ? r_minus_ : r_plus_) = std::move(tab);
  }
  for (double t : {-2.0 * eps_, 2.0 * eps_}) {
    double r = r_of_t(t, Side::automatic);
    if (!(r > 0.0) || !std::isfinite(r)) {
      std::ostringstream os;
      os << "collar flow leaves the domain before |t| = 2 epsilon = " << 2.0 * eps_;
      throw GeometryError(os.str());
    }
  }
}

const RadialProfile& RadialCollar::profile(Side s) const {
  return *field_.piece(s == Side::plus ? Side::plus : Side::minus).radial;
}

double RadialCollar::r_of_t(double t, Side side) const {
  const Side s = collar_side(t, side);
  const std::vector<double>& tab = s == Side::plus ? r_plus_ : r_minus_;
  const double u = (t - t_min_) / dt_;
  int i = static_cast<int>(std::floor(u));
  if (i < 0 || i + 1 >= static_cast<int>(tab.size())) throw DomainError("collar parameter out of range");
  const double a = tab[i], b = tab[i + 1];
  if (!std::isfinite(a) || !std::isfinite(b)) throw DomainError("collar parameter outside the flow");
  const RadialProfile& p = profile(s);
  const double da = dt_ / std::sqrt(p.phi(a)), db = dt_ / std::sqrt(p.phi(b));
  const double x = u - i;
  const double h00 = (1 + 2 * x) * (1 - x) * (1 - x), h10 = x * (1 - x) * (1 - x),
               h01 = x * x * (3 - 2 * x), h11 = x * x * (x - 1);
  return h00 * a + h10 * da + h01 * b + h11 * db;
}

double RadialCollar::dr_dt(double t, Side side) const {
  const Side s = collar_side(t, side);
  return 1.0 / std::sqrt(profile(s).phi(r_of_t(t, s)));
}

double RadialCollar::t_of_r(double r) const {
  if (!(r > 0.0)) throw DomainError("radius must be positive");
  const Side s = r <= r0_ ? Side::minus : Side::plus;
  const RadialProfile& p = profile(s);
  GaussRule g = gauss_legendre(48, r0_, r);
  double t = 0.0;
  for (size_t i = 0; i < g.x.size(); ++i) t += g.w[i] * std::sqrt(p.phi(g.x[i]));
  return t;
}

std::array<double, 3> RadialCollar::F_of_r(double r, Side s) const {
  const RadialProfile& p = profile(s);
  const double ph = p.phi(r), d1 = p.dphi(r), d2 = p.d2phi(r);
  const double q = 1.0 / (r0_ * r0_);
  const double F = ph * r * r * q;
  const double Fr = (d1 * r * r + 2.0 * ph * r) * q;
  const double Frr = (d2 * r * r + 4.0 * d1 * r + 2.0 * ph) * q;
  const double rt = 1.0 / std::sqrt(ph);
  const double rtt = -0.5 * d1 / (ph * ph);
  return {F, Fr * rt, Frr * rt * rt + Fr * rtt};
}

std::array<double, 3> RadialCollar::F(double t, Side side) const {
  const Side s = collar_side(t, side);
  return F_of_r(r_of_t(t, s), s);
}

Vec RadialCollar::xi(const Vec& y, Side side) const {
  const double r = y.norm();
  const Side s = side != Side::automatic ? side : (r <= r0_ ? Side::minus : Side::plus);
  return y / (r * std::sqrt(profile(s).phi(r)));
}

Vec RadialCollar::to_ambient(const Vec& x, double t, Side side) const {
  return r_of_t(t, side) * x / x.norm();
}

std::pair<Vec, double> RadialCollar::from_ambient(const Vec& y) const {
  const double r = y.norm();
  return {Vec(r0_ * y / r), t_of_r(r)};
}

Mat RadialCollar::jacobian(const SigmaChart& ch, const Vec& theta, double t, Side side) const {
  const int n = ch.n;
  const Side s = collar_side(t, side);
  const double r = r_of_t(t, s);
  Mat J(n, n);
  J.leftCols(n - 1) = (r / r0_) * ch.tangent(theta);
  J.col(n - 1) = dr_dt(t, s) * ch.point(theta) / r0_;
  return J;
}

Mat RadialCollar::pullback(const SigmaChart& ch, const Vec& theta, double t, Side side) const {
  Mat G = block_warp(F(t, side)[0], ch.induced(theta));
  G(ch.n - 1, ch.n - 1) = 1.0;
  return G;
}

std::array<Mat, 3> RadialCollar::pullback_t_jet(const SigmaChart& ch, const Vec& theta, double t,
                                                Side side) const {
  const auto f = F(t, side);
  const Mat gh = ch.induced(theta);
  std::array<Mat, 3> out{block_warp(f[0], gh), block_warp(f[1], gh), block_warp(f[2], gh)};
  out[0](ch.n - 1, ch.n - 1) = 1.0;
  return out;
}

MetricJet RadialCollar::adapted_jet(const Vec& x, double t, int order, double, Side side) const {
  const int n = field_.dim();
  const SigmaChart ch = make_sigma_chart(x, r0_);
  const MetricJet gh = ch.induced_jet(Vec::Zero(n - 1), order);
  const auto f = F(t, side);
  MetricJet j;
  j.n = n;
  j.order = order;
  j.v = block_warp(f[0], gh.v);
  j.v(n - 1, n - 1) = 1.0;
  if (order < 1) return j;
  j.d.resize(n);
  for (int i = 0; i < n - 1; ++i) j.d[i] = block_warp(f[0], gh.d[i]);
  j.d[n - 1] = block_warp(f[1], gh.v);
  if (order < 2) return j;
  j.dd.resize(n * n);
  for (int i = 0; i < n - 1; ++i) {
    for (int k = 0; k < n - 1; ++k) j.d2(i, k) = block_warp(f[0], gh.d2(i, k));
    j.d2(i, n - 1) = block_warp(f[1], gh.d[i]);
    j.d2(n - 1, i) = j.d2(i, n - 1);
  }
  j.d2(n - 1, n - 1) = block_warp(f[2], gh.v);
  return j;
}

FlowCollar::FlowCollar(MetricField field, double r0, double epsilon, double max_step)
    : field_(std::move(field)), r0_(r0), eps_(epsilon) {
  if (!(r0_ > 0.0) || !(eps_ > 0.0) || !(max_step > 0.0))
    throw GeometryError("bad collar parameters");
  steps_ = std::max(8, static_cast<int>(std::ceil(2.0 * eps_ / max_step)));
  const int n = field_.dim();
  // the normal of the sphere must be tangent to {x_1 = 0} at the boundary points
  for (int k = 0; k < 16; ++k) {
    const double span = field_.kind() == DomainKind::quarter_space ? 0.5 : 1.0;
    const double a = (k + 0.5) * span * std::numbers::pi / 16.0;
    Vec x = Vec::Zero(n);
    x(1) = std::cos(a);
    x(n - 1) = std::sin(a);
    for (Side s : {Side::minus, Side::plus}) {
      const Vec V = field_.eval_raw(Vec(r0_ * x), s).ldlt().solve(x);
      if (std::abs(V(0)) > 1e-8 * V.norm())
        throw GeometryError("collar: the interface sphere is not orthogonal to {x_1 = 0}");
    }
  }
  // probe the flow along a few directions out to |t| = 2 epsilon
  for (int a = 0; a < n; ++a) {
    Vec d = Vec::Constant(n, 0.2);
    d(a) = 1.0;
    d(0) = std::abs(d(0));
    Vec x = r0_ * d / d.norm();
    for (double t : {-2.0 * eps_, 2.0 * eps_}) {
      Vec y = to_ambient(x, t);
      if (!y.allFinite() || !contains(field_.kind(), n, y, 1e-9) || y.norm() < 1e-6 * r0_) {
        std::ostringstream os;
        os << "collar flow leaves the domain before |t| = 2 epsilon = " << 2.0 * eps_;
        throw GeometryError(os.str());
      }
    }
  }
}

Vec FlowCollar::xi(const Vec& y, Side side) const {
  const double r = y.norm();
  const Side s = side != Side::automatic ? side : (r <= r0_ ? Side::minus : Side::plus);
  const Vec yh = y / r;
  const Mat gp = field_.eval_raw(Vec(r0_ * yh), s);
  Vec V = gp.ldlt().solve(yh);
  if (y(0) == 0.0) V(0) = 0.0;
  const Mat gy = field_.eval_raw(y, s);
  return V / std::sqrt(V.dot(gy * V));
}

Mat FlowCollar::dxi(const Vec& y, Side side) const {
  const int n = field_.dim();
  const double k = 1e-6 * std::max(1.0, y.norm());
  Mat D(n, n);
  for (int a = 0; a < n; ++a) {
    Vec yp = y, ym = y;
    if (a == 0 && y(0) < k) {
      yp(0) += k;
      Vec yp2 = y;
      yp2(0) += 2.0 * k;
      D.col(a) = (-3.0 * xi(y, side) + 4.0 * xi(yp, side) - xi(yp2, side)) / (2.0 * k);
      continue;
    }
    yp(a) += k;
    ym(a) -= k;
    D.col(a) = (xi(yp, side) - xi(ym, side)) / (2.0 * k);
  }
  return D;
}

void FlowCollar::flow(Vec& y, Mat* J, double t, Side side) const {
  if (t == 0.0) return;
  const Side s = collar_side(t, side);
  const double k = t / steps_;
  for (int i = 0; i < steps_; ++i) {
    const Vec k1 = xi(y, s);
    const Vec y2 = y + 0.5 * k * k1;
    const Vec k2 = xi(y2, s);
    const Vec y3 = y + 0.5 * k * k2;
    const Vec k3 = xi(y3, s);
    const Vec y4 = y + k * k3;
    const Vec k4 = xi(y4, s);
    if (J) {
      const Mat& J0 = *J;
      const Mat l1 = dxi(y, s) * J0;
      const Mat l2 = dxi(y2, s) * (J0 + 0.5 * k * l1);
      const Mat l3 = dxi(y3, s) * (J0 + 0.5 * k * l2);
      const Mat l4 = dxi(y4, s) * (J0 + k * l3);
      *J = J0 + k / 6.0 * (l1 + 2.0 * l2 + 2.0 * l3 + l4);
    }
    y += k / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
}

Vec FlowCollar::to_ambient(const Vec& x, double t, Side side) const {
  Vec y = r0_ * x / x.norm();
  if (x(0) == 0.0) y(0) = 0.0;
  flow(y, nullptr, t, side);
  return y;
}

Mat FlowCollar::jacobian(const SigmaChart& ch, const Vec& theta, double t, Side side) const {
  const int n = ch.n;
  Vec y = ch.point(theta);
  Mat J = ch.tangent(theta);
  flow(y, &J, t, side);
  Mat out(n, n);
  out.leftCols(n - 1) = J;
  out.col(n - 1) = xi(y, collar_side(t, side));
  return out;
}

std::pair<Vec, double> FlowCollar::from_ambient(const Vec& y) const {
  const int n = field_.dim();
  const double r = y.norm();
  Vec x = r0_ * y / r;
  if (y(0) == 0.0) x(0) = 0.0;
  const Mat g = field_.eval_raw(y);
  const Vec yh = y / r;
  double t = (r - r0_) * std::sqrt(yh.dot(g * yh));
  for (int it = 0; it < 40; ++it) {
    const SigmaChart ch = make_sigma_chart(x, r0_);
    const Vec z = Vec::Zero(n - 1);
    const Vec res = to_ambient(x, t) - y;
    if (res.norm() < 1e-13 * (1.0 + r)) return {x, t};
    const Mat J = jacobian(ch, z, t, Side::automatic);
    const Vec dq = J.partialPivLu().solve(-res);
    x = ch.point(dq.head(n - 1));
    if (ch.on_boundary) x(0) = 0.0;
    t += dq(n - 1);
  }
  throw GeometryError("collar inverse did not converge");
}

std::shared_ptr<const CollarChart> build_collar_field(const MetricField& field, const Domain& domain,
                                                      const CollarOptions& opt) {
  domain.validate();
  if (field.dim() != domain.n) throw GeometryError("collar: dimension mismatch");
  if (field.is_radial() && !opt.force_flow)
    return std::make_shared<RadialCollar>(field, domain.r_inner, opt.epsilon, opt.table_step);
  const double step = opt.flow_step > 0.0 ? opt.flow_step : domain.h / 4.0;
  return std::make_shared<FlowCollar>(field, domain.r_inner, opt.epsilon, step);
}

}  // namespace pmt
