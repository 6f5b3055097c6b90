#include "pmt/geometry/adapted.hpp"

#include <cmath>

namespace pmt {

namespace {
constexpr double kTStep = 2.0e-3;
}

Mat CollarChart::pullback(const SigmaChart& ch, const Vec& theta, double t, Side side) const {
  const Side s = collar_side(t, side);
  const Mat J = jacobian(ch, theta, t, s);
  const Vec y = to_ambient(ch.point(theta), t, s);
  const Mat g = field().eval_raw(y, s);
  return J.transpose() * g * J;
}

std::array<Mat, 3> CollarChart::pullback_t_jet(const SigmaChart& ch, const Vec& theta, double t,
                                               Side side) const {
  const Side s = collar_side(t, side);
  const double k = kTStep;
  Mat f[5];
  for (int i = 0; i < 5; ++i) f[i] = pullback(ch, theta, t + (i - 2) * k, s);
  std::array<Mat, 3> out;
  out[0] = f[2];
  out[1] = (f[0] - 8.0 * f[1] + 8.0 * f[3] - f[4]) / (12.0 * k);
  out[2] = (-f[0] + 16.0 * f[1] - 30.0 * f[2] + 16.0 * f[3] - f[4]) / (12.0 * k * k);
  return out;
}

std::vector<Stencil> adapted_stencils(const SigmaChart& ch, int order) {
  std::vector<Stencil> k(ch.n, Stencil::central);
  if (order >= 1 && ch.on_boundary) k[0] = Stencil::forward;
  return k;
}

MetricJet CollarChart::adapted_jet(const Vec& x, double t, int order, double h, Side side) const {
  const int n = dim();
  const SigmaChart ch = make_sigma_chart(x, r0());
  const Side s = collar_side(t, side);
  auto f = [&](const Vec& q) { return pullback(ch, q.head(n - 1), q(n - 1), s); };
  Vec q = Vec::Zero(n);
  q(n - 1) = t;
  FdOptions opt;
  opt.h = h;
  return fd_jet<Mat>(f, q, order, adapted_stencils(ch, order), opt);
}

bool CollarChart::covers(const Vec&) const { return false; }

}  // namespace pmt

namespace pmt {

namespace {

Mat drop_first(const Mat& m) {
  const int k = static_cast<int>(m.rows());
  return m.block(1, 1, k - 1, k - 1);
}

}  // namespace

double AdaptedMetric::volume_factor(const Vec& x, double t) const {
  const Mat G = adapted_jet(x, t, 0, 1e-3, Side::automatic).v;
  const SigmaChart ch = make_sigma_chart(x, r0());
  const Mat gs = ch.induced(Vec::Zero(dim() - 1));
  return std::sqrt(G.determinant() / gs.determinant());
}

double AdaptedMetric::face_factor(const Vec& x, double t) const {
  const Mat G = adapted_jet(x, t, 0, 1e-3, Side::automatic).v;
  const SigmaChart ch = make_sigma_chart(x, r0());
  const Mat gs = ch.induced(Vec::Zero(dim() - 1));
  return std::sqrt(drop_first(G).determinant() / drop_first(gs).determinant());
}

}  // namespace pmt
