#include "pmt/geometry/gauss.hpp"

#include <cmath>

namespace pmt {

GaussDecomposition gauss_scalar_decomposition(const MetricField& field, const AdaptedMetric& collar,
                                              const Vec& x, double t, double h, Side side) {
  const AdaptedMetric& a = field.adapted() ? *field.adapted() : collar;
  const int n = a.dim();
  if (n != field.dim()) throw GeometryError("collar dimension mismatch");
  const Side s = collar_side(t, side);
  const SigmaChart ch = make_sigma_chart(x, a.r0());
  const std::vector<Stencil> kinds = adapted_stencils(ch, 2);
  FdOptions opt;
  opt.h = h;

  GaussDecomposition g;
  const MetricJet jet = a.adapted_jet(x, t, 2, h, s);
  g.R = scalar_curvature(jet);

  const CoordinateHypersurface S = coordinate_hypersurface(jet, n - 1, 1.0);
  g.H = S.H;
  const Mat B = S.induced_inv * S.A;
  g.A_norm_sq = (B * B).trace();

  std::vector<int> tang;
  for (int i = 0; i < n - 1; ++i) tang.push_back(i);
  const MetricJet sig = sub_jet(jet, tang);
  g.R_sigma = n - 1 >= 2 ? scalar_curvature(sig) : 0.0;

  // H as a scalar field of (theta, t)
  auto Hf = [&](const Vec& q) {
    const MetricJet j = a.adapted_jet(ch.point(q.head(n - 1)), q(n - 1), 1, h, s);
    return coordinate_hypersurface(j, n - 1, 1.0).H;
  };
  Vec q0 = Vec::Zero(n);
  q0(n - 1) = t;
  const ScalarJet dH = fd_jet<double>(Hf, q0, 1, kinds, opt);
  const Mat gi = jet.v.inverse();
  const double rk = std::sqrt(gi(n - 1, n - 1));
  g.dH_dnu = 0.0;
  for (int c = 0; c < n; ++c) g.dH_dnu += gi(n - 1, c) / rk * dH.d[c];

  // lapse N = 1/sqrt(g^{tt}) sampled on Sigma_t
  auto Nf = [&](const Vec& th) {
    const MetricJet j = a.adapted_jet(ch.point(th), t, 0, h, s);
    return 1.0 / std::sqrt(j.v.inverse()(n - 1, n - 1));
  };
  std::vector<Stencil> tk(kinds.begin(), kinds.end() - 1);
  const ScalarJet N = fd_jet<double>(Nf, Vec::Zero(n - 1), 2, tk, opt);
  const Christoffel Gs = christoffel(sig);
  const Mat si = sig.v.inverse();
  double lap = 0.0;
  for (int i = 0; i < n - 1; ++i)
    for (int j = 0; j < n - 1; ++j) {
      double v = N.d2(i, j);
      for (int k = 0; k < n - 1; ++k) v -= Gs(k, i, j) * N.d[k];
      lap += si(i, j) * v;
    }
  g.lapse = -2.0 * lap / N.v;

  const double rhs = g.R_sigma - g.A_norm_sq - g.H * g.H - 2.0 * g.dH_dnu;
  g.residual_no_lapse = g.R - rhs;
  g.residual = g.R - (rhs + g.lapse);
  return g;
}

}  // namespace pmt
