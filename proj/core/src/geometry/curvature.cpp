#include "pmt/geometry/curvature.hpp"

#include <cmath>

#include "pmt/geometry/adapted.hpp"

namespace pmt {

MetricJet metric_jet(const MetricField& field, const Vec& x, int order, Side side,
                     const DerivativePolicy& policy) {
  const Side s = field.resolve(x, side);
  if (policy.prefer_exact && field.has_exact_jet(s)) return field.exact_jet(x, order, s);
  if (x.size() != field.dim() || !contains(field.kind(), field.dim(), x))
    throw DomainError("jet requested outside the domain");
  FdOptions opt;
  opt.h = policy.h;
  opt.accuracy = policy.accuracy;
  auto kinds = policy.one_sided_faces
                   ? face_aware_stencils(field.kind(), x, policy.h, order, policy.accuracy)
                   : central_stencils(field.dim());
  auto f = [&field, s](const Vec& y) { return field.eval_raw(y, s); };
  return fd_jet<Mat>(f, x, order, kinds, opt);
}

Christoffel christoffel(const MetricJet& jet) {
  const int n = jet.n;
  if (jet.order < 1) throw GeometryError("christoffel needs a first-order jet");
  Eigen::LDLT<Mat> ldlt(jet.v);
  if (ldlt.info() != Eigen::Success) throw GeometryError("singular metric in christoffel");
  const Mat gi = jet.v.inverse();
  Christoffel G;
  G.n = n;
  G.c.assign(n * n * n, 0.0);
  std::vector<double> low(n * n * n);
  for (int d = 0; d < n; ++d)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        double v = 0.5 * (jet.d[b](d, c) + jet.d[c](d, b) - jet.d[d](b, c));
        low[(d * n + b) * n + c] = v;
        low[(d * n + c) * n + b] = v;
      }
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b)
      for (int c = b; c < n; ++c) {
        double s = 0.0;
        for (int d = 0; d < n; ++d) s += gi(a, d) * low[(d * n + b) * n + c];
        G(a, b, c) = s;
        G(a, c, b) = s;
      }
  return G;
}

std::vector<Christoffel> christoffel_derivative(const MetricJet& jet) {
  const int n = jet.n;
  if (jet.order < 2) throw GeometryError("christoffel derivative needs a second-order jet");
  const Mat gi = jet.v.inverse();
  std::vector<double> low(n * n * n);
  for (int d = 0; d < n; ++d)
    for (int b = 0; b < n; ++b)
      for (int c = 0; c < n; ++c)
        low[(d * n + b) * n + c] = 0.5 * (jet.d[b](d, c) + jet.d[c](d, b) - jet.d[d](b, c));
  std::vector<Christoffel> out(n);
  for (int e = 0; e < n; ++e) {
    const Mat dgi = -gi * jet.d[e] * gi;
    Christoffel& D = out[e];
    D.n = n;
    D.c.assign(n * n * n, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b)
        for (int c = b; c < n; ++c) {
          double s = 0.0;
          for (int d = 0; d < n; ++d) {
            double dlow =
                0.5 * (jet.d2(e, b)(d, c) + jet.d2(e, c)(d, b) - jet.d2(e, d)(b, c));
            s += dgi(a, d) * low[(d * n + b) * n + c] + gi(a, d) * dlow;
          }
          D(a, b, c) = s;
          D(a, c, b) = s;
        }
  }
  return out;
}

double scalar_curvature(const MetricJet& jet) {
  const int n = jet.n;
  const Christoffel G = christoffel(jet);
  const std::vector<Christoffel> dG = christoffel_derivative(jet);
  const Mat gi = jet.v.inverse();
  double R = 0.0;
  for (int b = 0; b < n; ++b)
    for (int c = 0; c < n; ++c) {
      double ric = 0.0;
      for (int a = 0; a < n; ++a) {
        ric += dG[a](a, b, c) - dG[c](a, a, b);
        for (int d = 0; d < n; ++d) ric += G(a, a, d) * G(d, b, c) - G(a, c, d) * G(d, a, b);
      }
      R += gi(b, c) * ric;
    }
  return R;
}

MetricJet sub_jet(const MetricJet& jet, const std::vector<int>& keep) {
  const int m = static_cast<int>(keep.size());
  auto restrict = [&](const Mat& A) {
    Mat B(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) B(i, j) = A(keep[i], keep[j]);
    return B;
  };
  MetricJet s;
  s.n = m;
  s.order = jet.order;
  s.v = restrict(jet.v);
  if (jet.order >= 1) {
    s.d.resize(m);
    for (int i = 0; i < m; ++i) s.d[i] = restrict(jet.d[keep[i]]);
  }
  if (jet.order >= 2) {
    s.dd.resize(m * m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) s.d2(i, j) = restrict(jet.d2(keep[i], keep[j]));
  }
  return s;
}

CoordinateHypersurface coordinate_hypersurface(const MetricJet& jet, int k, double orientation) {
  const int n = jet.n;
  if (jet.order < 1) throw GeometryError("hypersurface forms need a first-order jet");
  const Christoffel G = christoffel(jet);
  const Mat gi = jet.v.inverse();
  const double gkk = gi(k, k);
  if (!(gkk > 0.0)) throw GeometryError("degenerate normal direction");
  const double rk = std::sqrt(gkk);
  CoordinateHypersurface S;
  S.k = k;
  for (int a = 0; a < n; ++a)
    if (a != k) S.tangent.push_back(a);
  const int m = n - 1;
  S.A.resize(m, m);
  S.induced.resize(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      S.A(i, j) = -orientation * G(k, S.tangent[i], S.tangent[j]) / rk;
      S.induced(i, j) = jet.v(S.tangent[i], S.tangent[j]);
    }
  Eigen::LDLT<Mat> ldlt(S.induced);
  if (ldlt.info() != Eigen::Success || !(ldlt.vectorD().minCoeff() > 0.0))
    throw GeometryError("degenerate induced metric");
  S.induced_inv = S.induced.inverse();
  S.H = (S.induced_inv.cwiseProduct(S.A)).sum();
  S.normal.resize(n);
  for (int a = 0; a < n; ++a) S.normal(a) = orientation * gi(k, a) / rk;
  // div nu = d_a nu^a + Gamma^a_{ab} nu^b
  double div = 0.0;
  for (int b = 0; b < n; ++b) {
    const Mat dgi = -gi * jet.d[b] * gi;
    const double dn = orientation * (dgi(k, b) / rk - 0.5 * gi(k, b) * dgi(k, k) / (gkk * rk));
    div += dn;
    double tr = 0.0;
    for (int a = 0; a < n; ++a) tr += G(a, a, b);
    div += tr * S.normal(b);
  }
  S.H_div = div;
  return S;
}

Vec mean_curvature_gradient(const MetricJet& jet, int k, double orientation) {
  const int n = jet.n;
  const Christoffel G = christoffel(jet);
  const std::vector<Christoffel> dG = christoffel_derivative(jet);
  const Mat gi = jet.v.inverse();
  const double gkk = gi(k, k);
  std::vector<int> t;
  for (int a = 0; a < n; ++a)
    if (a != k) t.push_back(a);
  const int m = n - 1;
  Mat gam(m, m), A(m, m);
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) {
      gam(i, j) = jet.v(t[i], t[j]);
      A(i, j) = -orientation * G(k, t[i], t[j]) / std::sqrt(gkk);
    }
  const Mat gami = gam.inverse();
  Vec out(n);
  for (int c = 0; c < n; ++c) {
    const Mat dgi = -gi * jet.d[c] * gi;
    const double dgkk = dgi(k, k);
    Mat dgam(m, m), dA(m, m);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j) {
        dgam(i, j) = jet.d[c](t[i], t[j]);
        dA(i, j) = -orientation * (dG[c](k, t[i], t[j]) / std::sqrt(gkk) -
                                   0.5 * G(k, t[i], t[j]) * dgkk / (gkk * std::sqrt(gkk)));
      }
    const Mat dgami = -gami * dgam * gami;
    out(c) = dgami.cwiseProduct(A).sum() + gami.cwiseProduct(dA).sum();
  }
  return out;
}

Christoffel christoffel(const MetricField& field, const Vec& x, double h, Side side) {
  DerivativePolicy p;
  p.h = h;
  return christoffel(metric_jet(field, x, 1, side, p));
}

double scalar_curvature(const MetricField& field, const Vec& x, double h, Side side) {
  if (const auto& a = field.adapted(); a && a->covers(x)) {
    auto [xs, t] = a->locate(x);
    return scalar_curvature(a->adapted_jet(xs, t, 2, h, side));
  }
  DerivativePolicy p;
  p.h = h;
  return scalar_curvature(metric_jet(field, x, 2, side, p));
}

Christoffel cartesian_christoffel(const MetricField& field, const Vec& x, double h,
                                  double band_step) {
  DerivativePolicy p;
  p.h = h;
  if (const auto& a = field.adapted(); a && a->covers(x)) {
    p.h = band_step;
    p.prefer_exact = false;
  }
  return christoffel(metric_jet(field, x, 1, Side::automatic, p));
}

double laplacian(const MetricField& field, const ScalarJet& u, const Vec& x, double h) {
  const int n = field.dim();
  const Christoffel G = cartesian_christoffel(field, x, h);
  const Mat gi = field.eval(x).inverse();
  double lap = 0.0;
  for (int a = 0; a < n; ++a)
    for (int b = 0; b < n; ++b) {
      double t = u.d2(a, b);
      for (int c = 0; c < n; ++c) t -= G(c, a, b) * u.d[c];
      lap += gi(a, b) * t;
    }
  return lap;
}

}  // namespace pmt
