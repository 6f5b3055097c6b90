#include "pmt/geometry/sigma_chart.hpp"

#include <algorithm>
#include <cmath>

namespace pmt {

Vec SigmaChart::point(const Vec& theta) const {
  Vec v = p + E * theta;
  return r0 * v / v.norm();
}

Mat SigmaChart::tangent(const Vec& theta) const {
  Vec v = p + E * theta;
  const double nv = v.norm();
  return r0 * (E / nv - v * theta.transpose() / (nv * nv * nv));
}

Mat SigmaChart::induced(const Vec& theta) const {
  const int m = n - 1;
  const double s = 1.0 + theta.squaredNorm();
  return r0 * r0 * (Mat::Identity(m, m) / s - theta * theta.transpose() / (s * s));
}

MetricJet SigmaChart::induced_jet(const Vec& th, int order) const {
  const int m = n - 1;
  const double s = 1.0 + th.squaredNorm();
  const double r2 = r0 * r0;
  auto kd = [](int a, int b) { return a == b ? 1.0 : 0.0; };
  MetricJet j;
  j.n = m;
  j.order = order;
  j.v = induced(th);
  if (order < 1) return j;
  j.d.assign(m, Mat::Zero(m, m));
  for (int k = 0; k < m; ++k)
    for (int a = 0; a < m; ++a)
      for (int b = 0; b < m; ++b) {
        double dinv = -2.0 * th(k) / (s * s);
        double dq = (kd(a, k) * th(b) + th(a) * kd(b, k)) / (s * s) -
                    4.0 * th(a) * th(b) * th(k) / (s * s * s);
        j.d[k](a, b) = r2 * (kd(a, b) * dinv - dq);
      }
  if (order < 2) return j;
  j.dd.assign(m * m, Mat::Zero(m, m));
  const double s2 = s * s, s3 = s2 * s, s4 = s3 * s;
  for (int k = 0; k < m; ++k)
    for (int l = 0; l < m; ++l)
      for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) {
          double ddinv = -2.0 * kd(k, l) / s2 + 8.0 * th(k) * th(l) / s3;
          double t1 = (kd(a, k) * kd(b, l) + kd(a, l) * kd(b, k)) / s2 -
                      4.0 * (kd(a, k) * th(b) + th(a) * kd(b, k)) * th(l) / s3;
          double t2 = -4.0 *
                          (kd(a, l) * th(b) * th(k) + th(a) * kd(b, l) * th(k) +
                           th(a) * th(b) * kd(k, l)) /
                          s3 +
                      24.0 * th(a) * th(b) * th(k) * th(l) / s4;
          j.d2(k, l)(a, b) = r2 * (kd(a, b) * ddinv - t1 - t2);
        }
  return j;
}

SigmaChart make_sigma_chart(const Vec& x, double r0, double boundary_tol) {
  const int n = static_cast<int>(x.size());
  const double nx = x.norm();
  if (!(nx > 0.0)) throw GeometryError("sigma chart at the origin");
  SigmaChart c;
  c.n = n;
  c.r0 = r0;
  c.p = x / nx;
  c.on_boundary = std::abs(c.p(0)) <= boundary_tol;
  if (c.on_boundary) c.p(0) = 0.0, c.p /= c.p.norm();
  c.E = Mat::Zero(n, n - 1);
  std::vector<Vec> basis;
  basis.push_back(c.p);
  int col = 0;
  if (c.on_boundary) {
    c.E.col(0) = unit(n, 0);
    basis.push_back(unit(n, 0));
    col = 1;
  }
  // candidates in order of increasing overlap with p
  std::vector<int> order(n);
  for (int a = 0; a < n; ++a) order[a] = a;
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return std::abs(c.p(a)) < std::abs(c.p(b)); });
  for (int a : order) {
    if (col == n - 1) break;
    Vec v = unit(n, a);
    for (int pass = 0; pass < 2; ++pass)
      for (const Vec& b : basis) v -= b.dot(v) * b;
    if (v.norm() < 1e-8) continue;
    v /= v.norm();
    c.E.col(col++) = v;
    basis.push_back(v);
  }
  if (col != n - 1) throw GeometryError("sigma chart frame construction failed");
  return c;
}

}  // namespace pmt
