#include "pmt/elliptic/green.hpp"

#include <algorithm>
#include <cmath>

#include "pmt/quadrature.hpp"

namespace pmt {

namespace {

std::array<Vec, 4> images(const Vec& y, int n) {
  Vec yt = y, yp = y, ypt = y;
  yt(n - 1) = -y(n - 1);
  yp(0) = -y(0);
  ypt(0) = -y(0);
  ypt(n - 1) = -y(n - 1);
  return {y, yt, yp, ypt};
}

}  // namespace

double quarter_green(const Vec& x, const Vec& y, int n) {
  if ((x - y).norm() == 0.0) throw DomainError("quarter_green at coincident points");
  double g = 0.0;
  for (const Vec& z : images(y, n)) g += std::pow((x - z).norm(), 2.0 - n);
  return g;
}

Vec quarter_green_gradient(const Vec& x, const Vec& y, int n) {
  if ((x - y).norm() == 0.0) throw DomainError("quarter_green at coincident points");
  Vec g = Vec::Zero(n);
  for (const Vec& z : images(y, n)) {
    const Vec d = x - z;
    const double r = d.norm();
    g += (2.0 - n) * std::pow(r, -n) * d;
  }
  return g;
}

namespace {

// integral of f over {c + s w : w in the unit sphere of the coordinates `axes`, 0 <= s <= s_max(w)},
// s_max from x_a >= 0 on the constrained axes and |x| <= R
double polar_integral(const std::function<double(const Vec&)>& f, const Vec& c,
                      const std::vector<int>& axes, const std::vector<int>& constrained, double R,
                      int N, int radial_nodes) {
  const int n = static_cast<int>(c.size());
  const int d = static_cast<int>(axes.size());
  const auto dirs = sphere_nodes(d, 1.0, N, false, true);
  double total = 0.0;
  for (const SphereNode& dn : dirs) {
    Vec w = Vec::Zero(n);
    for (int k = 0; k < d; ++k) w(axes[k]) = dn.x(k);
    double smax = std::numeric_limits<double>::infinity();
    for (int a : constrained)
      if (w(a) < 0.0) smax = std::min(smax, -c(a) / w(a));
    // |c + s w| = R
    const double b = c.dot(w), cc = c.squaredNorm() - R * R;
    const double disc = b * b - cc;
    if (disc <= 0.0) continue;
    smax = std::min(smax, -b + std::sqrt(disc));
    if (!(smax > 0.0)) continue;
    double ray = 0.0;
    double lo = 0.0, hi = std::min(0.25, smax);
    while (lo < smax) {
      const GaussRule g = gauss_legendre(radial_nodes, lo, hi);
      for (size_t i = 0; i < g.x.size(); ++i) {
        const double s = g.x[i];
        ray += g.w[i] * std::pow(s, d - 1) * f(c + s * w);
      }
      lo = hi;
      hi = std::min(2.0 * hi, smax);
    }
    total += dn.w * ray;
  }
  return total;
}

}  // namespace

GreenRepresentation green_representation(const GreenData& data, const Vec& y,
                                         const QuadratureSpec& quad) {
  const int n = data.n;
  if (y.size() != n) throw DomainError("probe dimension mismatch");
  const double R = quad.r_outer;
  if (y(0) < 2.0 * quad.h || y(n - 1) < 2.0 * quad.h)
    throw DomainError("probe closer than 2h to a face");
  if (y.norm() > R - 2.0 * quad.h) throw DomainError("probe outside the truncated domain");
  const int N = std::clamp(quad.max_nodes / 2, quad.min_nodes, quad.max_nodes);
  const int rn = quad.radial_nodes;
  GreenRepresentation out;

  std::vector<int> all(n);
  for (int a = 0; a < n; ++a) all[a] = a;
  if (data.laplacian) {
    auto f = [&](const Vec& x) {
      if ((x - y).norm() == 0.0) return 0.0;
      return quarter_green(x, y, n) * data.laplacian(x);
    };
    out.bulk = polar_integral(f, y, all, {0, n - 1}, R, N, rn);
  }
  if (data.d1) {
    Vec c = y;
    c(0) = 0.0;
    std::vector<int> ax(all.begin() + 1, all.end());
    auto f = [&](const Vec& x) { return quarter_green(x, y, n) * data.d1(x); };
    out.face1 = polar_integral(f, c, ax, {n - 1}, R, N, rn);
  }
  if (data.dn) {
    Vec c = y;
    c(n - 1) = 0.0;
    std::vector<int> ax(all.begin(), all.end() - 1);
    auto f = [&](const Vec& x) { return quarter_green(x, y, n) * data.dn(x); };
    out.face_n = polar_integral(f, c, ax, {0}, R, N, rn);
  }
  const double scale = (2.0 - n) * sphere_area(n);
  out.value = (out.bulk + out.face1 + out.face_n) / scale;
  out.tail_bound = data.amplitude * (2.0 + std::abs(data.gamma)) * std::pow(R, data.gamma) / (n - 2.0);
  return out;
}

}  // namespace pmt
