#include "pmt/quadrature.hpp"

#include <cmath>
#include <map>
#include <memory>
#include <mutex>

#include "pmt/types.hpp"

namespace pmt {

namespace {

GaussRule build(int n) {
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  for (int i = 0; i < (n + 1) / 2; ++i) {
    double z = std::cos(M_PI * (i + 0.75) / (n + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
      double dz = p0 / dp;
      z -= dz;
      if (std::abs(dz) < 1e-16) break;
    }
    {
      double p0 = 1.0, p1 = 0.0;
      for (int k = 1; k <= n; ++k) {
        double p2 = p1;
        p1 = p0;
        p0 = ((2.0 * k - 1.0) * z * p1 - (k - 1.0) * p2) / k;
      }
      dp = n * (z * p0 - p1) / (z * z - 1.0);
    }
    double w = 2.0 / ((1.0 - z * z) * dp * dp);
    r.x[i] = -z;
    r.x[n - 1 - i] = z;
    r.w[i] = w;
    r.w[n - 1 - i] = w;
  }
  if (n % 2 == 1) r.x[n / 2] = 0.0;
  return r;
}

}  // namespace

const GaussRule& gauss_legendre(int n) {
  if (n < 1) throw Error("Gauss rule needs at least one node");
  static std::mutex mu;
  static std::map<int, std::unique_ptr<GaussRule>> cache;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = cache[n];
  if (!slot) slot = std::make_unique<GaussRule>(build(n));
  return *slot;
}

GaussRule gauss_legendre(int n, double a, double b) {
  const GaussRule& g = gauss_legendre(n);
  GaussRule r;
  r.x.resize(n);
  r.w.resize(n);
  const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
  for (int i = 0; i < n; ++i) {
    r.x[i] = c + hw * g.x[i];
    r.w[i] = hw * g.w[i];
  }
  return r;
}

}  // namespace pmt
