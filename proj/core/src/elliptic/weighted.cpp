#include "pmt/elliptic/weighted.hpp"

#include <algorithm>
#include <cmath>

#include "pmt/geometry/domain.hpp"

namespace pmt {

void WeightedSpaceSpec::validate() const {
  if (k < 0 || k > 2) throw DomainError("weighted norms support 0 <= k <= 2");
  if (kind == WeightedKind::Lq_k_gamma && !(q >= 1.0)) throw DomainError("q must be >= 1");
  if (kind == WeightedKind::Ck_alpha_gamma && !(alpha > 0.0 && alpha < 1.0))
    throw DomainError("alpha must lie in (0, 1)");
}

namespace {

// |grad^i w| for i = 0..k (Euclidean tensor norms)
std::array<double, 3> derivative_norms(const ScalarJet& j, int k) {
  std::array<double, 3> out{std::abs(j.v), 0.0, 0.0};
  if (k >= 1) {
    double s = 0.0;
    for (double d : j.d) s += d * d;
    out[1] = std::sqrt(s);
  }
  if (k >= 2) {
    double s = 0.0;
    for (double d : j.dd) s += d * d;
    out[2] = std::sqrt(s);
  }
  return out;
}

std::vector<double> top_tensor(const ScalarJet& j, int k) {
  if (k == 0) return {j.v};
  if (k == 1) return j.d;
  return j.dd;
}

}  // namespace

WeightedNorm weighted_norm(const ScalarField& w, const WeightedSpaceSpec& spec, DomainKind kind,
                           int n, const WeightedNormOptions& opt) {
  spec.validate();
  const double s = std::max(opt.h, opt.r_outer / 48.0);
  const int m = static_cast<int>(std::floor(opt.r_outer / s));
  const int k = spec.k;
  auto face = [&](int a) { return a == 0 || (kind == DomainKind::quarter_space && a == n - 1); };

  // lattice points of the sector inside the ball
  std::vector<Vec> pts;
  std::vector<double> vol;
  std::vector<int> idx(n);
  for (int a = 0; a < n; ++a) idx[a] = face(a) ? 0 : -m;
  while (true) {
    Vec x(n);
    double v = std::pow(s, n);
    for (int a = 0; a < n; ++a) {
      x(a) = idx[a] * s;
      if (face(a) && idx[a] == 0) v *= 0.5;
    }
    if (x.norm() <= opt.r_outer) {
      pts.push_back(x);
      vol.push_back(v);
    }
    int a = n - 1;
    while (a >= 0 && ++idx[a] > m) {
      idx[a] = face(a) ? 0 : -m;
      --a;
    }
    if (a < 0) break;
  }

  std::vector<ScalarJet> jets;
  jets.reserve(pts.size());
  for (const Vec& x : pts) jets.push_back(scalar_jet(w, x, k, opt.h, kind));

  WeightedNorm out;
  out.samples = static_cast<int>(pts.size());
  std::array<double, 3> part{0.0, 0.0, 0.0};
  const bool lq = spec.kind == WeightedKind::Lq_k_gamma;
  const bool sup = !lq || std::isinf(spec.q);
  for (size_t p = 0; p < pts.size(); ++p) {
    const double r = weight_radius(pts[p]);
    const auto d = derivative_norms(jets[p], k);
    for (int i = 0; i <= k; ++i) {
      const double v = std::pow(r, i - spec.gamma) * d[i];
      if (sup) part[i] = std::max(part[i], v);
      else part[i] += std::pow(v, spec.q) * std::pow(r, -n) * vol[p];
    }
  }
  for (int i = 0; i <= k; ++i) out.value += sup ? part[i] : std::pow(part[i], 1.0 / spec.q);

  if (spec.kind == WeightedKind::Ck_alpha_gamma) {
    // fixed pair set: lattice neighbours at offsets s and 2s along each axis
    std::vector<std::vector<int>> offsets;
    for (int a = 0; a < n; ++a)
      for (int t : {1, 2}) {
        std::vector<int> o(n, 0);
        o[a] = t;
        offsets.push_back(o);
      }
    double semi = 0.0;
    for (size_t p = 0; p < pts.size(); ++p)
      for (const auto& o : offsets) {
        Vec y = pts[p];
        for (int a = 0; a < n; ++a) y(a) += o[a] * s;
        if (y.norm() > opt.r_outer) continue;
        const double dist = (y - pts[p]).norm();
        const double rmin = std::min(weight_radius(pts[p]), weight_radius(y));
        if (dist > 0.5 * rmin) continue;
        const auto tx = top_tensor(jets[p], k);
        const auto ty = top_tensor(scalar_jet(w, y, k, opt.h, kind), k);
        double diff = 0.0;
        for (size_t c = 0; c < tx.size(); ++c) diff += (tx[c] - ty[c]) * (tx[c] - ty[c]);
        semi = std::max(semi, std::pow(rmin, -spec.gamma + k + spec.alpha) * std::sqrt(diff) /
                                  std::pow(dist, spec.alpha));
      }
    out.value += semi;
  }

  // tail from the declared decay, amplitude fitted on the outer shell
  if (!std::isnan(opt.decay)) {
    const double R = opt.r_outer;
    double amp = 0.0;
    for (size_t p = 0; p < pts.size(); ++p) {
      const double r = pts[p].norm();
      if (r < R - 1.5 * s) continue;
      const auto d = derivative_norms(jets[p], k);
      for (int i = 0; i <= k; ++i) amp = std::max(amp, d[i] * std::pow(r, i - opt.decay));
    }
    const double e = opt.decay - spec.gamma;  // r^{i-gamma} |grad^i w| ~ amp r^e
    if (sup) {
      out.tail = e > 0.0 ? std::numeric_limits<double>::infinity() : amp * std::pow(R, e) * (k + 1);
    } else if (e < 0.0) {
      const double frac = (kind == DomainKind::half_space ? 0.5 : 0.25) * sphere_area(n);
      out.tail = (k + 1) * std::pow(frac * std::pow(amp, spec.q) * std::pow(R, spec.q * e) /
                                        (-spec.q * e), 1.0 / spec.q);
    } else {
      out.tail = std::numeric_limits<double>::infinity();
    }
  }
  return out;
}

}  // namespace pmt
