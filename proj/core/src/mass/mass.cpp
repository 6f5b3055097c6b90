#include "pmt/mass/mass.hpp"

#include <boost/math/tools/minima.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

#include "pmt/geometry/curvature.hpp"

namespace pmt {

namespace {

void check_radius(const MetricField& field, double rho, const QuadratureSpec& q) {
  if (!(rho > 0.0) || rho > q.r_outer - 2.0 * q.h + 1e-12)
    throw DomainError("mass radius out of range: " + std::to_string(rho));
  if (field.mode() == FieldMode::two_piece && std::abs(rho - field.interface_radius()) < 2.0 * q.h)
    throw DomainError("mass radius on the interface");
}

DerivativePolicy policy_of(const QuadratureSpec& q) {
  DerivativePolicy p;
  p.h = q.h;
  return p;
}

double flux_integrand(const MetricField& field, const Vec& x, double rho,
                      const DerivativePolicy& pol) {
  const int n = field.dim();
  const MetricJet jet = metric_jet(field, x, 1, Side::automatic, pol);
  double s = 0.0;
  for (int a = 0; a < n; ++a) {
    double c = 0.0;
    for (int b = 0; b < n; ++b) c += jet.d[b](a, b) - jet.d[a](b, b);
    s += c * x(a);
  }
  return s / rho;
}

// sum_{i != axis} g_{axis,i} x_i / |x|
double face_integrand(const MetricField& field, const Vec& x, double rho, int axis) {
  const Mat g = field.eval(x);
  double s = 0.0;
  for (int i = 0; i < field.dim(); ++i)
    if (i != axis) s += g(axis, i) * x(i);
  return s / rho;
}

Vec embed(const Vec& y, int n, int axis) {
  Vec x = Vec::Zero(n);
  for (int i = 0, j = 0; i < n; ++i)
    if (i != axis) x(i) = y(j++);
  return x;
}

double face_term(const MetricField& field, double rho, int axis,
                 const std::vector<SphereNode>& nodes) {
  const int n = field.dim();
  double s = 0.0;
  for (const SphereNode& p : nodes) s += p.w * face_integrand(field, embed(p.x, n, axis), rho, axis);
  return s;
}

void sum_flux(const MetricField& field, double rho, const std::vector<SphereNode>& nodes,
              const QuadratureSpec& q, MassSample& out) {
  const DerivativePolicy pol = policy_of(q);
  for (const SphereNode& p : nodes) {
    const double v = p.w * flux_integrand(field, p.x, rho, pol);
    (p.mirrored ? out.flux_mirrored : out.flux_upper) += v;
  }
  out.flux_term = out.flux_upper + out.flux_mirrored;
  out.nodes += static_cast<int>(nodes.size());
}

void finish(MassSample& s) {
  s.total = s.flux_term;
  for (double b : s.boundary_terms) s.total += b;
}

}  // namespace

MassSample half_space_mass_at_radius(const MetricField& field, double rho,
                                     const QuadratureSpec& q) {
  if (field.kind() != DomainKind::half_space) throw DomainError("half-space mass needs a half-space field");
  check_radius(field, rho, q);
  const int n = field.dim();
  const int N = q.angular_nodes(rho);
  MassSample s;
  s.rho = rho;
  sum_flux(field, rho, sphere_nodes(n, rho, N, true, true), q, s);
  const auto bnodes = sphere_nodes(n - 1, rho, N, false, true);
  s.boundary_terms.push_back(face_term(field, rho, 0, bnodes));
  s.nodes += static_cast<int>(bnodes.size());
  finish(s);
  return s;
}

MassSample corner_mass_at_radius(const MetricField& field, double rho, const QuadratureSpec& q) {
  if (field.kind() != DomainKind::quarter_space) throw DomainError("corner mass needs a quarter-space field");
  check_radius(field, rho, q);
  const int n = field.dim();
  const int N = q.angular_nodes(rho);
  MassSample s;
  s.rho = rho;
  sum_flux(field, rho, sphere_nodes(n, rho, N, true, false), q, s);
  const auto b1 = sphere_nodes(n - 1, rho, N, false, false);
  const auto bn = sphere_nodes(n - 1, rho, N, true, true);
  s.boundary_terms.push_back(face_term(field, rho, 0, b1));
  s.boundary_terms.push_back(face_term(field, rho, n - 1, bn));
  s.nodes += static_cast<int>(b1.size() + bn.size());
  finish(s);
  return s;
}

MassSample mass_at_radius(const MetricField& field, double rho, const QuadratureSpec& q) {
  return field.kind() == DomainKind::half_space ? half_space_mass_at_radius(field, rho, q)
                                                : corner_mass_at_radius(field, rho, q);
}

std::vector<double> default_mass_radii(const QuadratureSpec& q) {
  return {q.r_outer / 4.0, q.r_outer / 2.0, q.r_outer - 2.0 * q.h};
}

MassEstimate mass_series(const MetricField& field, const std::vector<double>& radii,
                         const QuadratureSpec& q, ExtrapolationModel model) {
  std::vector<MassSample> samples;
  for (double r : radii) samples.push_back(mass_at_radius(field, r, q));
  return extrapolate_mass(samples, model, field.tau(), field.dim());
}

namespace {

struct LinearFit {
  double m = 0.0, a = 0.0, residual = 0.0;
};

// total = m + sum_{j=1..terms} a_j rho^{-j p}
LinearFit fit_fixed_exponent(const std::vector<MassSample>& s, double p, int terms = 1) {
  const int k = static_cast<int>(s.size());
  Eigen::MatrixXd A(k, terms + 1);
  Eigen::VectorXd b(k);
  for (int i = 0; i < k; ++i) {
    A(i, 0) = 1.0;
    for (int j = 1; j <= terms; ++j) A(i, j) = std::pow(s[i].rho, -j * p);
    b(i) = s[i].total;
  }
  const Eigen::VectorXd c = A.colPivHouseholderQr().solve(b);
  LinearFit f;
  f.m = c(0);
  f.a = c(1);
  f.residual = (A * c - b).norm();
  return f;
}

}  // namespace

MassEstimate extrapolate_mass(const std::vector<MassSample>& samples, ExtrapolationModel model,
                              double tau, int n) {
  if (samples.size() < 3) throw Error("extrapolation needs at least 3 samples");
  for (size_t i = 1; i < samples.size(); ++i)
    if (!(samples[i].rho > samples[i - 1].rho)) throw Error("mass samples must increase in rho");
  MassEstimate e;
  e.samples = samples;
  double lo = samples[0].total, hi = lo, scale = 0.0;
  for (const MassSample& s : samples) {
    lo = std::min(lo, s.total);
    hi = std::max(hi, s.total);
    scale = std::max(scale, std::abs(s.total));
  }
  if (hi - lo <= 4.0 * std::numeric_limits<double>::epsilon() * scale) {
    e.m_infinity = samples.back().total;
    e.fit_exponent = 0.0;
    e.fit_residual = 0.0;
    return e;
  }
  if (model == ExtrapolationModel::richardson) {
    const double p = 2.0 * tau - n + 2.0;
    if (!(p > 0.0)) throw Error("richardson exponent must be positive");
    const int terms = std::min<int>(static_cast<int>(samples.size()) - 1, 3);
    const LinearFit f = fit_fixed_exponent(samples, p, terms);
    e.m_infinity = f.m;
    e.fit_exponent = p;
    e.fit_residual = f.residual;
    return e;
  }
  auto objective = [&](double p) { return fit_fixed_exponent(samples, p).residual; };
  const auto best = boost::math::tools::brent_find_minima(objective, 0.05, 8.0, 52);
  double p = best.first;
  LinearFit f = fit_fixed_exponent(samples, p);
  // Gauss-Newton polish on (m, a, p)
  const int k = static_cast<int>(samples.size());
  double m = f.m, a = f.a;
  for (int it = 0; it < 50; ++it) {
    Eigen::MatrixXd J(k, 3);
    Eigen::VectorXd r(k);
    for (int i = 0; i < k; ++i) {
      const double rp = std::pow(samples[i].rho, -p);
      r(i) = m + a * rp - samples[i].total;
      J(i, 0) = 1.0;
      J(i, 1) = rp;
      J(i, 2) = -a * rp * std::log(samples[i].rho);
    }
    const Eigen::VectorXd step = J.colPivHouseholderQr().solve(-r);
    if (!step.allFinite()) break;
    const double pn = p + step(2);
    if (!(pn > 0.0)) break;
    m += step(0);
    a += step(1);
    p = pn;
    if (step.norm() < 1e-15 * (1.0 + std::abs(m) + std::abs(a) + p)) break;
  }
  double res = 0.0;
  for (int i = 0; i < k; ++i) {
    const double d = m + a * std::pow(samples[i].rho, -p) - samples[i].total;
    res += d * d;
  }
  res = std::sqrt(res);
  if (std::isfinite(res) && res <= f.residual) {
    e.m_infinity = m;
    e.fit_exponent = p;
    e.fit_residual = res;
  } else {
    e.m_infinity = f.m;
    e.fit_exponent = best.first;
    e.fit_residual = f.residual;
  }
  return e;
}

}  // namespace pmt
