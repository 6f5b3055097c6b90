#include "pmt/geometry/metric_field.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "pmt/geometry/scalar_field.hpp"

namespace pmt {

namespace {

void check_tau(int n, double tau) {
  if (!(tau > 0.5 * (n - 2))) {
    std::ostringstream os;
    os << "declared decay order tau=" << tau << " must exceed (n-2)/2";
    throw GeometryError(os.str());
  }
}

std::string point_str(const Vec& x) {
  std::ostringstream os;
  os << "(";
  for (int a = 0; a < x.size(); ++a) os << (a ? ", " : "") << x(a);
  os << ")";
  return os.str();
}

}  // namespace

void check_metric_matrix(const Mat& g, const Vec& x) {
  const double scale = g.cwiseAbs().maxCoeff();
  if (!std::isfinite(scale)) throw GeometryError("non-finite metric at " + point_str(x));
  if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-13 * scale)
    throw GeometryError("asymmetric metric at " + point_str(x));
  Eigen::LLT<Mat> llt(g);
  if (llt.info() != Eigen::Success)
    throw GeometryError("metric not positive definite at " + point_str(x));
}

MetricField MetricField::analytic(int n, DomainKind kind, MetricPiece g, double tau, double C,
                                  std::string name) {
  check_tau(n, tau);
  MetricField f;
  f.n_ = n;
  f.kind_ = kind;
  f.mode_ = FieldMode::analytic;
  f.minus_ = g;
  f.plus_ = std::move(g);
  f.tau_ = tau;
  f.C_ = C;
  f.name_ = std::move(name);
  return f;
}

MetricField MetricField::sampled(int n, DomainKind kind, MetricPiece g, double tau, double C,
                                 std::string name) {
  MetricField f = analytic(n, kind, std::move(g), tau, C, std::move(name));
  f.mode_ = FieldMode::sampled;
  return f;
}

MetricField MetricField::two_piece(int n, DomainKind kind, MetricPiece minus, MetricPiece plus,
                                   double r0, double tau, double C, double match_tol,
                                   std::string name) {
  check_tau(n, tau);
  if (!(r0 > 0.0)) throw GeometryError("interface radius must be positive");
  MetricField f;
  f.n_ = n;
  f.kind_ = kind;
  f.mode_ = FieldMode::two_piece;
  f.minus_ = std::move(minus);
  f.plus_ = std::move(plus);
  f.r0_ = r0;
  f.tau_ = tau;
  f.C_ = C;
  f.match_tol_ = match_tol;
  f.name_ = std::move(name);
  double mis = f.interface_mismatch();
  if (mis > match_tol) {
    std::ostringstream os;
    os << "two-piece metric discontinuous across |x|=" << r0 << ": mismatch " << mis;
    throw GeometryError(os.str());
  }
  return f;
}

Side MetricField::resolve(const Vec& x, Side side) const {
  if (mode_ != FieldMode::two_piece) return Side::minus;
  if (side != Side::automatic) return side;
  return x.norm() <= r0_ ? Side::minus : Side::plus;
}

const MetricPiece& MetricField::piece(Side resolved) const {
  return resolved == Side::plus ? plus_ : minus_;
}

Mat MetricField::eval_raw(const Vec& x, Side side) const { return piece(resolve(x, side)).g(x); }

Mat MetricField::eval(const Vec& x, Side side) const {
  if (x.size() != n_ || !contains(kind_, n_, x))
    throw DomainError("evaluation point outside the domain: " + point_str(x));
  Mat g = eval_raw(x, side);
  check_metric_matrix(g, x);
  return g;
}

bool MetricField::has_exact_jet(Side side) const {
  if (mode_ != FieldMode::two_piece) return static_cast<bool>(minus_.jet);
  if (side == Side::automatic) return minus_.jet && plus_.jet;
  return static_cast<bool>(piece(side).jet);
}

MetricJet MetricField::exact_jet(const Vec& x, int order, Side side) const {
  const MetricPiece& p = piece(resolve(x, side));
  if (!p.jet) throw GeometryError("field '" + name_ + "' has no exact derivatives");
  return p.jet(x, order);
}

bool MetricField::is_radial() const {
  if (mode_ == FieldMode::two_piece) return minus_.radial && plus_.radial;
  return static_cast<bool>(minus_.radial);
}

double MetricField::interface_mismatch(int samples) const {
  if (mode_ != FieldMode::two_piece) return 0.0;
  double worst = 0.0;
  const double golden = M_PI * (3.0 - std::sqrt(5.0));
  for (int s = 0; s < samples; ++s) {
    // spiral points folded into the domain
    double z = 1.0 - (s + 0.5) / samples;
    double rad = std::sqrt(std::max(0.0, 1.0 - z * z));
    Vec d = Vec::Zero(n_);
    d(0) = std::abs(z);
    d(1) = rad * std::cos(golden * s);
    if (n_ > 2) d(2) = rad * std::sin(golden * s);
    if (kind_ == DomainKind::quarter_space) d(n_ - 1) = std::abs(d(n_ - 1));
    d.normalize();
    Vec x = r0_ * d;
    worst = std::max(worst, (minus_.g(x) - plus_.g(x)).cwiseAbs().maxCoeff());
  }
  return worst;
}

MetricPiece euclidean_piece(int n) {
  MetricPiece p;
  p.g = [n](const Vec&) { return Mat(Mat::Identity(n, n)); };
  p.jet = [n](const Vec&, int order) {
    MetricJet j;
    j.n = n;
    j.order = order;
    j.v = Mat::Identity(n, n);
    if (order >= 1) j.d.assign(n, Mat::Zero(n, n));
    if (order >= 2) j.dd.assign(n * n, Mat::Zero(n, n));
    return j;
  };
  auto prof = std::make_shared<RadialProfile>();
  prof->phi = [](double) { return 1.0; };
  prof->dphi = [](double) { return 0.0; };
  prof->d2phi = [](double) { return 0.0; };
  p.radial = prof;
  return p;
}

MetricPiece radial_conformal_piece(int n, std::function<double(double)> u,
                                   std::function<double(double)> du,
                                   std::function<double(double)> d2u) {
  const double p = 4.0 / (n - 2.0);
  auto prof = std::make_shared<RadialProfile>();
  prof->phi = [u, p](double r) { return std::pow(u(r), p); };
  prof->dphi = [u, du, p](double r) { return p * std::pow(u(r), p - 1.0) * du(r); };
  prof->d2phi = [u, du, d2u, p](double r) {
    double uv = u(r), d1 = du(r);
    return p * (p - 1.0) * std::pow(uv, p - 2.0) * d1 * d1 + p * std::pow(uv, p - 1.0) * d2u(r);
  };
  MetricPiece piece;
  piece.radial = prof;
  piece.g = [n, prof](const Vec& x) { return Mat(prof->phi(x.norm()) * Mat::Identity(n, n)); };
  piece.jet = [n, prof](const Vec& x, int order) {
    const double r = x.norm();
    MetricJet j;
    j.n = n;
    j.order = order;
    const Mat I = Mat::Identity(n, n);
    j.v = prof->phi(r) * I;
    if (order < 1) return j;
    j.d.assign(n, Mat::Zero(n, n));
    const bool origin = r < 1e-12;
    const double p1 = origin ? 0.0 : prof->dphi(r);
    for (int a = 0; a < n; ++a) j.d[a] = (origin ? 0.0 : p1 * x(a) / r) * I;
    if (order < 2) return j;
    j.dd.assign(n * n, Mat::Zero(n, n));
    const double p2 = prof->d2phi(r);
    for (int a = 0; a < n; ++a)
      for (int b = 0; b < n; ++b) {
        double v;
        if (origin)
          v = a == b ? p2 : 0.0;
        else
          v = p2 * x(a) * x(b) / (r * r) + p1 * ((a == b ? 1.0 / r : 0.0) - x(a) * x(b) / (r * r * r));
        j.d2(a, b) = v * I;
      }
    return j;
  };
  return piece;
}

MetricPiece conformal_piece(int n, const ScalarField& u, const MetricPiece& base) {
  const double p = 4.0 / (n - 2.0);
  MetricPiece out;
  out.g = [u, base, p](const Vec& x) {
    double uv = u(x);
    return Mat(std::pow(uv, p) * base.g(x));
  };
  if (u.has_exact_jet() && base.jet) {
    out.jet = [u, base, p, n](const Vec& x, int order) {
      ScalarJet uj = u.jet(x, order);
      MetricJet bj = base.jet(x, order);
      const double psi = std::pow(uj.v, p);
      MetricJet j;
      j.n = n;
      j.order = order;
      j.v = psi * bj.v;
      if (order < 1) return j;
      std::vector<double> ps(n);
      for (int a = 0; a < n; ++a) ps[a] = p * std::pow(uj.v, p - 1.0) * uj.d[a];
      j.d.resize(n);
      for (int a = 0; a < n; ++a) j.d[a] = ps[a] * bj.v + psi * bj.d[a];
      if (order < 2) return j;
      j.dd.resize(n * n);
      for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
          double pab = p * (p - 1.0) * std::pow(uj.v, p - 2.0) * uj.d[a] * uj.d[b] +
                       p * std::pow(uj.v, p - 1.0) * uj.d2(a, b);
          j.d2(a, b) = pab * bj.v + ps[a] * bj.d[b] + ps[b] * bj.d[a] + psi * bj.d2(a, b);
        }
      return j;
    };
  }
  return out;
}

}  // namespace pmt

namespace pmt {

MetricField MetricField::with_adapted(std::shared_ptr<const AdaptedMetric> a) const {
  MetricField f = *this;
  f.adapted_ = std::move(a);
  return f;
}

MetricField MetricField::renamed(std::string name) const {
  MetricField f = *this;
  f.name_ = std::move(name);
  return f;
}

}  // namespace pmt
