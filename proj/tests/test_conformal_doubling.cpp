#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <optional>

#include "pmt/conformal/conformal.hpp"
#include "pmt/doubling/doubling.hpp"
#include "pmt/geometry/curvature.hpp"
#include "pmt/geometry/hypersurface.hpp"
#include "pmt/geometry/metric_field.hpp"
#include "pmt/mass/mass.hpp"

using namespace pmt;

namespace {

constexpr double kPi = std::numbers::pi;

MetricField skew(DomainKind k) {
  MetricPiece p;
  p.g = [](const Vec& x) {
    Mat g = Mat::Identity(3, 3);
    const double b = 0.1 * std::exp(-0.1 * x.squaredNorm());
    g(0, 1) = g(1, 0) = b * std::cos(x(2));
    g(1, 2) = g(2, 1) = 0.5 * b * x(0);
    g(2, 2) += b;
    return g;
  };
  return MetricField::analytic(3, k, p, 1.0, 1.0, "skew");
}

ConformalFactor gaussian_factor(double amp) {
  ConformalFactor u;
  u.u.f = [amp](const Vec& x) {
    return 1.0 + amp * std::exp(-(x - make_vec({0.5, 0.3, 0.4})).squaredNorm());
  };
  u.gamma = -1.0;
  return u;
}

MetricField quarter_schwarzschild(double m, double a) {
  auto u = [=](double r) { return 1.0 + 0.5 * m / std::sqrt(r * r + a * a); };
  auto du = [=](double r) { return -0.5 * m * r * std::pow(r * r + a * a, -1.5); };
  auto d2u = [=](double r) {
    const double s = r * r + a * a;
    return -0.5 * m * (std::pow(s, -1.5) - 3.0 * r * r * std::pow(s, -2.5));
  };
  return MetricField::analytic(3, DomainKind::quarter_space, radial_conformal_piece(3, u, du, d2u),
                               1.0, 2.0 * m, "quarter_schwarzschild");
}

Domain quarter_domain() {
  Domain d;
  d.kind = DomainKind::quarter_space;
  d.n = 3;
  d.r_outer = 16.0;
  d.h = 1.0 / 16.0;
  return d;
}

const FlatteningResult& flattened() {
  static const FlatteningResult r =
      conformally_flatten(quarter_schwarzschild(1.0, 1.0), 4.0, quarter_domain());
  return r;
}

}  // namespace

TEST(Conformal, ScalarLawAgreesWithDirectCurvature) {
  const MetricField g = skew(DomainKind::half_space);
  const ConformalFactor u = gaussian_factor(0.3);
  const MetricField gt = conformal_field(g, u);
  for (const Vec& x : {make_vec({0.4, 0.2, 0.5}), make_vec({1.2, -0.3, 0.1})}) {
    const double law = conformal_scalar(g, u, x, 1.0 / 64.0);
    const double direct = scalar_curvature(gt, x, 1.0 / 64.0);
    EXPECT_NEAR(law, direct, 2e-3 * std::max(1.0, std::abs(direct))) << x.transpose();
  }
}

TEST(Conformal, MeanCurvatureLawAndDisplayedFactor) {
  const MetricField g = skew(DomainKind::quarter_space);
  const ConformalFactor u = gaussian_factor(0.3);
  const MetricField gt = conformal_field(g, u);
  const double h = 1.0 / 64.0;
  for (const auto& surf : {HypersurfaceChart::face_x1(), HypersurfaceChart::face_xn()}) {
    const Vec x = surf.kind == SurfaceKind::boundary_face_x1 ? make_vec({0.0, 0.4, 0.6})
                                                             : make_vec({0.7, -0.2, 0.0});
    const MeanCurvaturePair p = conformal_mean_curvature(g, u, surf, x, h);
    EXPECT_NEAR(p.displayed, p.trace * 2.0 / 2.0, 1e-14 * std::abs(p.trace));
    EXPECT_NEAR(p.trace, mean_curvature(gt, surf, x, h), 1e-3);
  }
}

TEST(Conformal, DisplayedFactorInFourDimensions) {
  const MetricField g = MetricField::analytic(4, DomainKind::half_space, euclidean_piece(4), 2.0, 1.0);
  ConformalFactor u;
  u.u.f = [](const Vec& x) { return 1.0 + 0.2 * x(0) + 0.1 * x(1) * x(1); };
  const MeanCurvaturePair p =
      conformal_mean_curvature(g, u, HypersurfaceChart::face_x1(), make_vec({0.0, 0.5, 1.0, 0.2}),
                               1.0 / 32.0);
  EXPECT_NE(p.trace, 0.0);
  EXPECT_NEAR(p.displayed, p.trace * 2.0 / 3.0, 1e-14 * std::abs(p.trace));
}

TEST(Conformal, DirichletEnergyOfGaussian) {
  // u = 1 + exp(-r^2) on the flat half space: kappa int |du|^2 = 8 * 8 pi int r^4 e^{-2r^2} dr
  const MetricField g = MetricField::analytic(3, DomainKind::half_space, euclidean_piece(3),
                                              std::numeric_limits<double>::infinity(), 0.0);
  ConformalFactor u;
  u.u.f = [](const Vec& x) { return 1.0 + std::exp(-x.squaredNorm()); };
  u.gamma = -1.0;
  const double radial = 3.0 * std::sqrt(kPi) / (8.0 * std::pow(2.0, 2.5));
  const double want = 8.0 * 8.0 * kPi * radial;
  std::vector<double> err;
  for (double h : {1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0}) {
    QuadratureSpec q;
    q.r_outer = 8.0;
    q.h = h;
    const MassShift e = conformal_energy(g, u, EnergyPotential::full, q);
    EXPECT_EQ(e.boundary, 0.0);
    err.push_back(std::abs(e.bulk - want));
  }
  EXPECT_LE(err.back(), 5e-4 * want);
  EXPECT_GT(std::log2(err[0] / err[1]), 1.8);
  EXPECT_GT(std::log2(err[1] / err[2]), 1.8);
}

TEST(Cutoff, ProfileAndMetric) {
  EXPECT_EQ(cutoff_jet(0.5)[0], 1.0);
  EXPECT_EQ(cutoff_jet(1.0)[0], 1.0);
  EXPECT_EQ(cutoff_jet(2.0)[0], 0.0);
  EXPECT_EQ(cutoff_jet(3.5)[0], 0.0);
  EXPECT_NEAR(cutoff_jet(1.5)[0], 0.5, 1e-15);
  const MetricField g = quarter_schwarzschild(1.0, 1.0);
  const MetricField gR = cutoff_metric(g, 2.0);
  const Vec in = make_vec({0.5, 0.5, 1.0}), out = make_vec({3.0, 2.0, 2.5});
  EXPECT_EQ(gR.eval(in), g.eval(in));
  EXPECT_EQ(gR.eval(out), Mat::Identity(3, 3));
}

TEST(Flatten, ConformallyFlatBeyondCompactSet) {
  const FlatteningResult& r = flattened();
  EXPECT_DOUBLE_EQ(r.K_radius, 8.0);
  EXPECT_LE(r.flatness_defect, 1e-12);
  EXPECT_GT(r.flatness_points, 0);
  EXPECT_TRUE(r.curvature_certificates.sign_pass);
  EXPECT_TRUE(r.curvature_certificates.vanish_pass);
  EXPECT_GT(r.v.sup_abs, 0.0);
}

TEST(Doubling, ReflectionHelpers) {
  Mat m(3, 3);
  m << 1, 2, 3, 2, 4, 5, 3, 5, 6;
  const Mat r = reflect_tensor(m);
  EXPECT_EQ(r(0, 2), -3.0);
  EXPECT_EQ(r(2, 1), -5.0);
  EXPECT_EQ(r(2, 2), 6.0);
  EXPECT_EQ(r(0, 1), 2.0);
  EXPECT_EQ(reflect_tensor(r), m);
  EXPECT_EQ(reflect_point(make_vec({1.0, 2.0, 3.0})), make_vec({1.0, 2.0, -3.0}));
}

TEST(Doubling, MassRelationIsExact) {
  const FlatteningResult& f = flattened();
  DoublingOptions o;
  o.K_radius = f.K_radius;
  const DoubledConfig d = double_manifold(f.g_eps, o);
  EXPECT_LE(d.max_second_ff, 1e-3);
  const DoubledMass m = doubled_mass_relation(d, {10.0, 12.0, 14.0});
  EXPECT_NEAR(m.ratio, 2.0, 1e-10);
  EXPECT_LE(m.max_sample_defect, 1e-10);
  EXPECT_GT(m.m_corner, 0.0);
  const C2Report c = check_c2_across_interface(d, seam_probes(3, d.K_radius, 16.0, 8), 1.0 / 16.0);
  EXPECT_TRUE(c.pass);
  EXPECT_EQ(c.cartesian_g_in, 0.0);
}

TEST(Doubling, OddContaminationIsDetected) {
  MetricPiece p;
  p.g = [](const Vec& x) {
    Mat g = Mat::Identity(3, 3);
    g(0, 0) += 0.05 * x(2) * std::exp(-x.squaredNorm() / 50.0);
    return g;
  };
  const MetricField g = MetricField::analytic(3, DomainKind::quarter_space, p, 1.0, 1.0, "odd");
  DoublingOptions o;
  EXPECT_THROW(double_manifold(g, o), DomainError);
  o.require_totally_geodesic = false;
  const DoubledConfig d = double_manifold(g, o);
  EXPECT_GT(d.max_second_ff, 1e-3);
  const C2Report c = check_c2_across_interface(d, seam_probes(3, 0.0, 16.0, 8), 1.0 / 16.0);
  EXPECT_FALSE(c.pass);
  EXPECT_GT(c.derivative_jump, 1e-3);
}

TEST(Doubling, OrthogonalityOfSphereAndFace) {
  const MetricField g = quarter_schwarzschild(1.0, 1.0);
  EXPECT_LE(orthogonality_defect(g, 2.0), 1e-12);
}
