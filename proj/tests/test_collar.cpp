#include <gtest/gtest.h>

#include <cmath>

#include "pmt/collar/collar.hpp"
#include "pmt/collar/control.hpp"
#include "pmt/collar/mollifier.hpp"
#include "pmt/collar/mollify.hpp"
#include "pmt/geometry/domain.hpp"
#include "pmt/geometry/metric_field.hpp"

using namespace pmt;

namespace {

// composite Simpson on [a, b]
template <class F>
double simpson(F f, double a, double b, int n = 4000) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

double us(double r, double m) { return 1.0 + 0.5 * m / r; }

// constant U0 inside r0, Schwarzschild outside, n = 3
MetricField glued(double m, double r0) {
  const double U0 = us(r0, m);
  auto inner = radial_conformal_piece(
      3, [U0](double) { return U0; }, [](double) { return 0.0; }, [](double) { return 0.0; });
  auto outer = radial_conformal_piece(
      3, [m](double r) { return us(r, m); }, [m](double r) { return -0.5 * m / (r * r); },
      [m](double r) { return m / (r * r * r); });
  return MetricField::two_piece(3, DomainKind::half_space, inner, outer, r0, 1.0, 2.0 * m);
}

Domain domain_at(double r0) {
  Domain d;
  d.n = 3;
  d.r_inner = r0;
  d.r_outer = 16.0;
  return d;
}

MetricField bumped() {
  MetricPiece p;
  p.g = [](const Vec& x) {
    Mat g = Mat::Identity(3, 3);
    const double b = 0.08 * std::exp(-0.2 * (x - make_vec({1.0, 0.5, 0.0})).squaredNorm());
    g(0, 1) = g(1, 0) = b * x(0);
    g(2, 2) += b;
    return g;
  };
  return MetricField::analytic(3, DomainKind::half_space, p, 1.0, 1.0, "bumped");
}

}  // namespace

TEST(Mollifier, SmoothStepProperties) {
  EXPECT_EQ(smooth_step_jet(-0.3)[0], 0.0);
  EXPECT_EQ(smooth_step_jet(0.0)[0], 0.0);
  EXPECT_EQ(smooth_step_jet(1.0)[0], 1.0);
  EXPECT_EQ(smooth_step_jet(1.7)[0], 1.0);
  for (double x : {0.1, 0.35, 0.5, 0.8}) {
    EXPECT_NEAR(smooth_step_jet(x)[0] + smooth_step_jet(1.0 - x)[0], 1.0, 1e-15);
    const double h = 1e-5;
    const auto j = smooth_step_jet(x);
    EXPECT_NEAR(j[1], (smooth_step_jet(x + h)[0] - smooth_step_jet(x - h)[0]) / (2 * h), 1e-8);
    EXPECT_NEAR(j[2], (smooth_step_jet(x + h)[1] - smooth_step_jet(x - h)[1]) / (2 * h), 1e-6);
    EXPECT_GE(j[1], 0.0);
  }
}

TEST(Mollifier, SigmaPlateauAndSupport) {
  for (double t : {0.0, 0.1, -0.2, 0.25, -0.25}) EXPECT_EQ(MollifierSpec::sigma(t), 0.01);
  for (double t : {0.5, -0.5, 0.7, 3.0}) EXPECT_EQ(MollifierSpec::sigma(t), 0.0);
  for (double t : {0.3, 0.4, 0.45}) {
    EXPECT_EQ(MollifierSpec::sigma(t), MollifierSpec::sigma(-t));
    EXPECT_GT(MollifierSpec::sigma(t), 0.0);
    EXPECT_LT(MollifierSpec::sigma(t), 0.01);
  }
  const MollifierSpec s{0.2};
  EXPECT_DOUBLE_EQ(s.sigma_delta(0.0), 0.01 * 0.2 * 0.2);
  EXPECT_EQ(s.sigma_delta(0.1), 0.0);
  EXPECT_DOUBLE_EQ(s.spike_half_width(), 0.2 * 0.2 / 100.0);
}

TEST(Mollifier, KernelsIntegrateToOne) {
  EXPECT_NEAR(simpson(MollifierSpec::chi, -1.0, 1.0), 1.0, 1e-9);
  EXPECT_EQ(MollifierSpec::chi(1.0), 0.0);
  EXPECT_EQ(MollifierSpec::chi(-1.2), 0.0);
  const MollifierSpec s{0.1};
  const double w = s.spike_half_width();
  EXPECT_NEAR(simpson([&](double t) { return spike_kernel(t, s); }, -w, w), 1.0, 1e-9);
  EXPECT_THROW((MollifierSpec{0.0}).validate(), Error);
}

TEST(Collar, RadialArclengthAndRoundTrip) {
  const double m = 1.0, r0 = 2.0;
  const MetricField g = glued(m, r0);
  const auto c = build_collar_field(g, domain_at(r0));
  const auto* warp = c->warp();
  ASSERT_NE(warp, nullptr);
  // t(r) = int_{r0}^r u^2 dr outside, U0^2 (r - r0) inside
  for (double r : {2.3, 2.7}) {
    const double t = simpson([&](double s) { return us(s, m) * us(s, m); }, r0, r);
    EXPECT_NEAR(warp->t_of_r(r), t, 1e-6);
  }
  EXPECT_NEAR(warp->t_of_r(1.6), -us(r0, m) * us(r0, m) * 0.4, 1e-6);
  for (const Vec& dir : {make_vec({0.0, 0.6, 0.8}), make_vec({0.48, 0.6, 0.64})})
    for (double t : {-0.4, -0.01, 0.0, 0.2, 0.6}) {
      const Vec x = r0 * dir;
      const Vec y = c->to_ambient(x, t);
      const auto [x2, t2] = c->from_ambient(y);
      EXPECT_NEAR((x2 - x).norm(), 0.0, 1e-10);
      EXPECT_NEAR(t2, t, 1e-10);
    }
}

TEST(Collar, FlowRoundTripAndUnitSpeed) {
  const MetricField g = bumped();
  CollarOptions o;
  o.force_flow = true;
  const auto c = build_collar_field(g, domain_at(3.0), o);
  for (const Vec& dir : {make_vec({0.0, 0.6, 0.8}), make_vec({0.6, 0.0, 0.8})})
    for (double t : {-0.3, 0.25}) {
      const Vec x = 3.0 * dir;
      const Vec y = c->to_ambient(x, t);
      const auto [x2, t2] = c->from_ambient(y);
      EXPECT_NEAR((x2 - x).norm(), 0.0, 1e-9);
      EXPECT_NEAR(t2, t, 1e-9);
      // |d y / dt|_g = 1
      const double e = 1e-4;
      const Vec v = (c->to_ambient(x, t + e) - c->to_ambient(x, t - e)) / (2 * e);
      EXPECT_NEAR(std::sqrt(v.dot(g.eval(y) * v)), 1.0, 1e-6);
    }
}

TEST(Collar, RejectsInterfaceNotOrthogonalToBoundary) {
  MetricPiece p;
  p.g = [](const Vec&) {
    Mat g = Mat::Identity(3, 3);
    g(0, 1) = g(1, 0) = 0.1;
    return g;
  };
  const MetricField g = MetricField::analytic(3, DomainKind::half_space, p, 1.0, 1.0);
  EXPECT_THROW(build_collar_field(g, domain_at(3.0)), GeometryError);
}

TEST(Mollify, LocalityOutsideBand) {
  const double r0 = 2.0;
  const MetricField g = glued(1.0, r0);
  const auto c = build_collar_field(g, domain_at(r0));
  const MollifierSpec spec{0.1};
  const MetricField fd = mollify_metric(g, c, spec);
  for (double t : {-0.9, -0.0502, 0.0502, 0.3, 0.9})
    for (const Vec& dir : {make_vec({0.0, 1.0, 0.0}), make_vec({0.6, 0.0, 0.8})}) {
      const Vec y = c->to_ambient(r0 * dir, t);
      EXPECT_TRUE((fd.eval(y).array() == g.eval(y).array()).all()) << t;
    }
  for (const Vec& y : {make_vec({0.5, 0.1, 0.2}), make_vec({5.0, 1.0, -3.0})})
    EXPECT_TRUE((fd.eval(y).array() == g.eval(y).array()).all());
}

TEST(Mollify, BandDifferenceShrinksQuadratically) {
  const double r0 = 2.0;
  const MetricField g = glued(1.0, r0);
  const auto c = build_collar_field(g, domain_at(r0));
  const double a = band_sup_difference(mollify_metric(g, c, MollifierSpec{0.2}), g);
  const double b = band_sup_difference(mollify_metric(g, c, MollifierSpec{0.1}), g);
  EXPECT_GT(a, 0.0);
  EXPECT_NEAR(b / a, 0.25, 0.02);
}

TEST(Control, SpikeCoefficientAgainstClosedFormJump) {
  // H of the r0-sphere: 2 / (U0^2 r0) inside, U0^{-2} (2 / r0 + 4 u'(r0) / U0) outside
  const double m = 1.0, r0 = 2.0, U0 = us(r0, m);
  const double Hm = 2.0 / (U0 * U0 * r0);
  const double Hp = (2.0 / r0 + 4.0 * (-0.5 * m / (r0 * r0)) / U0) / (U0 * U0);
  const MetricField g = glued(m, r0);
  const auto c = build_collar_field(g, domain_at(r0));
  const MollifierSpec spec{0.1};
  const MetricField fd = mollify_metric(g, c, spec);
  const CurvatureControlReport r = curvature_control_report(fd, g, *c, spec);
  ASSERT_FALSE(r.jump_samples.empty());
  for (const JumpSample& s : r.jump_samples) {
    EXPECT_NEAR(s.H_minus, Hm, 1e-8);
    EXPECT_NEAR(s.H_plus, Hp, 1e-8);
    EXPECT_NEAR(s.jump, Hm - Hp, 1e-8);
  }
  EXPECT_NEAR(r.fitted_coefficient, 2.0, 1e-3);
  EXPECT_EQ(r.boundary_mean_bound, 0.0);
}
