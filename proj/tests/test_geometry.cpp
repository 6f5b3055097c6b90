#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pmt/geometry/curvature.hpp"
#include "pmt/geometry/decay.hpp"
#include "pmt/geometry/hypersurface.hpp"
#include "pmt/geometry/metric_field.hpp"
#include "pmt/geometry/scalar_field.hpp"
#include "pmt/quadrature.hpp"

using namespace pmt;

namespace {

constexpr double kPi = std::numbers::pi;

// u = 1 + m / (2 sqrt(r^2 + a^2)) in three dimensions
struct Cored {
  double m = 1.0, a = 1.0;
  double u(double r) const { return 1.0 + 0.5 * m / std::sqrt(r * r + a * a); }
  double du(double r) const { return -0.5 * m * r * std::pow(r * r + a * a, -1.5); }
  double d2u(double r) const {
    const double s = r * r + a * a;
    return -0.5 * m * (std::pow(s, -1.5) - 3.0 * r * r * std::pow(s, -2.5));
  }
  // R = -8 u^{-5} Lap u, Lap u = -3 m a^2 / (2 s^{5/2})
  double scalar(double r) const {
    const double s = r * r + a * a;
    return 12.0 * m * a * a * std::pow(s, -2.5) * std::pow(u(r), -5.0);
  }
};

MetricField cored_fd(const Cored& c) {
  MetricPiece p;
  p.g = [c](const Vec& x) -> Mat { return std::pow(c.u(x.norm()), 4.0) * Mat::Identity(3, 3); };
  return MetricField::analytic(3, DomainKind::half_space, p, 1.0, 2.0, "cored_fd");
}

MetricField cored_exact(const Cored& c) {
  auto piece = radial_conformal_piece(
      3, [c](double r) { return c.u(r); }, [c](double r) { return c.du(r); },
      [c](double r) { return c.d2u(r); });
  return MetricField::analytic(3, DomainKind::half_space, piece, 1.0, 2.0, "cored_exact");
}

MetricField skew_metric() {
  MetricPiece p;
  p.g = [](const Vec& x) {
    Mat g = Mat::Identity(3, 3);
    const double b = 0.1 * std::exp(-0.1 * x.squaredNorm());
    g(0, 1) = g(1, 0) = b * x(2);
    g(1, 2) = g(2, 1) = 0.5 * b * x(0);
    g(2, 2) += b * std::sin(x(1));
    return g;
  };
  return MetricField::analytic(3, DomainKind::half_space, p, 1.0, 1.0, "skew");
}

}  // namespace

TEST(Types, SphereAreaAndConstant) {
  EXPECT_NEAR(sphere_area(2), 2.0 * kPi, 1e-14);
  EXPECT_NEAR(sphere_area(3), 4.0 * kPi, 1e-14);
  EXPECT_NEAR(sphere_area(4), 2.0 * kPi * kPi, 1e-13);
  EXPECT_NEAR(sphere_area(5), 8.0 * kPi * kPi / 3.0, 1e-13);
  EXPECT_DOUBLE_EQ(conformal_constant(3), 0.125);
  EXPECT_DOUBLE_EQ(conformal_constant(4), 1.0 / 6.0);
}

TEST(GaussLegendre, ExactOnPolynomials) {
  for (int n : {2, 5, 12, 40}) {
    const GaussRule r = gauss_legendre(n, -1.0, 3.0);
    for (int k = 0; k <= 2 * n - 1; k += 3) {
      double s = 0.0;
      for (std::size_t i = 0; i < r.x.size(); ++i) s += r.w[i] * std::pow(r.x[i], k);
      const double exact = (std::pow(3.0, k + 1) - std::pow(-1.0, k + 1)) / (k + 1);
      EXPECT_NEAR(s, exact, 1e-12 * std::max(1.0, std::abs(exact))) << n << " " << k;
    }
  }
}

TEST(MetricField, ChecksDomainSymmetryAndDefiniteness) {
  const MetricField e = MetricField::analytic(3, DomainKind::quarter_space, euclidean_piece(3),
                                              std::numeric_limits<double>::infinity(), 0.0);
  EXPECT_NO_THROW(e.eval(make_vec({0.0, -1.0, 0.0})));
  EXPECT_THROW(e.eval(make_vec({-0.5, 1.0, 1.0})), DomainError);
  EXPECT_THROW(e.eval(make_vec({0.5, 1.0, -1.0})), DomainError);

  Mat bad = Mat::Identity(3, 3);
  bad(0, 1) = 0.3;
  EXPECT_THROW(check_metric_matrix(bad, make_vec({1.0, 0.0, 0.0})), GeometryError);
  Mat indefinite = Mat::Identity(3, 3);
  indefinite(2, 2) = -1.0;
  EXPECT_THROW(check_metric_matrix(indefinite, make_vec({1.0, 0.0, 0.0})), GeometryError);
}

TEST(MetricField, TwoPieceRejectsMismatch) {
  EXPECT_THROW(MetricField::two_piece(3, DomainKind::half_space, euclidean_piece(3),
                                      radial_conformal_piece(
                                          3, [](double) { return 1.1; },
                                          [](double) { return 0.0; }, [](double) { return 0.0; }),
                                      2.0, 1.0, 1.0),
               GeometryError);
}

TEST(Curvature, ChristoffelSymmetricInLowerIndices) {
  const MetricField g = skew_metric();
  for (const Vec& x : {make_vec({0.5, 1.0, -2.0}), make_vec({2.0, 0.3, 0.7})}) {
    const Christoffel c = christoffel(g, x, 1.0 / 32.0);
    for (int a = 0; a < 3; ++a)
      for (int b = 0; b < 3; ++b)
        for (int d = 0; d < 3; ++d) EXPECT_DOUBLE_EQ(c(a, b, d), c(a, d, b));
  }
}

TEST(Curvature, EuclideanIsFlat) {
  const MetricField e = MetricField::analytic(4, DomainKind::half_space, euclidean_piece(4),
                                              std::numeric_limits<double>::infinity(), 0.0);
  const Vec x = make_vec({0.0, 1.0, 2.0, -3.0});
  EXPECT_EQ(scalar_curvature(e, x, 1.0 / 16.0), 0.0);
  EXPECT_EQ(mean_curvature(e, HypersurfaceChart::face_x1(), x, 1.0 / 16.0), 0.0);
}

TEST(Curvature, CoredSchwarzschildMatchesClosedForm) {
  const Cored c;
  const MetricField fd = cored_fd(c), ex = cored_exact(c);
  for (const Vec& x : {make_vec({0.4, 0.3, -0.2}), make_vec({1.0, 1.0, 1.0}),
                       make_vec({0.0, 2.0, 0.5}), make_vec({3.0, -1.0, 2.0})}) {
    const double want = c.scalar(x.norm());
    EXPECT_NEAR(scalar_curvature(ex, x, 1.0 / 16.0), want, 1e-11) << x.transpose();
    EXPECT_NEAR(scalar_curvature(fd, x, 1.0 / 64.0), want, 1e-3 * want + 1e-6) << x.transpose();
  }
}

TEST(Curvature, FiniteDifferenceConvergesAtSecondOrder) {
  const Cored c;
  const MetricField fd = cored_fd(c);
  for (const Vec& x : {make_vec({0.6, 0.8, 0.3}), make_vec({0.0, 2.0, 0.5})}) {
    const double want = c.scalar(x.norm());
    const double e1 = std::abs(scalar_curvature(fd, x, 0.1) - want);
    const double e2 = std::abs(scalar_curvature(fd, x, 0.05) - want);
    EXPECT_GT(std::log2(e1 / e2), 1.7) << x.transpose();
  }
}

TEST(Hypersurface, FaceMeanCurvatureOfConformallyFlatMetric) {
  // g = u^4 delta, u = 1 + b x_1: H of {x_1 = 0} for the outward normal -e_1 is -4 b
  for (double b : {0.1, -0.05}) {
    MetricPiece p;
    p.g = [b](const Vec& x) -> Mat {
      return std::pow(1.0 + b * x(0), 4.0) * Mat::Identity(3, 3);
    };
    const MetricField g = MetricField::analytic(3, DomainKind::half_space, p, 1.0, 1.0);
    const Vec x = make_vec({0.0, 1.0, -2.0});
    EXPECT_NEAR(mean_curvature(g, HypersurfaceChart::face_x1(), x, 1.0 / 64.0), -4.0 * b, 1e-4);
    const CurvatureSample s = curvature_sample(g, HypersurfaceChart::face_x1(), x, 1.0 / 64.0);
    EXPECT_NEAR(s.mean, s.mean_div, 1e-4);
  }
}

TEST(Decay, SchwarzschildOrderIsRecovered) {
  const MetricField g = cored_exact(Cored{1.0, 0.0});
  std::vector<double> radii;
  for (double r = 32.0; r <= 512.0; r *= 2.0) radii.push_back(r);
  const DecayProfile d = decay_profile(g, radii, 1.0 / 16.0, 24);
  EXPECT_NEAR(d.tau_hat, 1.0, 0.1);
  EXPECT_FALSE(d.violation);
  ASSERT_EQ(d.profile.size(), radii.size());
  for (std::size_t i = 1; i < d.profile.size(); ++i) EXPECT_LT(d.profile[i], d.profile[i - 1]);
}

TEST(Decay, SectorDirectionsStayInsideTheSector) {
  for (DomainKind k : {DomainKind::half_space, DomainKind::quarter_space})
    for (int n : {3, 4}) {
      const auto dirs = sector_directions(k, n, 40);
      EXPECT_FALSE(dirs.empty());
      for (const Vec& v : dirs) {
        EXPECT_NEAR(v.norm(), 1.0, 1e-14);
        EXPECT_TRUE(contains(k, n, v));
      }
    }
}
