#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "pmt/geometry/metric_field.hpp"
#include "pmt/mass/mass.hpp"
#include "pmt/mass/quadrature.hpp"

using namespace pmt;

namespace {

constexpr double kPi = std::numbers::pi;

MetricField schwarzschild(int n, double m, DomainKind kind) {
  const double p = n - 2.0;
  auto piece = radial_conformal_piece(
      n, [m, p](double r) { return 1.0 + 0.5 * m * std::pow(r, -p); },
      [m, p](double r) { return -0.5 * m * p * std::pow(r, -p - 1.0); },
      [m, p](double r) { return 0.5 * m * p * (p + 1.0) * std::pow(r, -p - 2.0); });
  return MetricField::analytic(n, kind, piece, p, 2.0 * m, "schwarzschild");
}

}  // namespace

TEST(SphereNodes, WeightsSumToSectorArea) {
  for (int n : {3, 4})
    for (DomainKind k : {DomainKind::half_space, DomainKind::quarter_space}) {
      const double rho = 2.5;
      const auto nodes = sector_sphere_nodes(k, n, rho, 24);
      double s = 0.0;
      for (const auto& v : nodes) {
        s += v.w;
        EXPECT_NEAR(v.x.norm(), rho, 1e-12);
        EXPECT_TRUE(contains(k, n, v.x));
      }
      const double full = sphere_area(n) * std::pow(rho, n - 1);
      EXPECT_NEAR(s, full / (k == DomainKind::half_space ? 2.0 : 4.0), 1e-10 * full);
    }
}

TEST(SphereNodes, MirroredHalfIsTheImage) {
  const auto nodes = sphere_nodes(3, 1.5, 16, true, true);
  ASSERT_EQ(nodes.size() % 2, 0u);
  const std::size_t half = nodes.size() / 2;
  for (std::size_t i = 0; i < half; ++i) {
    EXPECT_FALSE(nodes[i].mirrored);
    EXPECT_TRUE(nodes[half + i].mirrored);
    Vec img = nodes[i].x;
    img(2) = -img(2);
    EXPECT_EQ(img, nodes[half + i].x);
    EXPECT_EQ(nodes[i].w, nodes[half + i].w);
  }
}

TEST(Mass, EuclideanTermsVanish) {
  for (DomainKind k : {DomainKind::half_space, DomainKind::quarter_space}) {
    const MetricField e = MetricField::analytic(3, k, euclidean_piece(3),
                                                std::numeric_limits<double>::infinity(), 0.0);
    for (double rho : {2.0, 8.0}) {
      const MassSample s = mass_at_radius(e, rho);
      EXPECT_LE(std::abs(s.total), 1e-12);
      EXPECT_LE(std::abs(s.flux_term), 1e-12);
      for (double b : s.boundary_terms) EXPECT_LE(std::abs(b), 1e-12);
    }
  }
}

TEST(Mass, SchwarzschildFluxPerRadius) {
  // sum_i (d_i g_ij - d_j g_ii) x_j / r = -(n - 1) phi'(r) with phi = u^4;
  // over the hemisphere of radius rho this gives 8 pi m u(rho)^3
  const double m = 1.0;
  const MetricField g = schwarzschild(3, m, DomainKind::half_space);
  for (double rho : {2.0, 4.0, 8.0}) {
    const MassSample s = half_space_mass_at_radius(g, rho);
    const double u = 1.0 + 0.5 * m / rho;
    EXPECT_NEAR(s.flux_term, 8.0 * kPi * m * u * u * u, 1e-10);
    for (double b : s.boundary_terms) EXPECT_LE(std::abs(b), 1e-12);
  }
}

TEST(Mass, SchwarzschildLimitAndCorner) {
  const double m = 1.0;
  const MassEstimate half = mass_series(schwarzschild(3, m, DomainKind::half_space), {2.0, 4.0, 8.0});
  EXPECT_NEAR(half.m_infinity, 8.0 * kPi * m, 5e-3 * 8.0 * kPi * m);
  const MassEstimate corner =
      mass_series(schwarzschild(3, m, DomainKind::quarter_space), {2.0, 4.0, 8.0});
  EXPECT_NEAR(corner.m_infinity, 4.0 * kPi * m, 5e-3 * 4.0 * kPi * m);
  for (std::size_t i = 0; i < half.samples.size(); ++i)
    EXPECT_NEAR(corner.samples[i].total, 0.5 * half.samples[i].total, 1e-9);
}

TEST(Mass, FourDimensionalSchwarzschild) {
  // half mass (n - 1) m |S^{n-1}|
  const double m = 0.5;
  const MassEstimate e =
      mass_series(schwarzschild(4, m, DomainKind::half_space), {2.0, 4.0, 8.0});
  const double want = 3.0 * m * sphere_area(4);
  EXPECT_NEAR(e.m_infinity, want, 5e-3 * want);
}

TEST(Mass, RichardsonRemovesSyntheticTail) {
  // tau = 1, n = 3: p = 1
  std::vector<MassSample> samples;
  for (double rho : {2.0, 4.0, 8.0, 16.0}) {
    MassSample s;
    s.rho = rho;
    s.total = 3.0 + 1.5 / rho - 0.7 / (rho * rho) + 0.2 / (rho * rho * rho);
    samples.push_back(s);
  }
  const MassEstimate r = extrapolate_mass(samples, ExtrapolationModel::richardson, 1.0, 3);
  EXPECT_NEAR(r.m_infinity, 3.0, 1e-12);
  const MassEstimate p = extrapolate_mass(
      std::vector<MassSample>(samples.begin(), samples.begin() + 3), ExtrapolationModel::power_law,
      1.0, 3);
  EXPECT_TRUE(std::isfinite(p.m_infinity));
}

TEST(Mass, PowerLawRecoversExponent) {
  std::vector<MassSample> samples;
  for (double rho : {2.0, 4.0, 8.0}) {
    MassSample s;
    s.rho = rho;
    s.total = -1.0 + 4.0 * std::pow(rho, -1.5);
    samples.push_back(s);
  }
  const MassEstimate p = extrapolate_mass(samples, ExtrapolationModel::power_law, 1.0, 3);
  EXPECT_NEAR(p.m_infinity, -1.0, 1e-9);
  EXPECT_NEAR(p.fit_exponent, 1.5, 1e-9);
}

TEST(Mass, DefaultRadiiInsideTruncation) {
  QuadratureSpec q;
  q.r_outer = 16.0;
  const auto r = default_mass_radii(q);
  ASSERT_EQ(r.size(), 3u);
  for (double x : r) EXPECT_LE(x, q.r_outer);
}
