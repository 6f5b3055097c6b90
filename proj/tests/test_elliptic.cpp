#include <gtest/gtest.h>

#include <cmath>
#include <memory>

#include "pmt/elliptic/green.hpp"
#include "pmt/elliptic/grid.hpp"
#include "pmt/elliptic/robin.hpp"
#include "pmt/elliptic/weighted.hpp"
#include "pmt/geometry/metric_field.hpp"

using namespace pmt;

namespace {

MetricField flat(DomainKind k) {
  return MetricField::analytic(3, k, euclidean_piece(3), std::numeric_limits<double>::infinity(),
                               0.0);
}

ScalarField bump_field() {
  ScalarField w;
  w.f = [](const Vec& x) {
    return std::exp(-(x - make_vec({0.5, 0.2, 0.6})).squaredNorm() / 2.0) * (1.0 + 0.2 * x(1));
  };
  return w;
}

RobinProblem manufactured(const MetricField& g, const ScalarField& w) {
  RobinProblem p;
  p.metric = g;
  p.h = ScalarField::constant(0.25);
  p.h1 = ScalarField::constant(0.5);
  p.h2 = ScalarField::constant(1.0);
  p.f.f = [=](const Vec& x) { return continuous_operator(g, w, p.h, x); };
  p.f1.f = [=](const Vec& x) { return continuous_boundary_operator(g, w, p.h1, 0, x); };
  p.f2.f = [=](const Vec& x) { return continuous_boundary_operator(g, w, p.h2, 2, x); };
  p.dirichlet = w;
  return p;
}

double nodal_error(const BvpSolution& s, const ScalarField& w) {
  double e = 0.0;
  const Grid& G = s.w->grid();
  for (int i = 0; i < G.size(); ++i) e = std::max(e, std::abs(s.w->values()[i] - w(G.point(i))));
  return e;
}

}  // namespace

TEST(Grid, IndexRoundTripAndFaces) {
  const Grid g(3, DomainKind::quarter_space, 2.5, 0.5);
  EXPECT_EQ(g.extent(0), 6);
  EXPECT_EQ(g.extent(1), 11);
  EXPECT_EQ(g.extent(2), 6);
  EXPECT_EQ(g.size(), 6 * 11 * 6);
  for (int i = 0; i < g.size(); i += 7) {
    EXPECT_EQ(g.index(g.multi(i)), i);
    const Vec x = g.point(i);
    EXPECT_TRUE(contains(DomainKind::quarter_space, 3, x));
    EXPECT_EQ(g.on_face(i, 0), x(0) == 0.0);
    EXPECT_EQ(g.on_face(i, 2), x(2) == 0.0);
  }
}

TEST(Grid, HatWeightsReproduceAffineFunctions) {
  const Grid g(3, DomainKind::half_space, 2.5, 0.5);
  auto f = [](const Vec& x) { return 1.0 + 2.0 * x(0) - x(1) + 0.5 * x(2); };
  for (const Vec& x : {make_vec({0.3, -1.1, 0.7}), make_vec({1.9, 1.2, -1.6})}) {
    double s = 0.0, w = 0.0;
    for (const auto& [i, c] : g.hat_weights(x)) {
      s += c * f(g.point(i));
      w += c;
    }
    EXPECT_NEAR(w, 1.0, 1e-14);
    EXPECT_NEAR(s, f(x), 1e-13);
  }
}

TEST(GridFunction, CubicInterpolationIsExactOnCubics) {
  auto grid = std::make_shared<const Grid>(3, DomainKind::half_space, 3.0, 0.25);
  auto f = [](const Vec& x) { return x(0) * x(0) * x(1) - 0.5 * x(2) * x(2) * x(2) + x(1); };
  std::vector<double> v(grid->size());
  for (int i = 0; i < grid->size(); ++i) v[i] = f(grid->point(i));
  const GridFunction gf(grid, v, -1.0);
  for (const Vec& x : {make_vec({0.8, 0.31, -0.44}), make_vec({1.13, -0.9, 0.6})}) {
    EXPECT_NEAR(gf(x), f(x), 1e-12);
    const ScalarJet j = gf.jet(x, 1);
    EXPECT_NEAR(j.d[0], 2.0 * x(0) * x(1), 1e-11);
  }
}

TEST(Robin, ManufacturedQuarterSpaceConverges) {
  const MetricField g = flat(DomainKind::quarter_space);
  const ScalarField w = bump_field();
  const RobinProblem p = manufactured(g, w);
  std::vector<double> e;
  for (double hg : {0.5, 0.25}) {
    BvpOptions o;
    o.L = 3.0;
    o.hg = hg;
    const BvpSolution s = solve_robin_bvp(p, o);
    EXPECT_LE(s.linear_residual, 1e-8);
    e.push_back(nodal_error(s, w));
  }
  EXPECT_LT(e[1], e[0]);
  EXPECT_GT(std::log2(e[0] / e[1]), 1.7);
}

TEST(Robin, ZeroDataGivesZero) {
  RobinProblem p;
  p.metric = flat(DomainKind::half_space);
  p.h = ScalarField::constant(0.1);
  BvpOptions o;
  o.L = 3.0;
  o.hg = 0.5;
  EXPECT_EQ(solve_robin_bvp(p, o).sup_abs, 0.0);
}

TEST(Robin, SolutionIsLinearInTheData) {
  RobinProblem p;
  p.metric = flat(DomainKind::half_space);
  p.h = ScalarField::constant(0.1);
  p.f.f = [](const Vec& x) { return std::exp(-x.squaredNorm()); };
  BvpOptions o;
  o.L = 3.0;
  o.hg = 0.5;
  o.tol = 1e-12;
  const BvpSolution a = solve_robin_bvp(p, o);
  p.f.f = [](const Vec& x) { return 2.0 * std::exp(-x.squaredNorm()); };
  const BvpSolution b = solve_robin_bvp(p, o);
  for (int i = 0; i < a.w->grid().size(); ++i)
    EXPECT_NEAR(b.w->values()[i], 2.0 * a.w->values()[i], 1e-9);
  EXPECT_GT(a.min_value, 0.0);
}

TEST(Robin, NegativePotentialIsRejected) {
  RobinProblem p;
  p.metric = flat(DomainKind::half_space);
  p.h = ScalarField::constant(-0.1);
  BvpOptions o;
  o.L = 2.0;
  o.hg = 0.5;
  EXPECT_THROW(solve_robin_bvp(p, o), Error);
}

TEST(Green, SymmetricAndNeumannOnFaces) {
  const Vec y = make_vec({1.0, 0.5, 2.0});
  const Vec x = make_vec({0.4, -1.2, 0.9});
  EXPECT_NEAR(quarter_green(x, y, 3), quarter_green(y, x, 3), 1e-15);
  for (const Vec& f1 : {make_vec({0.0, 0.3, 1.5}), make_vec({0.0, -2.0, 0.2})}) {
    const Vec g = quarter_green_gradient(f1, y, 3);
    EXPECT_LE(std::abs(g(0)), 1e-14 * g.norm());
  }
  for (const Vec& fn : {make_vec({0.7, 0.3, 0.0}), make_vec({2.0, -1.0, 0.0})}) {
    const Vec g = quarter_green_gradient(fn, y, 3);
    EXPECT_LE(std::abs(g(2)), 1e-14 * g.norm());
  }
}

TEST(Green, HarmonicAwayFromPole) {
  const Vec y = make_vec({1.0, 0.5, 2.0});
  const Vec x = make_vec({2.0, 1.5, 0.7});
  const double h = 1e-3;
  double lap = 0.0;
  for (int a = 0; a < 3; ++a) {
    const Vec e = h * unit(3, a);
    lap += quarter_green(x + e, y, 3) - 2.0 * quarter_green(x, y, 3) + quarter_green(x - e, y, 3);
  }
  EXPECT_LE(std::abs(lap / (h * h)), 1e-5);
  const Vec g = quarter_green_gradient(x, y, 3);
  for (int a = 0; a < 3; ++a) {
    const Vec e = h * unit(3, a);
    EXPECT_NEAR(g(a), (quarter_green(x + e, y, 3) - quarter_green(x - e, y, 3)) / (2 * h), 1e-5);
  }
}

TEST(Weighted, DecayingFieldHasFiniteNorm) {
  ScalarField w;
  w.f = [](const Vec& x) { return 1.0 / std::sqrt(1.0 + x.squaredNorm()); };
  WeightedSpaceSpec s;
  s.kind = WeightedKind::Ck_gamma;
  s.k = 0;
  s.gamma = -1.0;
  WeightedNormOptions o;
  o.r_outer = 8.0;
  o.h = 0.25;
  const WeightedNorm n = weighted_norm(w, s, DomainKind::half_space, 3, o);
  EXPECT_GT(n.value, 0.7);
  EXPECT_LE(n.value, 1.0 + 1e-12);
  s.gamma = -1.5;
  EXPECT_GT(weighted_norm(w, s, DomainKind::half_space, 3, o).value, 2.0);
  s.k = 3;
  EXPECT_THROW(s.validate(), Error);
}
