#include <benchmark/benchmark.h>

#include <cmath>
#include <memory>

#include "pmt/collar/collar.hpp"
#include "pmt/collar/mollify.hpp"
#include "pmt/elliptic/robin.hpp"
#include "pmt/geometry/curvature.hpp"
#include "pmt/geometry/domain.hpp"
#include "pmt/geometry/metric_field.hpp"
#include "pmt/mass/mass.hpp"

using namespace pmt;

namespace {

MetricPiece schwarzschild(double m) {
  return radial_conformal_piece(
      3, [m](double r) { return 1.0 + 0.5 * m / r; },
      [m](double r) { return -0.5 * m / (r * r); }, [m](double r) { return m / (r * r * r); });
}

MetricField half_schwarzschild() {
  return MetricField::analytic(3, DomainKind::half_space, schwarzschild(1.0), 1.0, 2.0);
}

MetricField glued() {
  const double U0 = 1.25;
  auto inner = radial_conformal_piece(
      3, [U0](double) { return U0; }, [](double) { return 0.0; }, [](double) { return 0.0; });
  return MetricField::two_piece(3, DomainKind::half_space, inner, schwarzschild(1.0), 2.0, 1.0, 2.0);
}

void BM_MassAtRadius(benchmark::State& st) {
  const MetricField g = half_schwarzschild();
  for (auto _ : st) benchmark::DoNotOptimize(mass_at_radius(g, static_cast<double>(st.range(0))));
}
BENCHMARK(BM_MassAtRadius)->Arg(4)->Arg(12);

void BM_ScalarCurvatureFd(benchmark::State& st) {
  MetricPiece p;
  p.g = [](const Vec& x) -> Mat {
    return std::pow(1.0 + 0.5 / x.norm(), 4.0) * Mat::Identity(3, 3);
  };
  const MetricField g = MetricField::analytic(3, DomainKind::half_space, p, 1.0, 2.0);
  const Vec x = make_vec({0.7, 1.1, -0.4});
  for (auto _ : st) benchmark::DoNotOptimize(scalar_curvature(g, x, 1.0 / 32.0));
}
BENCHMARK(BM_ScalarCurvatureFd);

void BM_RobinSolve(benchmark::State& st) {
  RobinProblem p;
  p.metric = MetricField::analytic(3, DomainKind::half_space, euclidean_piece(3), 1.0, 0.0);
  p.h = ScalarField::constant(0.1);
  p.f.f = [](const Vec& x) { return std::exp(-x.squaredNorm()); };
  BvpOptions o;
  o.L = 4.0;
  o.hg = 0.5;
  for (auto _ : st) benchmark::DoNotOptimize(solve_robin_bvp(p, o).sup_abs);
}
BENCHMARK(BM_RobinSolve)->Unit(benchmark::kMillisecond);

void BM_MollifiedJet(benchmark::State& st) {
  const MetricField g = glued();
  Domain d;
  d.r_inner = 2.0;
  const auto collar = build_collar_field(g, d);
  MollifierSpec spec;
  spec.delta = 0.1;
  const MetricField fd = mollify_metric(g, collar, spec);
  const auto mm = mollified_of(fd);
  const Vec x = make_vec({0.0, 1.2, 1.6});
  for (auto _ : st) benchmark::DoNotOptimize(mm->adapted_jet(x, 1e-4, 2, 1e-2, Side::automatic));
}
BENCHMARK(BM_MollifiedJet);

}  // namespace
BENCHMARK_MAIN();
