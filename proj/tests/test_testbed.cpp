#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "pmt/geometry/hypersurface.hpp"
#include "pmt/testbed/config.hpp"
#include "pmt/testbed/expression.hpp"
#include "pmt/testbed/pipeline.hpp"

using namespace pmt;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream f(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

std::filesystem::path scratch_dir(const std::string& name) {
  auto p = std::filesystem::temp_directory_path() / ("pmtlab_" + name);
  std::filesystem::remove_all(p);
  std::filesystem::create_directories(p);
  return p;
}

}  // namespace

TEST(Expression, ArithmeticAndPrecedence) {
  const Vec x = make_vec({1.0, 2.0, 2.0});
  EXPECT_DOUBLE_EQ(Expression::parse("1 + 2 * 3", 3)(x), 7.0);
  EXPECT_DOUBLE_EQ(Expression::parse("(1 + 2) * 3", 3)(x), 9.0);
  EXPECT_DOUBLE_EQ(Expression::parse("2 ^ 3 ^ 2", 3)(x), 512.0);
  EXPECT_DOUBLE_EQ(Expression::parse("-2 ^ 2", 3)(x), -4.0);
  EXPECT_DOUBLE_EQ(Expression::parse("8 / 4 / 2", 3)(x), 1.0);
  EXPECT_DOUBLE_EQ(Expression::parse("r", 3)(x), 3.0);
  EXPECT_DOUBLE_EQ(Expression::parse("x1 + 10 * x2 + 100 * x3", 3)(x), 221.0);
  EXPECT_DOUBLE_EQ(Expression::parse("sqrt(x3 * 8) + abs(-x1) + exp(0) + log(1)", 3)(x), 6.0);
  EXPECT_NEAR(Expression::parse("sin(x1)^2 + cos(x1)^2", 3)(x), 1.0, 1e-15);
  EXPECT_DOUBLE_EQ(Expression::parse("1.5e1", 3)(x), 15.0);
}

TEST(Expression, BindsParameters) {
  const Expression e = Expression::parse("1 + m / (2 * r)", 3, {{"m", 2.0}});
  EXPECT_DOUBLE_EQ(e(make_vec({0.0, 0.0, 4.0})), 1.25);
}

TEST(Expression, RejectsMalformedInput) {
  EXPECT_THROW(Expression::parse("1 +", 3), ConfigError);
  EXPECT_THROW(Expression::parse("(1 + 2", 3), ConfigError);
  EXPECT_THROW(Expression::parse("1 2", 3), ConfigError);
  EXPECT_THROW(Expression::parse("q * 2", 3), ConfigError);
  EXPECT_THROW(Expression::parse("x4", 3), ConfigError);
  EXPECT_THROW(Expression::parse("x0", 3), ConfigError);
  EXPECT_THROW(Expression::parse("tan(1)", 3), ConfigError);
  EXPECT_THROW(Expression::parse("1 $ 2", 3), ConfigError);
}

TEST(Scenario, EuclideanIsIdentityWithInfiniteTau) {
  Domain d;
  const MetricField g = builtin_metric(ScenarioKind::euclidean, {}, d);
  EXPECT_TRUE(std::isinf(g.tau()));
  EXPECT_EQ(g.eval(make_vec({1.0, -2.0, 3.0})), Mat(Mat::Identity(3, 3)));
}

TEST(Scenario, SchwarzschildCoefficients) {
  Domain d;
  const MetricField g = builtin_metric(ScenarioKind::schwarzschild_half, {{"m", 1.0}}, d);
  const double u = 1.0 + 1.0 / (2.0 * 5.0);
  const Mat G = g.eval(make_vec({3.0, 4.0, 0.0}));
  EXPECT_NEAR(G(0, 0), std::pow(u, 4), 1e-14);
  EXPECT_NEAR(G(0, 1), 0.0, 1e-15);
  EXPECT_DOUBLE_EQ(g.tau(), 1.0);
}

TEST(Scenario, GluedIsContinuousWithMeanCurvatureJump) {
  Domain d;
  const MetricField g = builtin_metric(ScenarioKind::glued_schwarzschild_flat, {{"m", 1.0}, {"r0", 2.0}}, d);
  EXPECT_EQ(g.mode(), FieldMode::two_piece);
  EXPECT_LT(g.interface_mismatch(), 1e-12);
  // H of {r = r0} for u^4 delta is (2/r + 4u'/u) / u^2; u' = 0 inside, -m/(2r^2) outside
  const double r0 = 2.0, u = 1.25;
  const double H_minus = (2.0 / r0) / (u * u);
  const double H_plus = (2.0 / r0 + 4.0 * (-1.0 / (2.0 * r0 * r0)) / u) / (u * u);
  EXPECT_GT(H_minus, H_plus);
  const MetricJet jm = g.exact_jet(make_vec({2.0, 0.0, 0.0}), 1, Side::minus);
  const MetricJet jp = g.exact_jet(make_vec({2.0, 0.0, 0.0}), 1, Side::plus);
  EXPECT_NEAR(jm.d[0](1, 1), 0.0, 1e-14);
  EXPECT_NEAR(jp.d[0](1, 1), 4.0 * std::pow(u, 3) * (-1.0 / 8.0), 1e-12);
  const ScenarioTraits t = scenario_traits(ScenarioKind::glued_schwarzschild_flat, {}, d);
  EXPECT_TRUE(t.strict_jump);
  EXPECT_NEAR(t.expected_mass, 8.0 * M_PI, 1e-12);
}

TEST(Scenario, CompactPerturbationVanishesOutsideSupport) {
  Domain d;
  const MetricField g = builtin_metric(ScenarioKind::compact_perturbation, {{"eps", 0.1}}, d);
  EXPECT_EQ(g.eval(make_vec({4.0, 0.0, 0.0})), Mat(Mat::Identity(3, 3)));
  EXPECT_GT(std::abs(g.eval(make_vec({1.5, 0.0, 0.0}))(0, 1)), 0.05);
}

TEST(Scenario, QuarterSchwarzschildFacesAreTotallyGeodesic) {
  Domain d;
  d.kind = DomainKind::quarter_space;
  const MetricField g = builtin_metric(ScenarioKind::quarter_schwarzschild, {}, d);
  const Vec x = make_vec({1.0, 2.0, 0.0});
  EXPECT_NEAR(mean_curvature(g, HypersurfaceChart::face_xn(), x, 1.0 / 16.0), 0.0, 1e-12);
}

TEST(Scenario, CustomExpressionIsConformallyFlat) {
  Domain d;
  const MetricField g =
      builtin_metric(ScenarioKind::custom_expression, {{"m", 1.0}}, d, "1 + m / (2 * sqrt(r^2 + 1))");
  const Vec x = make_vec({1.0, 1.0, 1.0});
  const double u = 1.0 + 1.0 / (2.0 * 2.0);
  EXPECT_NEAR(g.eval(x)(2, 2), std::pow(u, 4), 1e-14);
  EXPECT_THROW(builtin_metric(ScenarioKind::custom_expression, {}, d, ""), ConfigError);
  const MetricField bad = builtin_metric(ScenarioKind::custom_expression, {}, d, "x2");
  EXPECT_THROW(bad.eval(make_vec({1.0, -1.0, 0.0})), Error);
}

TEST(Scenario, RejectsInvalidParameters) {
  Domain half, quarter;
  quarter.kind = DomainKind::quarter_space;
  EXPECT_THROW(builtin_metric(ScenarioKind::schwarzschild_half, {{"m", -1.0}}, half), ConfigError);
  EXPECT_THROW(builtin_metric(ScenarioKind::schwarzschild_half, {{"q", 1.0}}, half), ConfigError);
  EXPECT_THROW(builtin_metric(ScenarioKind::glued_schwarzschild_flat, {{"r0", 0.5}}, half), ConfigError);
  EXPECT_THROW(builtin_metric(ScenarioKind::quarter_schwarzschild, {}, half), ConfigError);
  EXPECT_THROW(builtin_metric(ScenarioKind::quarter_schwarzschild, {{"a", 0.0}}, quarter), ConfigError);
  EXPECT_THROW(builtin_metric(ScenarioKind::compact_perturbation, {{"eps", 0.5}}, half), ConfigError);
  EXPECT_THROW(scenario_kind_from_string("kerr"), ConfigError);
}

TEST(Config, ParsesDocument) {
  const ScenarioConfig c = parse_config(R"(
name: test
scenario: glued_schwarzschild_flat
params: {m: 2.0}
domain: {kind: half_space, n: 3, r_inner: 2.0, r_outer: 12.0, h: 0.125}
mollifier: {deltas: [0.2, 0.1]}
grid: {L: 6.0, h: 0.5}
flatten: {R_cut: 3.0}
pipeline: [build, mass]
tolerances: {mass_relative: 0.01}
)");
  EXPECT_EQ(c.name, "test");
  EXPECT_EQ(c.scenario, ScenarioKind::glued_schwarzschild_flat);
  EXPECT_DOUBLE_EQ(c.params.at("m"), 2.0);
  EXPECT_DOUBLE_EQ(c.domain.r_outer, 12.0);
  EXPECT_EQ(c.deltas, (std::vector<double>{0.2, 0.1}));
  EXPECT_DOUBLE_EQ(c.grid_L, 6.0);
  EXPECT_DOUBLE_EQ(c.flatten_radius, 3.0);
  EXPECT_EQ(c.pipeline, (std::vector<std::string>{"build", "mass"}));
  EXPECT_DOUBLE_EQ(c.tolerances.at("mass_relative"), 0.01);
}

TEST(Config, RejectsUnknownKeysAndBadValues) {
  EXPECT_THROW(parse_config("scenario: euclidean\nfoo: 1\n"), ConfigError);
  EXPECT_THROW(parse_config("domain: {kind: sphere}\n"), Error);
  EXPECT_THROW(parse_config("domain: {n: 9}\n"), Error);
  EXPECT_THROW(parse_config("mollifier: {deltas: [-0.1]}\n"), ConfigError);
  EXPECT_THROW(parse_config("params: {m: abc}\n"), ConfigError);
  EXPECT_THROW(parse_config("scenario: [1, 2\n"), ConfigError);
}

TEST(Config, CanonicalTextRoundTripsAndHashes) {
  ScenarioConfig c;
  c.scenario = ScenarioKind::custom_expression;
  c.params = {{"m", 0.1}, {"tau", 1.0}};
  c.expression = "1 + m / (2 * r)";
  c.pipeline = {"build", "mass"};
  c.tolerances = {{"mass_relative", 1.0 / 3.0}};
  const ScenarioConfig back = parse_config(config_to_yaml(c));
  EXPECT_EQ(config_to_yaml(back), config_to_yaml(c));
  EXPECT_DOUBLE_EQ(back.tolerances.at("mass_relative"), 1.0 / 3.0);
  EXPECT_EQ(config_hash(back), config_hash(c));
  EXPECT_EQ(config_hash(c).size(), 16u);
  ScenarioConfig d = c;
  d.params["m"] = 0.1000000001;
  EXPECT_NE(config_hash(d), config_hash(c));
}

TEST(Pipeline, ResolvesNamesAndDependencies) {
  EXPECT_EQ(resolve_pipeline({"theorem-1"}).front(), "build");
  EXPECT_EQ(resolve_pipeline({"acceptance"}).size(), 11u);
  EXPECT_EQ(resolve_pipeline({"mass"}), (std::vector<std::string>{"build", "mass"}));
  EXPECT_EQ(resolve_pipeline({"criterion-4"}), (std::vector<std::string>{"criterion-4"}));
  EXPECT_THROW(resolve_pipeline({"build", "mollify"}), ConfigError);
  EXPECT_THROW(resolve_pipeline({"mass", "build"}), ConfigError);
  EXPECT_THROW(resolve_pipeline({"build", "build"}), ConfigError);
  EXPECT_THROW(resolve_pipeline({"build", "teleport"}), ConfigError);
  EXPECT_THROW(resolve_pipeline({}), ConfigError);
  EXPECT_THROW(resolve_pipeline({"criterion-12"}), ConfigError);
  EXPECT_THROW(merged_tolerances({{"no_such_tolerance", 1.0}}), ConfigError);
}

TEST(Pipeline, EuclideanTheoremOnePasses) {
  ScenarioConfig c;
  c.pipeline = {"theorem-1"};
  const Report r = run_pipeline(c);
  EXPECT_TRUE(r.passed());
  for (const StageResult& s : r.stages)
    EXPECT_TRUE(s.status == StageStatus::passed || s.status == StageStatus::skipped) << s.name;
  EXPECT_EQ(r.stage("collar")->status, StageStatus::skipped);
  EXPECT_EQ(r.stage("shift")->status, StageStatus::skipped);
  ASSERT_FALSE(r.series.empty());
  for (const MassSample& m : r.series.front().samples) EXPECT_EQ(m.total, 0.0);
  EXPECT_EQ(r.stage("positivity")->find("m")->value, 0.0);
}

TEST(Pipeline, StageErrorsNameTheStageAndSkipTheRest) {
  ScenarioConfig c;
  c.scenario = ScenarioKind::custom_expression;
  c.expression = "x2";  // not positive on the domain
  c.pipeline = {"build", "mass", "positivity"};
  const Report r = run_pipeline(c);
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.stage("mass")->status, StageStatus::error);
  EXPECT_NE(r.stage("mass")->message.find("mass"), std::string::npos);
  EXPECT_EQ(r.stage("positivity")->status, StageStatus::skipped);
}

TEST(Pipeline, IsDeterministic) {
  ScenarioConfig c;
  c.scenario = ScenarioKind::schwarzschild_half;
  c.pipeline = {"build", "decay", "curvature", "mass", "positivity"};
  Report a = run_pipeline(c), b = run_pipeline(c);
  EXPECT_TRUE(same_report(a, b));
  EXPECT_TRUE(a.passed());
  for (Report* r : {&a, &b})
    for (auto& s : r->stages) s.seconds = 0.0;
  EXPECT_EQ(report_to_json(a), report_to_json(b));
}

TEST(Report, JsonRoundTrip) {
  ScenarioConfig c;
  c.scenario = ScenarioKind::schwarzschild_half;
  c.pipeline = {"build", "mass"};
  Report r = run_pipeline(c);
  r.stages.front().add(make_check("infinite", std::numeric_limits<double>::infinity(), Relation::ge, 0.0));
  const Report back = report_from_json(report_to_json(r));
  EXPECT_TRUE(same_report(r, back));
  EXPECT_EQ(report_to_json(back), report_to_json(r));
}

TEST(Report, EveryEntryCarriesToleranceAndFlag) {
  const Check a = make_check("x", 1.0, Relation::le, 0.5);
  EXPECT_FALSE(a.pass);
  EXPECT_TRUE(make_check("x", 0.5, Relation::le, 0.5).pass);
  EXPECT_FALSE(make_check("x", 0.5, Relation::lt, 0.5).pass);
  EXPECT_TRUE(make_check("x", std::nan(""), Relation::record, 0.0).pass);
  EXPECT_FALSE(make_check("x", std::nan(""), Relation::ge, 0.0).pass);
  EXPECT_TRUE(std::isnan(make_record("y", 2.0).tolerance));
}

TEST(Report, EmptyReportIsAValidDocument) {
  const Report r;
  const Report back = report_from_json(report_to_json(r));
  EXPECT_TRUE(same_report(r, back));
  EXPECT_TRUE(back.passed());
  const auto dir = scratch_dir("empty");
  const auto files = emit_report(r, ReportFormat::csv, (dir / "empty.csv").string());
  ASSERT_EQ(files.size(), 1u);
  EXPECT_EQ(slurp(files.front()), "rho,flux,total\n");
}

TEST(Report, EmitsDocumentAndOneCsvPerSeries) {
  Report r;
  r.pipeline = "mass";
  MassSeries s;
  s.name = "mass_g";
  MassSample m;
  m.rho = 0.1;
  m.flux_term = 1.0 / 3.0;
  m.boundary_terms = {0.25, -0.5};
  m.total = 1.0 / 3.0 - 0.25;
  s.samples = {m};
  r.series = {s, s};
  r.series[1].name = "mass_h";
  const auto dir = scratch_dir("emit");
  const auto files = emit_report(r, ReportFormat::json, (dir / "out.json").string());
  ASSERT_EQ(files.size(), 3u);
  EXPECT_TRUE(same_report(report_from_json(slurp(files[0])), r));
  const std::string csv = slurp((dir / "out.mass_g.csv").string());
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "rho,flux,boundary_1,boundary_2,total");
  EXPECT_NE(csv.find("0.33333333333333331"), std::string::npos);
  EXPECT_THROW(emit_report(r, ReportFormat::json, "/nonexistent_dir/x/out.json"), Error);
}
