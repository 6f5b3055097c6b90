#include <algorithm>
#include <chrono>
#include <limits>
#include <cmath>
#include <cstdio>

#include "pmt/collar/mollify.hpp"
#include "pmt/conformal/conformal.hpp"
#include "pmt/elliptic/green.hpp"
#include "pmt/geometry/gauss.hpp"
#include "pmt/testbed/pipeline.hpp"

namespace pmt {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

// min over consecutive pairs of log2(e_k / e_{k+1}) for halved steps
double observed_order(const std::vector<double>& e) {
  double p = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k + 1 < e.size(); ++k) p = std::min(p, std::log2(e[k] / e[k + 1]));
  return p;
}

void add_errors(StageResult& s, const std::string& name, const std::vector<double>& e) {
  for (std::size_t k = 0; k < e.size(); ++k)
    s.add(make_record(name + "_" + std::to_string(k), e[k]));
}

ScenarioConfig glued_config(std::vector<std::string> pipeline) {
  ScenarioConfig c;
  c.name = "glued";
  c.scenario = ScenarioKind::glued_schwarzschild_flat;
  c.params = {{"m", 1.0}, {"r0", 2.0}};
  c.pipeline = std::move(pipeline);
  return c;
}

// copies the checks of the listed stages, prefixed, and propagates errors
void absorb(StageResult& s, const Report& r, const std::vector<std::string>& stages,
            const std::string& prefix, const std::vector<std::string>& only = {}) {
  for (const StageResult& st : r.stages) {
    if (st.status == StageStatus::error) {
      s.status = StageStatus::error;
      s.message += (s.message.empty() ? "" : "; ") + prefix + st.message;
    }
    if (std::find(stages.begin(), stages.end(), st.name) == stages.end()) continue;
    for (Check c : st.checks) {
      if (!only.empty()) {
        bool keep = c.relation == Relation::record;
        for (const std::string& o : only) keep = keep || c.name.rfind(o, 0) == 0;
        if (!keep) continue;
      }
      c.name = prefix + st.name + "." + c.name;
      s.add(std::move(c));
    }
  }
}

// 1: integrands vanish identically for the Euclidean metric
void euclidean_zero(StageResult& s, const Tolerances& tol) {
  const auto t0 = Clock::now();
  double worst = 0.0;
  for (DomainKind kind : {DomainKind::half_space, DomainKind::quarter_space}) {
    Domain d;
    d.kind = kind;
    const MetricField g = builtin_metric(ScenarioKind::euclidean, {}, d);
    QuadratureSpec q;
    for (double rho : {2.0, 4.0, 8.0, 15.875}) {
      const MassSample m = mass_at_radius(g, rho, q);
      worst = std::max({worst, std::abs(m.total), std::abs(m.flux_term)});
      for (double b : m.boundary_terms) worst = std::max(worst, std::abs(b));
    }
  }
  s.add(make_check("max_abs_term", worst, Relation::le, tol.at("euclidean_zero")));
  s.add(make_check("runtime_s", seconds_since(t0), Relation::lt, tol.at("runtime_euclidean")));
}

// 2: half-space Schwarzschild against (n - 1) m |S^{n-1}| / 2 and the finite-radius flux
void schwarzschild_mass(StageResult& s, const Tolerances& tol) {
  const auto t0 = Clock::now();
  Domain d;
  const double m = 1.0;
  const MetricField g = builtin_metric(ScenarioKind::schwarzschild_half, {{"m", m}}, d);
  QuadratureSpec q;
  q.h = 1.0 / 16.0;
  q.r_outer = 16.0;
  const MassEstimate e = mass_series(g, default_mass_radii(q), q);
  const double oracle = 8.0 * M_PI * m;
  double flux_err = 0.0;
  for (const MassSample& x : e.samples) {
    const double u = 1.0 + m / (2.0 * x.rho);
    flux_err = std::max(flux_err, std::abs(x.total / (oracle * u * u * u) - 1.0));
  }
  s.add(make_record("m_extrapolated", e.m_infinity));
  s.add(make_record("m_oracle", oracle));
  s.add(make_check("relative_error", std::abs(e.m_infinity / oracle - 1.0), Relation::le, tol.at("mass_relative")));
  s.add(make_record("max_flux_relative_error", flux_err));
  s.add(make_check("runtime_s", seconds_since(t0), Relation::lt, tol.at("runtime_schwarzschild")));
}

// 3: locality and band convergence on the glued scenario
void mollifier_locality(StageResult& s, const Tolerances& tol) {
  ScenarioConfig c = glued_config({"build", "collar", "mollify"});
  c.tolerances = tol;
  absorb(s, run_pipeline(c), {"mollify"}, "");
}

// 4: spike integral against the jump, remainder and boundary mean curvature across delta
void jump_certificate(StageResult& s, const Tolerances& tol) {
  ScenarioConfig c = glued_config({"build", "collar", "mollify", "control"});
  c.tolerances = tol;
  absorb(s, run_pipeline(c), {"control"}, "");
}

MetricField generic_metric() {
  MetricPiece p;
  p.g = [](const Vec& x) {
    Mat g = Mat::Identity(3, 3);
    g(0, 1) = g(1, 0) = 0.1 * std::sin(x(2));
    g(2, 2) += 0.2 * x(0) * x(0) / (1.0 + x.squaredNorm());
    return g;
  };
  return MetricField::analytic(3, DomainKind::half_space, p, 1.0, 1.0, "generic");
}

// 5: transformation laws against curvature of the transformed metric
void conformal_cross_path(StageResult& s, const Tolerances& tol) {
  const MetricField g = generic_metric();
  ScalarField u;
  u.f = [](const Vec& x) {
    return 1.0 + 0.3 * std::exp(-0.2 * (x - make_vec({0.5, 1.0, 0.0})).squaredNorm()) + 0.1 * x(0);
  };
  const ConformalFactor U{u, -1.0};
  const MetricField gt = conformal_field(g, U);
  const Vec x = make_vec({0.7, 0.4, -0.3}), xf = make_vec({0.0, 0.4, -0.3});
  const HypersurfaceChart face = HypersurfaceChart::face_x1();
  std::vector<double> eR, eH;
  for (double h : {0.1, 0.05, 0.025}) {
    eR.push_back(std::abs(conformal_scalar(g, U, x, h) - scalar_curvature(gt, x, h)));
    eH.push_back(std::abs(conformal_mean_curvature(g, U, face, xf, h).trace -
                          mean_curvature(gt, face, xf, h)));
  }
  add_errors(s, "scalar_difference", eR);
  add_errors(s, "mean_difference", eH);
  s.add(make_check("scalar_order", observed_order(eR), Relation::ge, tol.at("order_min")));
  s.add(make_check("mean_order", observed_order(eH), Relation::ge, tol.at("order_min")));
}

// 6: Gauss decomposition residual on a radial and a non-radial analytic metric
void gauss_residual(StageResult& s, const Tolerances& tol) {
  Domain d;
  const MetricField radial = builtin_metric(ScenarioKind::schwarzschild_half, {{"m", 1.0}}, d);
  MetricPiece p;
  p.g = [](const Vec& x) {
    Mat g = Mat::Identity(3, 3);
    const double b = 0.1 * std::exp(-0.1 * x.squaredNorm());
    g(1, 2) = g(2, 1) = b * x(0) / (1.0 + x(0) * x(0));
    g(0, 0) += 0.5 * b;
    g(1, 1) += 0.2 * b * std::cos(x(1));
    return g;
  };
  const MetricField skew = MetricField::analytic(3, DomainKind::half_space, p, 1.0, 1.0, "skew");
  struct Case {
    const char* name;
    const MetricField* g;
    Vec x;
  };
  for (const Case& c : {Case{"radial", &radial, make_vec({1.2, 1.6, 0.0})},
                        Case{"flow", &skew, make_vec({1.2, 0.96, 1.28})}}) {
    const auto collar = build_collar_field(*c.g, d);
    std::vector<double> e, e_no_lapse;
    for (double h : {0.04, 0.02, 0.01}) {
      const GaussDecomposition r = gauss_scalar_decomposition(*c.g, *collar, c.x, 0.3, h);
      e.push_back(std::abs(r.residual));
      e_no_lapse.push_back(std::abs(r.residual_no_lapse));
    }
    const std::string n = c.name;
    add_errors(s, n + "_residual", e);
    add_errors(s, n + "_residual_no_lapse", e_no_lapse);
    s.add(make_check(n + "_order", observed_order(e), Relation::ge, tol.at("order_min")));
  }
}

// 7: image Green function
void green_checks(StageResult& s, const Tolerances& tol) {
  const int n = 3;
  double sym = 0.0;
  const std::vector<Vec> ys = {make_vec({1.0, 2.0, 0.5}), make_vec({0.3, -0.7, 2.0}),
                               make_vec({2.5, 0.1, 0.2})};
  for (const Vec& y : ys)
    for (double a : {0.2, 1.1, 3.0})
      for (double b : {-1.3, 0.4, 2.2}) {
        const Vec x1 = make_vec({0.0, a, std::abs(b)});
        const Vec g1 = quarter_green_gradient(x1, y, n);
        sym = std::max(sym, std::abs(g1(0)) / g1.norm());
        const Vec xn = make_vec({a, b, 0.0});
        const Vec gn = quarter_green_gradient(xn, y, n);
        sym = std::max(sym, std::abs(gn(n - 1)) / gn.norm());
      }
  s.add(make_check("face_derivative_relative", sym, Relation::le, tol.at("green_symmetry")));

  const Vec y = make_vec({1.0, 2.0, 0.5});
  const std::vector<Vec> xs = {make_vec({0.7, 0.3, 1.2}), make_vec({2.0, -1.0, 2.5}),
                               make_vec({1.5, 1.0, 1.5})};
  std::vector<double> e;
  for (double h : {0.1, 0.05, 0.025}) {
    double worst = 0.0;
    for (const Vec& x : xs) {
      double lap = -2.0 * n * quarter_green(x, y, n);
      for (int a = 0; a < n; ++a)
        for (double sgn : {-1.0, 1.0}) lap += quarter_green(x + sgn * h * unit(n, a), y, n);
      worst = std::max(worst, std::abs(lap) / (h * h));
    }
    e.push_back(worst);
  }
  add_errors(s, "harmonic_residual", e);
  s.add(make_check("harmonic_order", observed_order(e), Relation::ge, tol.at("order_min")));

  // image-symmetric smoothed potential: the face derivatives vanish, Lap is explicit
  const double w = 0.7;
  const Vec c = make_vec({1.5, 0.5, 1.5});
  auto images = [&](const Vec& z) {
    std::vector<Vec> v;
    Vec a = z;
    v.push_back(a);
    a(2) = -a(2);
    v.push_back(a);
    a(0) = -a(0);
    v.push_back(a);
    a(2) = -a(2);
    v.push_back(a);
    return v;
  };
  auto phi = [&](double r) {
    return r < 1e-12 ? 2.0 / (std::sqrt(M_PI) * w) : std::erf(r / w) / r;
  };
  auto lap = [&](double r) { return -4.0 / (std::sqrt(M_PI) * w * w * w) * std::exp(-r * r / (w * w)); };
  GreenData data;
  data.n = n;
  data.laplacian = [&](const Vec& x) {
    double t = 0.0;
    for (const Vec& z : images(c)) t += lap((x - z).norm());
    return t;
  };
  double rep = 0.0;
  for (const Vec& p : {make_vec({1.0, 0.2, 1.0}), make_vec({2.5, -1.0, 0.8}), make_vec({0.5, 3.0, 2.0})}) {
    double exact = 0.0;
    for (const Vec& z : images(c)) exact += phi((p - z).norm());
    const GreenRepresentation r = green_representation(data, p, QuadratureSpec{});
    rep = std::max(rep, std::abs(r.value / exact - 1.0));
  }
  s.add(make_check("representation_relative", rep, Relation::le, tol.at("green_representation")));
}

// 8: manufactured solution, zero data, strict positivity bounds
void bvp_checks(StageResult& s, const Tolerances& tol) {
  const int n = 3;
  Domain d;
  const MetricField g = MetricField::analytic(
      n, DomainKind::half_space,
      radial_conformal_piece(
          n, [](double r) { return std::pow(1.0 + 0.5 / std::sqrt(r * r + 1.0), 0.25); },
          [](double r) {
            const double q = 1.0 + 0.5 / std::sqrt(r * r + 1.0);
            return -0.125 * r * std::pow(r * r + 1.0, -1.5) * std::pow(q, -0.75);
          },
          [](double r) {
            const double s2 = r * r + 1.0, q = 1.0 + 0.5 / std::sqrt(s2);
            const double dq = -0.5 * r * std::pow(s2, -1.5);
            const double d2q = -0.5 * std::pow(s2, -1.5) + 1.5 * r * r * std::pow(s2, -2.5);
            return 0.25 * d2q * std::pow(q, -0.75) - 0.1875 * dq * dq * std::pow(q, -1.75);
          }),
      1.0, 1.0, "manufactured");
  ScalarField ws;
  ws.f = [](const Vec& x) {
    const Vec c = make_vec({0.7, 0.3, -0.4});
    return std::exp(-(x - c).squaredNorm() / 4.0) * (1.0 + 0.3 * x(1)) +
           0.2 * x(0) / (1.0 + x.squaredNorm());
  };
  ScalarField hh;
  hh.f = [](const Vec& x) { return 0.3 / (1.0 + x.squaredNorm()); };
  RobinProblem p;
  p.metric = g;
  p.h = hh;
  p.h1 = ScalarField::constant(0.5);
  p.f.f = [&](const Vec& x) { return continuous_operator(g, ws, hh, x); };
  p.f1.f = [&](const Vec& x) { return continuous_boundary_operator(g, ws, p.h1, 0, x); };
  p.dirichlet = ws;
  std::vector<double> e;
  for (double hg : {0.5, 0.25, 0.125}) {
    BvpOptions o;
    o.L = 4.0;
    o.hg = hg;
    const BvpSolution sol = solve_robin_bvp(p, o);
    double err = 0.0;
    const Grid& G = sol.w->grid();
    for (int i = 0; i < G.size(); ++i) err = std::max(err, std::abs(sol.w->values()[i] - ws(G.point(i))));
    e.push_back(err);
  }
  add_errors(s, "manufactured_error", e);
  s.add(make_check("manufactured_order", observed_order(e), Relation::ge, tol.at("order_min")));

  RobinProblem z;
  z.metric = g;
  z.h = hh;
  z.h1 = ScalarField::constant(0.5);
  BvpOptions o;
  o.L = 4.0;
  o.hg = 0.25;
  const BvpSolution zero = solve_robin_bvp(z, o);
  s.add(make_check("zero_data_sup", zero.sup_abs, Relation::le, 0.0));

  const MetricField glued = builtin_metric(ScenarioKind::glued_schwarzschild_flat, {{"m", 1.0}}, d);
  const auto collar = build_collar_field(glued, d);
  MollifierSpec spec;
  spec.delta = 0.1;
  const MetricField fd = mollify_metric(glued, collar, spec);
  const BvpSolution v = solve_strict_positivity(fd, BvpOptions{});
  s.add(make_check("v_min", 1.0 + v.min_value, Relation::gt, 0.0));
  s.add(make_check("v_max_excess", v.max_value, Relation::le, tol.at("strict_positivity_upper")));
}

// 9: mass-shift identity and sup |w_delta| on the glued scenario
void mass_shift(StageResult& s, const Tolerances& tol) {
  ScenarioConfig c = glued_config({"build", "collar", "mollify", "solve", "mass", "shift"});
  c.tolerances = tol;
  const Report r = run_pipeline(c);
  absorb(s, r, {"solve"}, "", {"w_sup"});
  absorb(s, r, {"shift"}, "");
}

// 10: doubling relation and seam regularity on the flattened quarter scenario
void doubling_relation(StageResult& s, const Tolerances& tol) {
  ScenarioConfig c;
  c.name = "quarter";
  c.scenario = ScenarioKind::quarter_schwarzschild;
  c.domain.kind = DomainKind::quarter_space;
  c.flatten_radius = 4.0;
  c.pipeline = {"build", "flatten", "double", "interface", "relation"};
  c.tolerances = tol;
  absorb(s, run_pipeline(c), {"double", "interface", "relation"}, "");
}

// 11: positivity over the built-in scenarios satisfying the hypotheses
void positivity(StageResult& s, const Tolerances& tol) {
  struct Case {
    const char* prefix;
    ScenarioKind kind;
    DomainKind domain;
  };
  for (const Case& k : {Case{"euclidean_half.", ScenarioKind::euclidean, DomainKind::half_space},
                        Case{"euclidean_quarter.", ScenarioKind::euclidean, DomainKind::quarter_space},
                        Case{"schwarzschild_half.", ScenarioKind::schwarzschild_half, DomainKind::half_space},
                        Case{"quarter_schwarzschild.", ScenarioKind::quarter_schwarzschild,
                             DomainKind::quarter_space}}) {
    ScenarioConfig c;
    c.scenario = k.kind;
    c.domain.kind = k.domain;
    c.pipeline = {"build", "mass", "positivity"};
    c.tolerances = tol;
    absorb(s, run_pipeline(c), {"positivity"}, k.prefix);
  }
  ScenarioConfig c = glued_config({"build", "collar", "mollify", "solve", "corrected", "mass", "positivity"});
  c.deltas = {0.1};
  c.tolerances = tol;
  absorb(s, run_pipeline(c), {"positivity"}, "glued.");
}

}  // namespace

const char* criterion_title(int k) {
  static const char* titles[] = {"",
                                 "Euclidean zero mass",
                                 "Schwarzschild half-space mass",
                                 "mollifier locality and convergence",
                                 "jump certificate",
                                 "conformal-law cross-path",
                                 "Gauss decomposition residual",
                                 "image Green function",
                                 "Robin BVP solver",
                                 "mass-shift identity",
                                 "doubling relation",
                                 "positivity consistency"};
  if (k < 1 || k > 11) throw ConfigError("criterion must lie in 1..11");
  return titles[k];
}

StageResult run_criterion(int k, const Tolerances& tol_in) {
  const Tolerances tol = merged_tolerances(tol_in);
  StageResult s;
  s.name = "criterion-" + std::to_string(k);
  const auto t0 = Clock::now();
  try {
    switch (k) {
      case 1: euclidean_zero(s, tol); break;
      case 2: schwarzschild_mass(s, tol); break;
      case 3: mollifier_locality(s, tol); break;
      case 4: jump_certificate(s, tol); break;
      case 5: conformal_cross_path(s, tol); break;
      case 6: gauss_residual(s, tol); break;
      case 7: green_checks(s, tol); break;
      case 8: bvp_checks(s, tol); break;
      case 9: mass_shift(s, tol); break;
      case 10: doubling_relation(s, tol); break;
      case 11: positivity(s, tol); break;
      default: throw ConfigError("criterion must lie in 1..11");
    }
    s.settle();
  } catch (const std::exception& e) {
    s.status = StageStatus::error;
    s.message = e.what();
  }
  if (s.message.empty()) s.message = criterion_title(k);
  s.seconds = seconds_since(t0);
  return s;
}

}  // namespace pmt
