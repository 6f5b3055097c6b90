#include "pmt/testbed/scenario.hpp"

#include <cmath>
#include <limits>

#include "pmt/testbed/expression.hpp"

namespace pmt {

namespace {

const std::map<std::string, ScenarioKind>& kind_names() {
  static const std::map<std::string, ScenarioKind> m = {
      {"euclidean", ScenarioKind::euclidean},
      {"schwarzschild_half", ScenarioKind::schwarzschild_half},
      {"glued_schwarzschild_flat", ScenarioKind::glued_schwarzschild_flat},
      {"compact_perturbation", ScenarioKind::compact_perturbation},
      {"quarter_schwarzschild", ScenarioKind::quarter_schwarzschild},
      {"custom_expression", ScenarioKind::custom_expression}};
  return m;
}

double get(const std::map<std::string, double>& p, const std::string& k, double fallback) {
  auto it = p.find(k);
  return it == p.end() ? fallback : it->second;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void check_known(ScenarioKind kind, const std::map<std::string, double>& params,
                 std::initializer_list<const char*> allowed) {
  if (kind == ScenarioKind::custom_expression) return;
  for (const auto& [k, v] : params) {
    bool found = false;
    for (const char* a : allowed) found = found || k == a;
    require(found, std::string("unknown parameter '") + k + "' for scenario " + to_string(kind));
    require(std::isfinite(v), "parameter '" + k + "' must be finite");
  }
}

// u = 1 + m / (2 r^{n-2})
MetricPiece schwarzschild_piece(int n, double m) {
  const double p = n - 2.0;
  return radial_conformal_piece(
      n, [m, p](double r) { return 1.0 + 0.5 * m * std::pow(r, -p); },
      [m, p](double r) { return -0.5 * m * p * std::pow(r, -p - 1.0); },
      [m, p](double r) { return 0.5 * m * p * (p + 1.0) * std::pow(r, -p - 2.0); });
}

// u = 1 + m / (2 (r^2 + a^2)^{(n-2)/2})
MetricPiece cored_piece(int n, double m, double a) {
  const double p = 0.5 * (n - 2.0);
  return radial_conformal_piece(
      n, [=](double r) { return 1.0 + 0.5 * m * std::pow(r * r + a * a, -p); },
      [=](double r) { return -m * p * r * std::pow(r * r + a * a, -p - 1.0); },
      [=](double r) {
        const double s = r * r + a * a;
        return -m * p * std::pow(s, -p - 1.0) + 2.0 * m * p * (p + 1.0) * r * r * std::pow(s, -p - 2.0);
      });
}

double bump(double t) { return t < 1.0 ? std::exp(1.0 - 1.0 / (1.0 - t * t)) : 0.0; }

}  // namespace

const char* to_string(ScenarioKind k) {
  for (const auto& [name, kind] : kind_names())
    if (kind == k) return name.c_str();
  return "unknown";
}

ScenarioKind scenario_kind_from_string(const std::string& s) {
  auto it = kind_names().find(s);
  if (it == kind_names().end()) throw ConfigError("unknown scenario '" + s + "'");
  return it->second;
}

double scenario_param(ScenarioKind kind, const std::map<std::string, double>& params,
                      const std::string& key, const Domain& domain) {
  switch (kind) {
    case ScenarioKind::schwarzschild_half:
    case ScenarioKind::quarter_schwarzschild:
      if (key == "m") return get(params, key, 1.0);
      if (key == "a") return get(params, key, 1.0);
      break;
    case ScenarioKind::glued_schwarzschild_flat:
      if (key == "m") return get(params, key, 1.0);
      if (key == "r0") return get(params, key, domain.r_inner);
      break;
    case ScenarioKind::compact_perturbation:
      if (key == "eps") return get(params, key, 0.05);
      if (key == "s") return get(params, key, 1.0);
      if (key == "c1") return get(params, key, 1.5);
      break;
    case ScenarioKind::custom_expression:
      if (key == "tau") return get(params, key, domain.n - 2.0);
      if (key == "C") return get(params, key, 1.0);
      break;
    default:
      break;
  }
  auto it = params.find(key);
  if (it == params.end()) throw ConfigError("missing parameter '" + key + "'");
  return it->second;
}

MetricField builtin_metric(ScenarioKind kind, const std::map<std::string, double>& params,
                           const Domain& domain, const std::string& expression) {
  domain.validate();
  const int n = domain.n;
  auto P = [&](const char* k) { return scenario_param(kind, params, k, domain); };
  switch (kind) {
    case ScenarioKind::euclidean:
      check_known(kind, params, {});
      return MetricField::analytic(n, domain.kind, euclidean_piece(n),
                                   std::numeric_limits<double>::infinity(), 0.0, "euclidean");
    case ScenarioKind::schwarzschild_half: {
      check_known(kind, params, {"m"});
      const double m = P("m");
      require(m > 0.0, "schwarzschild_half requires m > 0");
      require(domain.kind == DomainKind::half_space, "schwarzschild_half lives on the half space");
      return MetricField::analytic(n, domain.kind, schwarzschild_piece(n, m), n - 2.0, 2.0 * m,
                                   "schwarzschild_half");
    }
    case ScenarioKind::glued_schwarzschild_flat: {
      check_known(kind, params, {"m", "r0"});
      const double m = P("m"), r0 = P("r0");
      require(m > 0.0, "glued_schwarzschild_flat requires m > 0");
      require(r0 >= 1.0 && r0 < domain.r_outer, "glued_schwarzschild_flat requires 1 <= r0 < r_outer");
      require(domain.kind == DomainKind::half_space,
              "glued_schwarzschild_flat lives on the half space");
      const double U0 = 1.0 + 0.5 * m * std::pow(r0, 2.0 - n);
      MetricPiece inner = radial_conformal_piece(
          n, [U0](double) { return U0; }, [](double) { return 0.0; }, [](double) { return 0.0; });
      return MetricField::two_piece(n, domain.kind, inner, schwarzschild_piece(n, m), r0, n - 2.0,
                                    2.0 * m, 1e-10, "glued_schwarzschild_flat");
    }
    case ScenarioKind::compact_perturbation: {
      check_known(kind, params, {"eps", "s", "c1"});
      const double eps = P("eps"), s = P("s"), c1 = P("c1");
      require(std::abs(eps) < 0.25, "compact_perturbation requires |eps| < 0.25");
      require(s > 0.0 && c1 > s, "compact_perturbation requires 0 < s < c1");
      Vec c = Vec::Zero(n);
      c(0) = c1;
      MetricPiece p;
      p.g = [=](const Vec& x) {
        Mat g = Mat::Identity(n, n);
        const double b = eps * bump((x - c).norm() / s);
        g(0, 1) += b;
        g(1, 0) += b;
        g(n - 1, n - 1) += b;
        return g;
      };
      return MetricField::analytic(n, domain.kind, p, n - 2.0, 0.0, "compact_perturbation");
    }
    case ScenarioKind::quarter_schwarzschild: {
      check_known(kind, params, {"m", "a"});
      const double m = P("m"), a = P("a");
      require(m > 0.0, "quarter_schwarzschild requires m > 0");
      require(a > 0.0, "quarter_schwarzschild requires a > 0");
      require(domain.kind == DomainKind::quarter_space,
              "quarter_schwarzschild lives on the quarter space");
      return MetricField::analytic(n, domain.kind, cored_piece(n, m, a), n - 2.0, 2.0 * m,
                                   "quarter_schwarzschild");
    }
    case ScenarioKind::custom_expression: {
      require(!expression.empty(), "custom_expression requires an expression");
      const double tau = P("tau"), C = P("C");
      std::map<std::string, double> bound = params;
      bound.erase("tau");
      bound.erase("C");
      const Expression u = Expression::parse(expression, n, bound);
      const double e = 4.0 / (n - 2.0);
      MetricPiece p;
      p.g = [u, e, n](const Vec& x) {
        const double v = u(x);
        if (!(v > 0.0)) throw GeometryError("custom_expression: conformal factor not positive");
        return Mat(std::pow(v, e) * Mat::Identity(n, n));
      };
      return MetricField::analytic(n, domain.kind, p, tau, C, "custom_expression");
    }
  }
  throw ConfigError("unknown scenario");
}

MetricField builtin_metric(const ScenarioConfig& config) {
  return builtin_metric(config.scenario, config.params, config.domain, config.expression);
}

ScenarioTraits scenario_traits(ScenarioKind kind, const std::map<std::string, double>& params,
                               const Domain& domain) {
  ScenarioTraits t;
  const int n = domain.n;
  const double half = (n - 1.0) * sphere_area(n);  // half-space mass per unit m
  switch (kind) {
    case ScenarioKind::euclidean:
      t.satisfies_hypotheses = true;
      t.quarter = domain.kind == DomainKind::quarter_space;
      break;
    case ScenarioKind::schwarzschild_half:
      t.satisfies_hypotheses = true;
      t.expected_mass = half * scenario_param(kind, params, "m", domain);
      break;
    case ScenarioKind::glued_schwarzschild_flat:
      t.has_interface = true;
      t.satisfies_hypotheses = true;
      t.strict_jump = true;
      t.expected_mass = half * scenario_param(kind, params, "m", domain);
      break;
    case ScenarioKind::compact_perturbation:
      t.quarter = domain.kind == DomainKind::quarter_space;
      break;
    case ScenarioKind::quarter_schwarzschild:
      t.satisfies_hypotheses = true;
      t.quarter = true;
      t.expected_mass = 0.5 * half * scenario_param(kind, params, "m", domain);
      break;
    case ScenarioKind::custom_expression:
      t.quarter = domain.kind == DomainKind::quarter_space;
      t.expected_mass = std::numeric_limits<double>::quiet_NaN();
      break;
  }
  return t;
}

void ScenarioConfig::validate() const {
  domain.validate();
  for (double d : deltas) require(d > 0.0, "mollifier deltas must be positive");
  require(grid_L > 0.0 && grid_h > 0.0 && grid_h < grid_L, "grid requires 0 < h < L");
  require(flatten_radius >= 1.0, "flatten radius must be at least 1");
  for (const auto& [k, v] : tolerances)
    require(v >= 0.0, "tolerance '" + k + "' must be non-negative");
}

}  // namespace pmt
