#pragma once

#include <map>
#include <optional>
#include <string>

#include "pmt/elliptic/grid.hpp"
#include "pmt/geometry/metric_field.hpp"
#include "pmt/mass/quadrature.hpp"

namespace pmt {

// -Lap_g w + h w = f in M, dw/deta_k + h_k w = f_k on the face x_k = 0 (eta outward).
struct RobinProblem {
  MetricField metric;
  ScalarField h = ScalarField::constant(0.0);
  ScalarField f = ScalarField::constant(0.0);
  ScalarField h1 = ScalarField::constant(0.0);
  ScalarField f1 = ScalarField::constant(0.0);
  ScalarField h2 = ScalarField::constant(0.0);  // quarter space only
  ScalarField f2 = ScalarField::constant(0.0);
  double gamma = -0.75;  // decay order of the sought solution
  double far_gamma = 0.0;  // exponent of the far-field closure; 0 means 2 - n
  std::optional<ScalarField> dirichlet;  // exact outer values (manufactured solutions)
  // integrate h and f over the collar band with the band quadrature of the metric
  bool band_loads = true;
  bool check_signs = true;  // enforce h >= 0, h_k >= 0 at the nodes
};

struct BvpOptions {
  double L = 8.0;       // box half-width
  double hg = 0.25;     // grid spacing
  double tol = 1e-9;    // relative linear residual
  int max_iterations = 5000;
  QuadratureSpec quad;  // band quadrature for concentrated loads
};

struct BvpSolution {
  std::optional<GridFunction> w;
  double residual_interior = 0.0;  // max |A w - b| over interior rows
  std::vector<double> residual_boundary;  // per face
  double linear_residual = 0.0;  // |A w - b| / |b|
  int iterations = 0;
  double min_diagonal_margin = 0.0;  // min over rows of (|a_ii| - sum_j |a_ij|) / |a_ii|
  std::map<std::string, double> weighted_norm_report;
  double decay_fit = 0.0;  // fitted exponent of |w| on outer shells
  double sup_abs = 0.0;
  double min_value = 0.0;
  double max_value = 0.0;
  int unknowns = 0;

  ScalarField field(double offset = 0.0) const { return w->field(offset); }
};

BvpSolution solve_robin_bvp(const RobinProblem& problem, const BvpOptions& opt = {});

// Lap w + c_n R^- w = -c_n R^-, dw/deta - 2 c_n H^- w = 2 c_n H^-
BvpSolution solve_mollified_correction(const MetricField& field_delta, const BvpOptions& opt = {});

// Lap z - c_n R z = c_n R, dz/deta + 2 c_n H z = -2 c_n H; v = 1 + z
BvpSolution solve_strict_positivity(const MetricField& field_tilde, const BvpOptions& opt = {},
                                    double sign_tol = 1e-9);

// problem data for the two specializations
RobinProblem mollified_correction_problem(const MetricField& field_delta, double h);
RobinProblem strict_positivity_problem(const MetricField& field_tilde, double h);

// discrete residual of a given nodal function (manufactured-solution checks)
std::vector<double> apply_discrete_operator(const RobinProblem& problem, const BvpOptions& opt,
                                            const std::vector<double>& w);

BvpSolution solve_discrete_system(const RobinProblem& problem, const BvpOptions& opt,
                                  const std::vector<double>& rhs);

// -Lap_g w + h w evaluated by fine central differences of w (rhs of manufactured problems)
double continuous_operator(const MetricField& metric, const ScalarField& w, const ScalarField& h,
                           const Vec& x, double step = 1e-3);
// dw/deta_k + h_k w on face axis k
double continuous_boundary_operator(const MetricField& metric, const ScalarField& w,
                                    const ScalarField& hk, int axis, const Vec& x,
                                    double step = 1e-3);

}  // namespace pmt
