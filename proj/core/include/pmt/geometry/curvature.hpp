#pragma once

#include "pmt/geometry/metric_field.hpp"
#include "pmt/geometry/finite_difference.hpp"

namespace pmt {

struct Christoffel {
  int n = 0;
  std::vector<double> c;  // c[(a*n + b)*n + d] = Gamma^a_{bd}

  double operator()(int a, int b, int d) const { return c[(a * n + b) * n + d]; }
  double& operator()(int a, int b, int d) { return c[(a * n + b) * n + d]; }
};

struct DerivativePolicy {
  double h = 1.0 / 16.0;
  bool prefer_exact = true;
  bool one_sided_faces = true;
  int accuracy = 2;
};

// jet of the metric at x: exact when provided and preferred, otherwise FD
MetricJet metric_jet(const MetricField& field, const Vec& x, int order, Side side,
                     const DerivativePolicy& policy);

// FD jet of an arbitrary coordinate expression of a metric
template <class F>
MetricJet coordinate_metric_jet(F&& f, const Vec& q, int order, const std::vector<Stencil>& kinds,
                                const FdOptions& opt) {
  return fd_jet<Mat>(std::forward<F>(f), q, order, kinds, opt);
}

Christoffel christoffel(const MetricJet& jet);
// derivative of the Christoffel symbols; out[e] holds d_e Gamma
std::vector<Christoffel> christoffel_derivative(const MetricJet& jet);
double scalar_curvature(const MetricJet& jet);

// restriction of a jet to the coordinate block `keep`, derivatives only along `keep`
MetricJet sub_jet(const MetricJet& jet, const std::vector<int>& keep);

// forms of the coordinate hypersurface {q_k = const}; unit normal
// nu = orientation * g^{ka} d_a / sqrt(g^{kk})
struct CoordinateHypersurface {
  int k = 0;
  std::vector<int> tangent;  // indices != k
  Mat A;                     // second fundamental form, A_ij = -g(nabla_i d_j, nu)
  Mat induced;
  Mat induced_inv;
  Vec normal;                // contravariant components
  double H = 0.0;            // trace of A against induced_inv
  double H_div = 0.0;        // div_g nu, computed independently
};

CoordinateHypersurface coordinate_hypersurface(const MetricJet& jet, int k, double orientation);

// d_c H from an order-2 jet by the chain rule
Vec mean_curvature_gradient(const MetricJet& jet, int k, double orientation);

Christoffel christoffel(const MetricField& field, const Vec& x, double h,
                        Side side = Side::automatic);
double scalar_curvature(const MetricField& field, const Vec& x, double h,
                        Side side = Side::automatic);

// Cartesian Christoffel symbols; inside a covered collar band the metric is
// differenced directly with step band_step
Christoffel cartesian_christoffel(const MetricField& field, const Vec& x, double h,
                                  double band_step = 1e-6);

// Lap_g u = g^{ab} (u_ab - Gamma^c_ab u_c)
double laplacian(const MetricField& field, const ScalarJet& u, const Vec& x, double h);

}  // namespace pmt
