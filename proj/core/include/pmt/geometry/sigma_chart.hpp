#pragma once

#include "pmt/types.hpp"

namespace pmt {

// gnomonic chart of the sphere |x| = r0 around a base point:
// x(theta) = r0 (p + E theta) / |p + E theta|. At boundary points (x_1 = 0)
// the first column of E is e_1, so the boundary is {theta_1 = 0}.
struct SigmaChart {
  int n = 3;
  double r0 = 1.0;
  Vec p;  // unit base direction
  Mat E;  // n x (n-1), orthonormal, orthogonal to p
  bool on_boundary = false;

  Vec point(const Vec& theta) const;
  Mat tangent(const Vec& theta) const;  // n x (n-1)
  Mat induced(const Vec& theta) const;  // Euclidean pullback
  MetricJet induced_jet(const Vec& theta, int order) const;
};

SigmaChart make_sigma_chart(const Vec& x, double r0, double boundary_tol = 1e-13);

}  // namespace pmt
