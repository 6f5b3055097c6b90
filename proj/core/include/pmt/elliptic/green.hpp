#pragma once

#include <functional>

#include "pmt/mass/quadrature.hpp"

namespace pmt {

// G(x, y) = psi(x, y) + psi(x, y'), psi(x, y) = |x - y|^{2-n} + |x - y~|^{2-n},
// y~ = (y_1, .., y_{n-1}, -y_n), y' = (-y_1, y_2, .., y_n)
double quarter_green(const Vec& x, const Vec& y, int n);
// gradient in x
Vec quarter_green_gradient(const Vec& x, const Vec& y, int n);

struct GreenData {
  int n = 3;
  std::function<double(const Vec&)> laplacian;  // Lap u in the quarter space
  std::function<double(const Vec&)> d1;         // du/dx_1 on x_1 = 0
  std::function<double(const Vec&)> dn;         // du/dx_n on x_n = 0
  double gamma = -1.0;                          // |u| <= amplitude r^gamma far out
  double amplitude = 1.0;
};

struct GreenRepresentation {
  double value = 0.0;  // reconstructed u(y)
  double bulk = 0.0;
  double face1 = 0.0;
  double face_n = 0.0;
  double tail_bound = 0.0;  // bound on the omitted part beyond r_outer, in units of u
};

// (2 - n) omega_{n-1} u(y) = int G Lap u + int_{x_1=0} G du/dx_1 + int_{x_n=0} G du/dx_n,
// truncated at quad.r_outer. Integrals use polar coordinates about y (bulk) and about the
// projection of y (faces).
GreenRepresentation green_representation(const GreenData& data, const Vec& y,
                                         const QuadratureSpec& quad = {});

}  // namespace pmt
