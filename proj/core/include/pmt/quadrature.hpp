#pragma once

#include <vector>

namespace pmt {

struct GaussRule {
  std::vector<double> x;  // nodes on [-1, 1], ascending
  std::vector<double> w;
};

// cached Gauss-Legendre rule with n nodes
const GaussRule& gauss_legendre(int n);

// rule mapped to [a, b]
GaussRule gauss_legendre(int n, double a, double b);

}  // namespace pmt
