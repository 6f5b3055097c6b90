#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>
#include <vector>

namespace pmt {

inline constexpr int kMaxDim = 6;

using Vec = Eigen::Matrix<double, Eigen::Dynamic, 1, 0, kMaxDim, 1>;
using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, 0, kMaxDim, kMaxDim>;

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DomainError : Error {
  using Error::Error;
};

struct GeometryError : Error {
  using Error::Error;
};

struct SolveError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

inline Vec make_vec(std::initializer_list<double> v) {
  Vec out(static_cast<int>(v.size()));
  int i = 0;
  for (double x : v) out(i++) = x;
  return out;
}

inline Vec unit(int n, int a) {
  Vec e = Vec::Zero(n);
  e(a) = 1.0;
  return e;
}

// value plus first and second partial derivatives; d[c], dd[c*n+d]
template <class T>
struct Jet {
  int n = 0;
  int order = 0;
  T v;
  std::vector<T> d;
  std::vector<T> dd;

  const T& d2(int a, int b) const { return dd[a * n + b]; }
  T& d2(int a, int b) { return dd[a * n + b]; }
};

using MetricJet = Jet<Mat>;
using ScalarJet = Jet<double>;

// half-space/quarter-space surface-area of the unit sphere factor
double sphere_area(int n);  // area of S^{n-1} in R^n

inline double conformal_constant(int n) { return (n - 2.0) / (4.0 * (n - 1.0)); }

}  // namespace pmt
