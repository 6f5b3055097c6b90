#include "pmt/geometry/domain.hpp"

#include <cmath>

namespace pmt {

double sphere_area(int n) {
  // |S^{n-1}| = 2 pi^{n/2} / Gamma(n/2)
  return 2.0 * std::pow(M_PI, 0.5 * n) / std::tgamma(0.5 * n);
}

void Domain::validate() const {
  if (n < 3 || n > kMaxDim) throw DomainError("domain dimension must lie in [3, 6]");
  if (!(h > 0.0)) throw DomainError("grid spacing must be positive");
  if (!(r_inner >= 1.0) || !(r_inner < r_outer))
    throw DomainError("require 1 <= r_inner < r_outer");
}

bool Domain::contains(const Vec& x, double tol) const { return pmt::contains(kind, n, x, tol); }

const char* to_string(DomainKind k) {
  return k == DomainKind::half_space ? "half_space" : "quarter_space";
}

DomainKind domain_kind_from_string(const std::string& s) {
  if (s == "half_space") return DomainKind::half_space;
  if (s == "quarter_space") return DomainKind::quarter_space;
  throw ConfigError("unknown domain kind '" + s + "'");
}

}  // namespace pmt
