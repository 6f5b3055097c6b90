#pragma once

#include "pmt/types.hpp"

namespace pmt {

enum class DomainKind { half_space, quarter_space };

struct Domain {
  DomainKind kind = DomainKind::half_space;
  int n = 3;
  double r_inner = 2.0;
  double r_outer = 16.0;
  double h = 1.0 / 16.0;

  void validate() const;

  // faces are x_1 = 0 and, for quarter space, x_n = 0
  bool is_face_axis(int axis) const {
    return axis == 0 || (kind == DomainKind::quarter_space && axis == n - 1);
  }
  bool contains(const Vec& x, double tol = 1e-12) const;
};

const char* to_string(DomainKind k);
DomainKind domain_kind_from_string(const std::string& s);

inline bool contains(DomainKind kind, int n, const Vec& x, double tol = 1e-12) {
  if (x.size() != n) return false;
  double s = tol * (1.0 + x.norm());
  if (x(0) < -s) return false;
  if (kind == DomainKind::quarter_space && x(n - 1) < -s) return false;
  return true;
}

}  // namespace pmt
