#include "pmt/geometry/scalar_field.hpp"

namespace pmt {

ScalarField ScalarField::constant(double c) {
  ScalarField s;
  s.f = [c](const Vec&) { return c; };
  s.jet = [c](const Vec& x, int order) {
    const int n = static_cast<int>(x.size());
    ScalarJet j;
    j.n = n;
    j.order = order;
    j.v = c;
    if (order >= 1) j.d.assign(n, 0.0);
    if (order >= 2) j.dd.assign(n * n, 0.0);
    return j;
  };
  return s;
}

ScalarJet scalar_jet(const ScalarField& u, const Vec& x, int order, double h, DomainKind kind,
                     bool prefer_exact) {
  if (prefer_exact && u.has_exact_jet()) return u.jet(x, order);
  FdOptions opt;
  opt.h = h;
  auto f = [&u](const Vec& y) { return u.f(y); };
  return fd_jet<double>(f, x, order, face_aware_stencils(kind, x, h, order), opt);
}

}  // namespace pmt
