#include "pmt/geometry/finite_difference.hpp"

namespace pmt {
namespace detail {

namespace {

std::vector<Tap> mirror(std::vector<Tap> taps, double sign) {
  for (auto& t : taps) {
    t.offset = -t.offset;
    t.weight *= sign;
  }
  return taps;
}

}  // namespace

std::vector<Tap> first_taps(Stencil s, int accuracy) {
  switch (s) {
    case Stencil::central:
      if (accuracy == 4)
        return {{-2, 1.0 / 12.0}, {-1, -2.0 / 3.0}, {1, 2.0 / 3.0}, {2, -1.0 / 12.0}};
      return {{-1, -0.5}, {1, 0.5}};
    case Stencil::forward:
      return {{0, -1.5}, {1, 2.0}, {2, -0.5}};
    case Stencil::backward:
      return mirror(first_taps(Stencil::forward, 2), -1.0);
  }
  return {};
}

std::vector<Tap> second_taps(Stencil s, int accuracy) {
  switch (s) {
    case Stencil::central:
      if (accuracy == 4)
        return {{-2, -1.0 / 12.0}, {-1, 4.0 / 3.0}, {0, -2.5}, {1, 4.0 / 3.0}, {2, -1.0 / 12.0}};
      return {{-1, 1.0}, {0, -2.0}, {1, 1.0}};
    case Stencil::forward:
      return {{0, 2.0}, {1, -5.0}, {2, 4.0}, {3, -1.0}};
    case Stencil::backward:
      return mirror(second_taps(Stencil::forward, 2), 1.0);
  }
  return {};
}

}  // namespace detail

std::vector<Stencil> face_aware_stencils(DomainKind kind, const Vec& x, double h, int order,
                                         int accuracy) {
  const int n = static_cast<int>(x.size());
  std::vector<Stencil> k(n, Stencil::central);
  if (order < 1) return k;
  const double reach = (accuracy == 4 ? 2.0 : 1.0) * h;
  auto face = [&](int a) { return a == 0 || (kind == DomainKind::quarter_space && a == n - 1); };
  for (int a = 0; a < n; ++a)
    if (face(a) && x(a) < std::max(reach, 2.0 * h) * (1.0 - 1e-12)) k[a] = Stencil::forward;
  return k;
}

std::vector<Stencil> central_stencils(int n) { return std::vector<Stencil>(n, Stencil::central); }

}  // namespace pmt
