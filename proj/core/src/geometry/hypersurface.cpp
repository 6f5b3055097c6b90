#include "pmt/geometry/hypersurface.hpp"

#include <cmath>

namespace pmt {

HypersurfaceChart HypersurfaceChart::interface_level(std::shared_ptr<const AdaptedMetric> a,
                                                     double t, Side side) {
  HypersurfaceChart s;
  s.kind = SurfaceKind::interface_sphere_t;
  s.orientation = NormalOrientation::outward_unbounded;
  s.t = t;
  s.side = side;
  s.adapted = std::move(a);
  return s;
}

HypersurfaceChart HypersurfaceChart::face_x1(Side side) {
  HypersurfaceChart s;
  s.kind = SurfaceKind::boundary_face_x1;
  s.side = side;
  return s;
}

HypersurfaceChart HypersurfaceChart::face_xn(Side side) {
  HypersurfaceChart s;
  s.kind = SurfaceKind::boundary_face_xn;
  s.side = side;
  return s;
}

double HypersurfaceChart::sign() const {
  return orientation == NormalOrientation::outward_unbounded ? 1.0 : -1.0;
}

SurfaceFrame surface_frame(const MetricField& field, const HypersurfaceChart& surf, const Vec& x,
                           int order, double h) {
  const int n = field.dim();
  SurfaceFrame f;
  f.orientation = surf.sign();
  if (surf.kind == SurfaceKind::interface_sphere_t) {
    const AdaptedMetric* a = surf.adapted ? surf.adapted.get() : field.adapted().get();
    if (!a) throw GeometryError("interface level needs collar coordinates");
    f.jet = a->adapted_jet(x, surf.t, order, h, surf.side);
    f.k = n - 1;
    f.adapted = true;
    return f;
  }
  const int axis = surf.kind == SurfaceKind::boundary_face_x1 ? 0 : n - 1;
  if (std::abs(x(axis)) > 1e-12 * (1.0 + x.norm()))
    throw DomainError("point is not on the boundary face");
  if (surf.kind == SurfaceKind::boundary_face_xn && field.kind() != DomainKind::quarter_space)
    throw DomainError("face x_n = 0 exists only in quarter space");
  const auto& a = field.adapted();
  if (surf.kind == SurfaceKind::boundary_face_x1 && a && a->covers(x)) {
    auto [xs, t] = a->locate(x);
    f.jet = a->adapted_jet(xs, t, order, h, surf.side);
    f.k = 0;
    f.adapted = true;
    return f;
  }
  DerivativePolicy p;
  p.h = h;
  f.jet = metric_jet(field, x, order, surf.side, p);
  f.k = axis;
  return f;
}

CoordinateHypersurface hypersurface_forms(const MetricField& field, const HypersurfaceChart& surf,
                                          const Vec& x, double h) {
  SurfaceFrame f = surface_frame(field, surf, x, 1, h);
  return coordinate_hypersurface(f.jet, f.k, f.orientation);
}

Mat second_fundamental_form(const MetricField& field, const HypersurfaceChart& surf, const Vec& x,
                            double h) {
  return hypersurface_forms(field, surf, x, h).A;
}

double mean_curvature(const MetricField& field, const HypersurfaceChart& surf, const Vec& x,
                      double h) {
  return hypersurface_forms(field, surf, x, h).H;
}

double normal_norm_sq(const CoordinateHypersurface& s, const Mat& g) {
  return s.normal.dot(g * s.normal);
}

CurvatureSample curvature_sample(const MetricField& field, const HypersurfaceChart& surf,
                                 const Vec& x, double h) {
  SurfaceFrame f = surface_frame(field, surf, x, 2, h);
  CoordinateHypersurface s = coordinate_hypersurface(f.jet, f.k, f.orientation);
  CurvatureSample c;
  c.x = x;
  c.christoffel = christoffel(f.jet);
  c.scalar = scalar_curvature(f.jet);
  c.second_ff = s.A;
  c.mean = s.H;
  c.mean_div = s.H_div;
  return c;
}

}  // namespace pmt
