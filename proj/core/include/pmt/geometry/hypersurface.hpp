#pragma once

#include <memory>

#include "pmt/geometry/adapted.hpp"
#include "pmt/geometry/curvature.hpp"

namespace pmt {

enum class SurfaceKind { interface_sphere_t, boundary_face_x1, boundary_face_xn };
enum class NormalOrientation { outward_unbounded, outward_domain };

// Interface levels: outward_unbounded is +d/dt, outward_domain is -d/dt.
// Faces: outward_domain is eta = -g^{ka} d_a / sqrt(g^{kk}); outward_unbounded flips it.
struct HypersurfaceChart {
  SurfaceKind kind = SurfaceKind::boundary_face_x1;
  NormalOrientation orientation = NormalOrientation::outward_domain;
  double t = 0.0;
  Side side = Side::automatic;
  std::shared_ptr<const AdaptedMetric> adapted;

  static HypersurfaceChart interface_level(std::shared_ptr<const AdaptedMetric> a, double t,
                                           Side side = Side::automatic);
  static HypersurfaceChart face_x1(Side side = Side::automatic);
  static HypersurfaceChart face_xn(Side side = Side::automatic);

  double sign() const;
};

struct SurfaceFrame {
  MetricJet jet;
  int k = 0;
  double orientation = 1.0;
  bool adapted = false;
};

// Metric jet in coordinates where the surface is {q_k = const}. For interface
// levels x is the base point on the interface sphere.
SurfaceFrame surface_frame(const MetricField& field, const HypersurfaceChart& surf, const Vec& x,
                           int order, double h);

CoordinateHypersurface hypersurface_forms(const MetricField& field, const HypersurfaceChart& surf,
                                          const Vec& x, double h);
Mat second_fundamental_form(const MetricField& field, const HypersurfaceChart& surf, const Vec& x,
                            double h);
double mean_curvature(const MetricField& field, const HypersurfaceChart& surf, const Vec& x,
                      double h);

// g(nu, nu) for the surface normal
double normal_norm_sq(const CoordinateHypersurface& s, const Mat& g);

struct CurvatureSample {
  Vec x;
  Christoffel christoffel;
  double scalar = 0.0;
  Mat second_ff;
  double mean = 0.0;
  double mean_div = 0.0;
};

CurvatureSample curvature_sample(const MetricField& field, const HypersurfaceChart& surf,
                                 const Vec& x, double h);

}  // namespace pmt
