#pragma once

#include <vector>

#include "pmt/geometry/metric_field.hpp"

namespace pmt {

struct QuadratureSpec {
  double h = 1.0 / 16.0;        // FD step for metric derivatives
  double r_outer = 16.0;        // truncation radius
  double node_scale = 0.125;    // angular nodes per quarter turn = node_scale * rho / h
  int min_nodes = 16;
  int max_nodes = 96;
  int volume_angular = 12;      // angular nodes per quarter turn for volume integrals
  int radial_nodes = 12;        // per radial sub-interval
  int band_nodes = 16;          // per band sub-interval

  int angular_nodes(double rho) const;
};

struct SphereNode {
  Vec x;
  double w = 0.0;  // Euclidean area weight
  bool mirrored = false;
};

// Product Gauss nodes on the sphere of radius rho in R^m. Nodes with last coordinate >= 0
// come first; with `mirror` their images under x_m -> -x_m follow in the same order.
// `first_nonneg` restricts to x_1 >= 0.
std::vector<SphereNode> sphere_nodes(int m, double rho, int N, bool first_nonneg, bool mirror);

// {|x| = rho} intersected with the domain's sector; half space returns quarter nodes then mirrors
std::vector<SphereNode> sector_sphere_nodes(DomainKind kind, int n, double rho, int N);

struct VolumeNode {
  Vec x;
  double w_euclid = 0.0;
  double w_g = 0.0;  // dv_g weight
  bool band = false;
};

struct FaceNode {
  Vec x;
  double w_euclid = 0.0;
  double w_g = 0.0;  // d sigma_g weight
  int axis = 0;      // face {x_axis = 0}
  bool band = false;
};

// nodes for integrals over {|x| <= R} in the domain; a mollified band is integrated in
// collar coordinates, a two-piece interface splits the radial intervals
std::vector<VolumeNode> volume_nodes(const MetricField& field, double R, const QuadratureSpec& q);
std::vector<FaceNode> face_nodes(const MetricField& field, double R, int axis,
                                 const QuadratureSpec& q);

// radial sub-interval breakpoints used by volume_nodes outside the band
std::vector<double> radial_breaks(const MetricField& field, double R);

}  // namespace pmt
