#pragma once

#include <memory>
#include <vector>

#include "pmt/collar/collar.hpp"
#include "pmt/geometry/hypersurface.hpp"
#include "pmt/mass/mass.hpp"

namespace pmt {

// Doubled half-space field of a quarter-space field along {x_n = 0}:
// g~(z) = g(z) for z_n >= 0, P g(z~) P for z_n < 0, z~ = (z_1, .., -z_n), P = diag(1, .., 1, -1).
struct DoubledConfig {
  MetricField base;
  MetricField doubled;
  double K_radius = 0.0;
  double max_second_ff = 0.0;  // |A| of {x_n = 0} beyond K at the admission probes
};

struct DoublingOptions {
  double K_radius = 0.0;
  double h = 1.0 / 16.0;
  double r_outer = 16.0;
  double tol = 1e-3;  // admission bound on |A| of {x_n = 0} beyond K
  int probes = 24;
  bool require_totally_geodesic = true;
};

// P m P
Mat reflect_tensor(const Mat& m);
Vec reflect_point(const Vec& z);

DoubledConfig double_manifold(const MetricField& field, const DoublingOptions& opt = {});

// probe points on {x_n = 0} with |x| in (K, r_outer), x_1 bounded away from 0
std::vector<Vec> seam_probes(int n, double K_radius, double r_outer, int count);

struct C2Report {
  double max_g_an_defect = 0.0;  // Fermi chart, |g_an - delta_an| for s in {0, h, 2h}
  double max_g_ij_n = 0.0;       // Fermi chart, |d_s g_ij| at s = 0
  double max_second_ff = 0.0;    // |A| of the seam, geometry core
  double cartesian_g_in = 0.0;   // |g_in|, i < n, on the seam
  double cartesian_d_n = 0.0;    // |d_n g_ij| of the doubled field, central across the seam
  double derivative_jump = 0.0;  // |d_n^+ g - d_n^- g| over all components
  double tol = 0.0;
  int probes = 0;
  bool pass = false;
};

C2Report check_c2_across_interface(const DoubledConfig& config, const std::vector<Vec>& probes,
                                   double h, double tol = 1e-3);

// mean curvature of the seam for the normal pointing into the mirror copy, from each side
struct SeamCurvature {
  double H_sigma2 = 0.0;     // face {x_n = 0} of the base, outward normal
  double from_base = 0.0;    // doubled field, one-sided from z_n >= 0
  double from_mirror = 0.0;  // doubled field, one-sided from z_n <= 0
};

SeamCurvature seam_mean_curvatures(const DoubledConfig& config, const Vec& x, double h);

struct DoubledMass {
  std::vector<MassSample> corner;
  std::vector<MassSample> doubled;
  double m_corner = 0.0;
  double m_doubled = 0.0;
  double ratio = 2.0;             // m_doubled / m_corner, 2 when both vanish
  double max_sample_defect = 0.0;  // max |doubled - 2 corner| / max(1, |corner|) per radius
  double max_face_term = 0.0;     // corner face terms
};

// corner mass of the base and half-space mass of the doubled field on mirrored nodes
DoubledMass doubled_mass_relation(const DoubledConfig& config, const std::vector<double>& radii,
                                  const QuadratureSpec& q = {}, double face_tol = 1e-10);

// largest distance between the mirrored half of the hemisphere nodes and the images of the first half
double paired_node_defect(int n, double rho, const QuadratureSpec& q);

struct InterfaceExtension {
  HypersurfaceChart chart;
  std::shared_ptr<const CollarChart> collar;
  double orthogonality_defect = 0.0;
};

// |g(nu, eta)| at points of {|x| = r0, x_1 = 0}: nu the g-normal of the sphere, eta of the face
double orthogonality_defect(const MetricField& field, double r0, int probes = 32);

// hemisphere |x| = r0 of the doubled half-space as a collar interface
InterfaceExtension extend_interface(const MetricField& doubled, double r0, double K_radius,
                                    double h = 1.0 / 16.0);

}  // namespace pmt
