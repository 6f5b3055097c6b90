#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "pmt/elliptic/robin.hpp"
#include "pmt/geometry/adapted.hpp"
#include "pmt/geometry/hypersurface.hpp"
#include "pmt/geometry/scalar_field.hpp"
#include "pmt/mass/mass.hpp"

namespace pmt {

// Collar description of u^{4/(n-2)} g from the collar description of g.
class ConformalAdapted final : public AdaptedMetric {
 public:
  ConformalAdapted(std::shared_ptr<const AdaptedMetric> base, ScalarField u);

  int dim() const override { return base_->dim(); }
  double r0() const override { return base_->r0(); }
  MetricJet adapted_jet(const Vec& x, double t, int order, double h, Side side) const override;
  std::pair<Vec, double> locate(const Vec& y) const override { return base_->locate(y); }
  bool covers(const Vec& y) const override { return base_->covers(y); }
  Vec ambient(const Vec& x, double t) const override { return base_->ambient(x, t); }
  const WarpProfile* band_warp() const override { return base_->band_warp(); }
  double band_half_width() const override { return base_->band_half_width(); }
  double spike_half_width() const override { return base_->spike_half_width(); }
  bool in_band(const Vec& y) const override { return base_->in_band(y); }
  double volume_factor(const Vec& x, double t) const override;
  double face_factor(const Vec& x, double t) const override;

  const AdaptedMetric& base() const { return *base_; }

 private:
  double phi(const Vec& y) const;

  std::shared_ptr<const AdaptedMetric> base_;
  ScalarField u_;
};

// u^{4/(n-2)} g as a MetricField, keeping the piece structure and collar description of g.
// The decay order becomes min(tau, -gamma).
MetricField conformal_field(const MetricField& g, const ConformalFactor& u,
                            const std::string& name = "");

// c_n^{-1} u^{-(n+2)/(n-2)} (-Lap_g u + c_n R_g u)
double conformal_scalar(const MetricField& field, const ConformalFactor& u, const Vec& x, double h);

// trace: H = tr A of u^{4/(n-2)} g, (1/(2 c_n)) u^{-n/(n-2)} (du/dnu + 2 c_n H u).
// displayed: (1/((n-1) c_n)) u^{-n/(n-2)} (du/dnu + 2 c_n H u), i.e. 2/(n-1) times trace.
struct MeanCurvaturePair {
  double trace = 0.0;
  double displayed = 0.0;
};

MeanCurvaturePair conformal_mean_curvature(const MetricField& field, const ConformalFactor& u,
                                           const HypersurfaceChart& surf, const Vec& x, double h);

// du/dnu for the face normal of surf
double face_normal_derivative(const MetricField& field, const ScalarJet& u,
                              const HypersurfaceChart& surf, const Vec& x);

// Manufactured solve w* = exp(-|x - c|^2 / s^2) on the metric and grid of opt, h = h_k = 0,
// exact outer values. Errors are max norms; operator errors use the interpolant.
struct DiscretizationCalibration {
  double solution_error = 0.0;
  double operator_error = 0.0;  // |-Lap_g I(w_h) - f| at non-outer nodes
  double boundary_error = 0.0;  // |d I(w_h)/deta - f_k| at face nodes
  double scale = 1.0;           // sup |w*|
  int nodes = 0;

  double relative_operator_error() const { return operator_error / scale; }
  double relative_boundary_error() const { return boundary_error / scale; }
};

DiscretizationCalibration calibrate_discretization(const MetricField& metric, const BvpOptions& opt,
                                                   double h = 1.0 / 16.0);

struct CertificateOptions {
  double h = 1.0 / 16.0;  // FD step for curvature of the base metric
  double tol_factor = 10.0;
  // nodes closer than this (plus the band half width) to the interface sphere are
  // reported apart; the grid does not resolve the collar band
  double band_margin_cells = 2.0;
  std::optional<DiscretizationCalibration> calibration;
  bool throw_on_failure = false;  // corrected_metric / hat_metric throw CertificateError
};

struct CertificateError : Error {
  using Error::Error;
};

// Curvature of u^{4/(n-2)} g at grid nodes through the transformation laws.
// tol_R = tol_factor c_n^{-1} e_op sup|u - 1|, tol_H = tol_factor (2 c_n)^{-1} e_bd sup|u - 1|
// with e_op, e_bd the relative calibration errors.
struct CurvatureCertificates {
  double min_R = 0.0;
  double max_abs_R = 0.0;
  double min_H_trace = 0.0;
  double min_H_displayed = 0.0;
  double max_abs_H = 0.0;
  // beyond the radius `outer_radius` (flattening)
  double outer_radius = 0.0;
  double max_abs_R_outer = 0.0;
  double max_abs_H_outer = 0.0;
  double tol_R = 0.0;
  double tol_H = 0.0;
  int volume_points = 0;
  int face_points = 0;
  int excluded_points = 0;
  double max_abs_R_excluded = 0.0;
  double min_R_excluded = 0.0;
  bool sign_pass = false;      // min R >= -tol_R, min H >= -tol_H
  bool vanish_pass = false;    // |R|, |H| below tolerance (everywhere or beyond outer_radius)
};

CurvatureCertificates curvature_certificates(const MetricField& base, const ConformalFactor& u,
                                             const Grid& grid, const DiscretizationCalibration& cal,
                                             double outer_radius, const CertificateOptions& opt);

struct CorrectedMetric {
  MetricField metric;
  ConformalFactor u;
  CurvatureCertificates certificates;
  DiscretizationCalibration calibration;
};

// g~ = (1 + w)^{4/(n-2)} g_delta with sign certificates
CorrectedMetric corrected_metric(const MetricField& field_delta, const BvpSolution& w,
                                 const CertificateOptions& opt = {});

struct HatMetric {
  MetricField metric;
  ConformalFactor v;
  CurvatureCertificates certificates;
  DiscretizationCalibration calibration;
  double max_v = 0.0;
  // m(g~) - m(g^) two ways
  MassEstimate mass_tilde;
  MassEstimate mass_hat;
  double gap_mass_difference = 0.0;
  MassShift gap_energy;  // int (kappa |dv|^2 + R v^2) + int 2 H v^2
};

// g^ = (1 + z)^{4/(n-2)} g~; the gap is computed when quad is given, with mass radii
// and energy truncation inside the grid box
HatMetric hat_metric(const MetricField& field_tilde, const BvpSolution& z,
                     const CertificateOptions& opt = {},
                     const std::optional<QuadratureSpec>& quad = std::nullopt);

// chi_R(x) = chi(|x| / R), chi(t) = S(2 - t): 1 for |x| <= R, 0 for |x| >= 2R
std::array<double, 3> cutoff_jet(double t);
ScalarJet chi_R_jet(const Vec& x, double R, int order);

// g_R = chi_R g + (1 - chi_R) delta
MetricField cutoff_metric(const MetricField& field, double R_cut);

struct FlattenOptions {
  static BvpOptions auto_grid() {
    BvpOptions b;
    b.L = 0.0;
    b.hg = 0.0;
    return b;
  }

  BvpOptions bvp = auto_grid();  // L <= 0: 4 R_cut; hg <= 0: R_cut / 8
  QuadratureSpec quad;
  CertificateOptions certificates;
  std::vector<double> mass_radii;  // empty: three radii in (2 R_cut, min(r_outer, L - 2 hg) - 2h]
  bool compute_mass = true;
};

struct FlatteningResult {
  MetricField g_R;
  MetricField g_eps;
  ConformalFactor u;  // 1 + v_R
  BvpSolution v;
  double K_radius = 0.0;
  double R_cut = 0.0;
  MassEstimate mass_g;
  MassEstimate mass_eps;
  double mass_drift = 0.0;
  CurvatureCertificates curvature_certificates;
  DiscretizationCalibration calibration;
  double flatness_defect = 0.0;  // max |g_eps - u^{4/(n-2)} delta| beyond K_radius
  int flatness_points = 0;
  double max_abs_gamma = 0.0;  // sup of |gamma_R| at grid nodes
};

// 4(n-1)/(n-2) L_R v = -gamma_R, 2(n-1)/(n-2) B_R v = -gamma_bar_R with
// L_R = -Lap_{g_R} + c_n gamma_R, B_R = d/deta + 2 c_n gamma_bar_R, then g_eps = (1 + v)^{4/(n-2)} g_R
FlatteningResult conformally_flatten(const MetricField& field, double R_cut, const Domain& domain,
                                     const FlattenOptions& opt = {});

}  // namespace pmt
