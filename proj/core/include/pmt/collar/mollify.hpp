#pragma once

#include <memory>

#include "pmt/collar/collar.hpp"
#include "pmt/collar/mollifier.hpp"

namespace pmt {

// g_delta(x, s) = int g(x, s - sigma_delta(s) tau) chi(tau) dtau in collar coordinates.
// s-derivatives are taken under the integral; the kink of a two-piece metric at t = 0
// contributes the term [G'] (sigma - s sigma')^2 / sigma^3 chi(s / sigma) to the second one.
class MollifiedMetric final : public AdaptedMetric {
 public:
  MollifiedMetric(std::shared_ptr<const CollarChart> collar, MollifierSpec spec, int nodes = 64);

  int dim() const override { return collar_->dim(); }
  double r0() const override { return collar_->r0(); }
  MetricJet adapted_jet(const Vec& x, double s, int order, double h, Side side) const override;
  std::pair<Vec, double> locate(const Vec& y) const override { return collar_->from_ambient(y); }
  bool covers(const Vec& y) const override { return in_band(y); }
  Vec ambient(const Vec& x, double t) const override { return collar_->to_ambient(x, t); }
  const WarpProfile* band_warp() const override { return collar_->warp(); }
  double band_half_width() const override { return spec_.band_half_width(); }
  double spike_half_width() const override { return spec_.spike_half_width(); }
  double volume_factor(const Vec& x, double t) const override;
  double face_factor(const Vec& x, double t) const override;

  // G_delta and its first two s-derivatives
  std::array<Mat, 3> s_jet(const SigmaChart& ch, const Vec& theta, double s, int nodes = 0) const;
  // warp factor F_delta and derivatives (radial collars only)
  std::array<double, 3> F_delta(double s, int nodes = 0) const;

  bool in_band(const Vec& y) const override;
  Mat eval_cartesian(const Vec& y) const;

  const CollarChart& collar() const { return *collar_; }
  const MollifierSpec& spec() const { return spec_; }
  int nodes() const { return nodes_; }

 private:
  std::shared_ptr<const CollarChart> collar_;
  MollifierSpec spec_;
  int nodes_;
  double r_lo_ = 0.0, r_hi_ = 0.0;  // radial band in ambient radius
};

struct MollifyOptions {
  int nodes = 64;
  int coarse_nodes = 48;
  double check_tol = 1e-8;  // agreement of coarse and full rules
  double max_delta_ratio = 0.2;  // delta <= ratio * epsilon
};

MetricField mollify_metric(const MetricField& field, std::shared_ptr<const CollarChart> collar,
                           const MollifierSpec& spec, const MollifyOptions& opt = {});

// the mollified description attached to a field produced by mollify_metric
std::shared_ptr<const MollifiedMetric> mollified_of(const MetricField& field_delta);

// sup over sample points of the band |t| < delta/2 of max |g_delta - g| (Cartesian components)
double band_sup_difference(const MetricField& field_delta, const MetricField& field,
                           int sigma_samples = 6, int t_samples = 41);

}  // namespace pmt
