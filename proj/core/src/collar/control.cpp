#include "pmt/collar/control.hpp"

#include <cmath>

#include "pmt/geometry/decay.hpp"
#include "pmt/geometry/hypersurface.hpp"
#include "pmt/quadrature.hpp"

namespace pmt {

double mollified_scalar(const MollifiedMetric& mm, const Vec& x, double t, double h) {
  return scalar_curvature(mm.adapted_jet(x, t, 2, h, Side::automatic));
}

CurvatureControlReport curvature_control_report(const MetricField& field_delta,
                                                const MetricField& field,
                                                const CollarChart& collar,
                                                const MollifierSpec& spec,
                                                const ControlOptions& opt) {
  auto mm = mollified_of(field_delta);
  if (!mm) throw GeometryError("curvature control needs a field produced by mollify_metric");
  const int n = field.dim();
  const double r0 = collar.r0();
  const double w = spec.spike_half_width();
  const double hw = spec.band_half_width();

  std::vector<Vec> base;
  for (const Vec& d : sector_directions(field.kind(), n, opt.sigma_samples)) base.push_back(r0 * d);
  Vec xb = Vec::Zero(n);
  xb(1) = r0;
  base.push_back(xb);

  std::vector<double> ts;
  for (int i = 0; i < opt.t_samples; ++i) ts.push_back(-hw + 2.0 * hw * i / (opt.t_samples - 1));
  for (int i = 0; i < opt.t_samples; ++i) ts.push_back(-w + 2.0 * w * i / (opt.t_samples - 1));

  CurvatureControlReport rep;
  rep.delta = spec.delta;
  const std::shared_ptr<const AdaptedMetric> self(&collar, [](const AdaptedMetric*) {});
  double coef_sum = 0.0;
  int coef_count = 0;
  for (const Vec& x : base) {
    JumpSample js;
    js.x = x;
    js.H_minus = mean_curvature(field, HypersurfaceChart::interface_level(self, 0.0, Side::minus), x, opt.h);
    js.H_plus = mean_curvature(field, HypersurfaceChart::interface_level(self, 0.0, Side::plus), x, opt.h);
    js.jump = js.H_minus - js.H_plus;
    const GaussRule g = gauss_legendre(opt.spike_nodes, -w, w);
    double I = 0.0;
    for (size_t i = 0; i < g.x.size(); ++i) I += g.w[i] * mollified_scalar(*mm, x, g.x[i], opt.h);
    js.integral = I;
    const bool tiny = std::abs(js.jump) < opt.jump_floor;
    js.fit_error = tiny ? std::abs(I - js.jump) : std::abs(I - js.jump) / std::abs(js.jump);
    js.coefficient = tiny ? 0.0 : I / js.jump;
    if (!tiny) {
      coef_sum += js.coefficient;
      ++coef_count;
    }
    rep.singular_fit_error = std::max(rep.singular_fit_error, js.fit_error);
    rep.jump_samples.push_back(js);
  }
  rep.fitted_coefficient = coef_count ? coef_sum / coef_count : 0.0;

  for (size_t b = 0; b < base.size(); ++b) {
    const Vec& x = base[b];
    const double jump = rep.jump_samples[b].jump;
    for (double t : ts) {
      const double R = mollified_scalar(*mm, x, t, opt.h);
      const double K = spike_kernel(t, spec);
      rep.peak = std::max(rep.peak, std::abs(R));
      rep.smooth_bound = std::max(rep.smooth_bound, std::abs(R - jump * K));
      rep.smooth_bound_fitted =
          std::max(rep.smooth_bound_fitted, std::abs(R - rep.fitted_coefficient * jump * K));
      if (std::abs(t) > w) rep.outer_bound = std::max(rep.outer_bound, std::abs(R));
    }
  }

  // boundary mean curvature of g_delta across the band
  for (double t : ts) {
    const Vec y = collar.to_ambient(xb, t);
    Vec yb = y;
    yb(0) = 0.0;
    const double H = mean_curvature(field_delta, HypersurfaceChart::face_x1(), yb, opt.h);
    rep.boundary_mean_bound = std::max(rep.boundary_mean_bound, std::abs(H));
  }
  return rep;
}

}  // namespace pmt
