#pragma once

#include <array>
#include <memory>
#include <utility>

#include "pmt/geometry/metric_field.hpp"
#include "pmt/geometry/finite_difference.hpp"
#include "pmt/geometry/sigma_chart.hpp"

namespace pmt {

// A metric described in collar-adapted coordinates q = (theta_1..theta_{n-1}, t)
// around base points of the interface sphere.
class AdaptedMetric {
 public:
  virtual ~AdaptedMetric() = default;
  virtual int dim() const = 0;
  virtual double r0() const = 0;
  // jet at theta = 0 of the chart around x (a point of the sphere), collar parameter t
  virtual MetricJet adapted_jet(const Vec& x, double t, int order, double h, Side side) const = 0;
  virtual std::pair<Vec, double> locate(const Vec& y) const = 0;
  // true where Cartesian stencils must not be used
  virtual bool covers(const Vec& y) const = 0;
  // ambient point of collar level t over the sphere point x
  virtual Vec ambient(const Vec& x, double t) const = 0;

  // thin-band structure used by quadratures; none by default
  virtual const class WarpProfile* band_warp() const { return nullptr; }
  virtual double band_half_width() const { return 0.0; }
  virtual double spike_half_width() const { return 0.0; }
  virtual bool in_band(const Vec&) const { return false; }
  // dv_g = volume_factor dA dt and dsigma_g = face_factor dl dt, with dA, dl the
  // Euclidean measures of the r0-sphere and of its intersection with x_1 = 0
  virtual double volume_factor(const Vec& x, double t) const;
  virtual double face_factor(const Vec& x, double t) const;
};

// G(theta, t) = blockdiag(F(t) * ghat(theta), 1), ghat the Euclidean metric of the r0-sphere chart
class WarpProfile {
 public:
  virtual ~WarpProfile() = default;
  virtual double r_of_t(double t, Side side) const = 0;
  virtual double t_of_r(double r) const = 0;
  virtual double dr_dt(double t, Side side) const = 0;
  virtual std::array<double, 3> F(double t, Side side) const = 0;  // F, F', F''
};

inline Side collar_side(double t, Side requested) {
  if (requested != Side::automatic) return requested;
  return t > 0.0 ? Side::plus : Side::minus;
}

class CollarChart : public AdaptedMetric {
 public:
  virtual const MetricField& field() const = 0;
  virtual double epsilon() const = 0;
  virtual Vec xi(const Vec& y, Side side) const = 0;
  virtual Vec to_ambient(const Vec& x, double t, Side side = Side::automatic) const = 0;
  virtual std::pair<Vec, double> from_ambient(const Vec& y) const = 0;
  // columns: d/dtheta_i then d/dt
  virtual Mat jacobian(const SigmaChart& ch, const Vec& theta, double t, Side side) const = 0;
  virtual Mat pullback(const SigmaChart& ch, const Vec& theta, double t, Side side) const;
  // pullback and its first two t-derivatives at fixed theta
  virtual std::array<Mat, 3> pullback_t_jet(const SigmaChart& ch, const Vec& theta, double t,
                                            Side side) const;
  virtual const WarpProfile* warp() const { return nullptr; }

  MetricJet adapted_jet(const Vec& x, double t, int order, double h, Side side) const override;
  std::pair<Vec, double> locate(const Vec& y) const override { return from_ambient(y); }
  bool covers(const Vec& y) const override;
  Vec ambient(const Vec& x, double t) const override { return to_ambient(x, t); }
  int dim() const override { return field().dim(); }
};

// stencil kinds for chart coordinates: forward in theta_1 at boundary base points
std::vector<Stencil> adapted_stencils(const SigmaChart& ch, int order);

}  // namespace pmt
