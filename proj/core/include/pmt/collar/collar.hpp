#pragma once

#include <memory>
#include <vector>

#include "pmt/geometry/adapted.hpp"

namespace pmt {

struct CollarOptions {
  double epsilon = 1.0;
  double table_step = 1e-3;  // radial collars: tabulation step of r(t)
  double flow_step = 0.0;    // flow collars: RK4 step bound, 0 means h/4
  bool force_flow = false;
};

// Warped collar of a radial metric phi(|x|) delta: xi = phi^{-1/2} x/|x|, t is arclength
class RadialCollar final : public CollarChart, public WarpProfile {
 public:
  RadialCollar(MetricField field, double r0, double epsilon, double table_step = 1e-3);

  const MetricField& field() const override { return field_; }
  double r0() const override { return r0_; }
  double epsilon() const override { return eps_; }
  Vec xi(const Vec& y, Side side) const override;
  Vec to_ambient(const Vec& x, double t, Side side = Side::automatic) const override;
  std::pair<Vec, double> from_ambient(const Vec& y) const override;
  Mat jacobian(const SigmaChart& ch, const Vec& theta, double t, Side side) const override;
  Mat pullback(const SigmaChart& ch, const Vec& theta, double t, Side side) const override;
  std::array<Mat, 3> pullback_t_jet(const SigmaChart& ch, const Vec& theta, double t,
                                    Side side) const override;
  const WarpProfile* warp() const override { return this; }
  MetricJet adapted_jet(const Vec& x, double t, int order, double h, Side side) const override;

  double r_of_t(double t, Side side) const override;
  double dr_dt(double t, Side side) const override;
  double t_of_r(double r) const override;
  std::array<double, 3> F(double t, Side side) const override;

 private:
  const RadialProfile& profile(Side s) const;
  std::array<double, 3> F_of_r(double r, Side s) const;

  MetricField field_;
  double r0_;
  double eps_;
  double dt_;
  double t_min_;
  std::vector<double> r_minus_, r_plus_;  // r(t) on the uniform table, per piece
};

// General collar: flow of xi(y) = V/|V|_{g(y)}, V = g^{-1}(r0 y/|y|) y/|y|,
// with the x_1 component of V removed at boundary points.
class FlowCollar final : public CollarChart {
 public:
  FlowCollar(MetricField field, double r0, double epsilon, double max_step);

  const MetricField& field() const override { return field_; }
  double r0() const override { return r0_; }
  double epsilon() const override { return eps_; }
  Vec xi(const Vec& y, Side side) const override;
  Vec to_ambient(const Vec& x, double t, Side side = Side::automatic) const override;
  std::pair<Vec, double> from_ambient(const Vec& y) const override;
  Mat jacobian(const SigmaChart& ch, const Vec& theta, double t, Side side) const override;

  int steps() const { return steps_; }

 private:
  Mat dxi(const Vec& y, Side side) const;
  // flows (y, J) over parameter t with a fixed number of RK4 steps
  void flow(Vec& y, Mat* J, double t, Side side) const;

  MetricField field_;
  double r0_;
  double eps_;
  int steps_;
};

std::shared_ptr<const CollarChart> build_collar_field(const MetricField& field, const Domain& domain,
                                                      const CollarOptions& opt = {});

}  // namespace pmt
