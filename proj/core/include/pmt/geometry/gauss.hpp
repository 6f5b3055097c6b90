#pragma once

#include "pmt/geometry/adapted.hpp"
#include "pmt/geometry/curvature.hpp"

namespace pmt {

// R = R_sigma - |A|^2 - H^2 - 2 dH/dnu - 2 (Lap_sigma N)/N on the level set Sigma_t,
// N = 1/|dt|_g. Each term is computed along its own discretization path.
struct GaussDecomposition {
  double R = 0.0;
  double R_sigma = 0.0;
  double A_norm_sq = 0.0;
  double H = 0.0;
  double dH_dnu = 0.0;
  double lapse = 0.0;           // -2 (Lap N)/N
  double residual = 0.0;        // with the lapse term
  double residual_no_lapse = 0.0;
};

// uses field.adapted() when present, otherwise the collar pullback
GaussDecomposition gauss_scalar_decomposition(const MetricField& field, const AdaptedMetric& collar,
                                              const Vec& x, double t, double h,
                                              Side side = Side::automatic);

}  // namespace pmt
