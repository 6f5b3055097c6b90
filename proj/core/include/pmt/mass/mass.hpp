#pragma once

#include <vector>

#include "pmt/geometry/scalar_field.hpp"
#include "pmt/mass/quadrature.hpp"

namespace pmt {

struct MassSample {
  double rho = 0.0;
  double flux_term = 0.0;
  std::vector<double> boundary_terms;
  double total = 0.0;
  // quarter-sphere and mirrored parts of the flux, kept apart
  double flux_upper = 0.0;
  double flux_mirrored = 0.0;
  int nodes = 0;
};

struct MassEstimate {
  std::vector<MassSample> samples;
  double m_infinity = 0.0;
  double fit_exponent = 0.0;
  double fit_residual = 0.0;
};

enum class ExtrapolationModel { power_law, richardson };

MassSample half_space_mass_at_radius(const MetricField& field, double rho,
                                     const QuadratureSpec& q = {});
MassSample corner_mass_at_radius(const MetricField& field, double rho,
                                 const QuadratureSpec& q = {});
// dispatches on the field's domain kind
MassSample mass_at_radius(const MetricField& field, double rho, const QuadratureSpec& q = {});

// samples at each radius followed by extrapolation
MassEstimate mass_series(const MetricField& field, const std::vector<double>& radii,
                         const QuadratureSpec& q = {},
                         ExtrapolationModel model = ExtrapolationModel::richardson);

// power_law: total(rho) = m + a rho^{-p} with p free.
// richardson: p = 2 tau - n + 2 fixed, successive orders rho^{-jp} eliminated,
// j <= min(samples - 1, 3).
MassEstimate extrapolate_mass(const std::vector<MassSample>& samples, ExtrapolationModel model,
                              double tau = 1.0, int n = 3);

// default radii rho_k = r_outer / 2^k, k = 3..1
std::vector<double> default_mass_radii(const QuadratureSpec& q);

struct MassShift {
  double bulk = 0.0;      // int (4(n-1)/(n-2)|du|^2 + P u^2) dv
  double boundary = 0.0;  // int 2 Q u^2 dsigma
  double tail = 0.0;      // estimate of the part beyond r_outer
  double total = 0.0;     // bulk + boundary + tail
};

MassShift conformal_mass_shift(const MetricField& field, const ConformalFactor& u,
                               const QuadratureSpec& q = {});

// negative_parts: P = -R^-, Q = -H^-; full: P = R, Q = H
enum class EnergyPotential { negative_parts, full };

// int (4(n-1)/(n-2)|du|^2 + P u^2) dv + sum over faces int 2 Q u^2 dsigma
MassShift conformal_energy(const MetricField& field, const ConformalFactor& u, EnergyPotential pot,
                           const QuadratureSpec& q = {});

}  // namespace pmt
