#pragma once

#include <limits>

#include "pmt/geometry/scalar_field.hpp"

namespace pmt {

enum class WeightedKind { Lq_k_gamma, Ck_gamma, Ck_alpha_gamma };

struct WeightedSpaceSpec {
  WeightedKind kind = WeightedKind::Ck_gamma;
  int k = 0;  // derivative order, at most 2
  double q = 2.0;  // Lq kinds; infinity allowed
  double gamma = -0.5;
  double alpha = 0.5;  // Hoelder kinds

  void validate() const;
};

struct WeightedNormOptions {
  double r_outer = 16.0;
  double h = 1.0 / 16.0;  // FD step; lattice spacing is max(h, r_outer / 48)
  // declared decay of the field (|grad^i w| ~ r^{decay - i}); NaN disables the tail estimate
  double decay = std::numeric_limits<double>::quiet_NaN();
};

struct WeightedNorm {
  double value = 0.0;
  double tail = 0.0;  // estimate of the part beyond r_outer
  int samples = 0;
};

// r(x) = max(|x|, 1)
inline double weight_radius(const Vec& x) { return x.norm() > 1.0 ? x.norm() : 1.0; }

WeightedNorm weighted_norm(const ScalarField& w, const WeightedSpaceSpec& spec, DomainKind kind,
                           int n, const WeightedNormOptions& opt = {});

}  // namespace pmt
