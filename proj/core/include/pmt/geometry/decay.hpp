#pragma once

#include <limits>
#include <vector>

#include "pmt/geometry/metric_field.hpp"

namespace pmt {

struct DecayProfile {
  double tau_hat = std::numeric_limits<double>::infinity();
  double C_hat = 0.0;
  bool violation = false;
  std::vector<double> radii;
  std::vector<double> profile;  // max over directions of |g-d| + r|dg| + r^2|ddg|
};

// deterministic direction set inside the domain's angular sector
std::vector<Vec> sector_directions(DomainKind kind, int n, int count);

DecayProfile decay_profile(const MetricField& field, const std::vector<double>& radii, double h,
                           int directions = 48);

}  // namespace pmt
