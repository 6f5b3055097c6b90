#pragma once

#include <functional>

#include "pmt/geometry/finite_difference.hpp"

namespace pmt {

struct ScalarField {
  std::function<double(const Vec&)> f;
  std::function<ScalarJet(const Vec&, int)> jet;  // optional exact derivatives

  double operator()(const Vec& x) const { return f(x); }
  bool has_exact_jet() const { return static_cast<bool>(jet); }

  static ScalarField constant(double c);
};

// positive factor u with u - 1 = O(|x|^gamma)
struct ConformalFactor {
  ScalarField u;
  double gamma = -1.0;

  static ConformalFactor identity() { return {ScalarField::constant(1.0), -1.0}; }
};

// exact jet when available, else face-aware finite differences of step h
ScalarJet scalar_jet(const ScalarField& u, const Vec& x, int order, double h, DomainKind kind,
                     bool prefer_exact = true);

}  // namespace pmt
