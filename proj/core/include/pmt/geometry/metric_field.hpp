#pragma once

#include <functional>
#include <memory>
#include <string>

#include "pmt/geometry/domain.hpp"

namespace pmt {

enum class FieldMode { analytic, two_piece, sampled };

class AdaptedMetric;
enum class Side { automatic, minus, plus };

using MetricFn = std::function<Mat(const Vec&)>;
using MetricJetFn = std::function<MetricJet(const Vec&, int)>;

// g = phi(|x|) * identity
struct RadialProfile {
  std::function<double(double)> phi;
  std::function<double(double)> dphi;
  std::function<double(double)> d2phi;
};

struct MetricPiece {
  MetricFn g;
  MetricJetFn jet;  // optional exact derivatives up to the requested order
  std::shared_ptr<const RadialProfile> radial;
};

class MetricField {
 public:
  MetricField() = default;

  static MetricField analytic(int n, DomainKind kind, MetricPiece g, double tau, double C,
                              std::string name = "analytic");
  static MetricField sampled(int n, DomainKind kind, MetricPiece g, double tau, double C,
                             std::string name = "sampled");
  static MetricField two_piece(int n, DomainKind kind, MetricPiece minus, MetricPiece plus,
                               double r0, double tau, double C, double match_tol = 1e-10,
                               std::string name = "two_piece");

  int dim() const { return n_; }
  DomainKind kind() const { return kind_; }
  FieldMode mode() const { return mode_; }
  double tau() const { return tau_; }
  double C_decay() const { return C_; }
  double interface_radius() const { return r0_; }
  double match_tol() const { return match_tol_; }
  const std::string& name() const { return name_; }

  Side resolve(const Vec& x, Side side) const;
  const MetricPiece& piece(Side resolved) const;

  // checked evaluation: domain membership, symmetry, positive definiteness
  Mat eval(const Vec& x, Side side = Side::automatic) const;
  // unchecked evaluation on the piece's natural extension
  Mat eval_raw(const Vec& x, Side side = Side::automatic) const;

  bool has_exact_jet(Side side = Side::automatic) const;
  MetricJet exact_jet(const Vec& x, int order, Side side = Side::automatic) const;
  bool is_radial() const;

  // max |g_- - g_+| over sample points of the interface sphere
  double interface_mismatch(int samples = 64) const;

  // optional description in collar coordinates, used where Cartesian stencils are unreliable
  const std::shared_ptr<const AdaptedMetric>& adapted() const { return adapted_; }
  MetricField with_adapted(std::shared_ptr<const AdaptedMetric> a) const;
  MetricField renamed(std::string name) const;

 private:
  int n_ = 3;
  DomainKind kind_ = DomainKind::half_space;
  FieldMode mode_ = FieldMode::analytic;
  MetricPiece minus_;
  MetricPiece plus_;
  double r0_ = 0.0;
  double tau_ = 1.0;
  double C_ = 1.0;
  double match_tol_ = 1e-10;
  std::string name_;
  std::shared_ptr<const AdaptedMetric> adapted_;
};

void check_metric_matrix(const Mat& g, const Vec& x);

MetricPiece euclidean_piece(int n);
// g = u^{4/(n-2)} delta with u radial; u, u', u'' supplied
MetricPiece radial_conformal_piece(int n, std::function<double(double)> u,
                                   std::function<double(double)> du,
                                   std::function<double(double)> d2u);
// g = u^{4/(n-2)} base, with exact jets when u provides derivatives and base has jets
struct ScalarField;
MetricPiece conformal_piece(int n, const ScalarField& u, const MetricPiece& base);

}  // namespace pmt
