#pragma once

#include <memory>
#include <vector>

#include "pmt/geometry/domain.hpp"
#include "pmt/geometry/scalar_field.hpp"

namespace pmt {

// Node-centred box grid over the truncated sector: x_a in [0, L] on face axes,
// [-L, L] otherwise, spacing hg.
class Grid {
 public:
  Grid(int n, DomainKind kind, double L, double hg);

  int dim() const { return n_; }
  DomainKind kind() const { return kind_; }
  double half_width() const { return L_; }
  double spacing() const { return hg_; }
  int size() const { return total_; }
  int extent(int axis) const { return dims_[axis]; }
  int stride(int axis) const { return stride_[axis]; }
  double lower(int axis) const { return lo_[axis]; }
  bool is_face_axis(int axis) const;

  int index(const std::vector<int>& multi) const;
  std::vector<int> multi(int idx) const;
  Vec point(int idx) const;
  // any coordinate on the outer box boundary
  bool is_outer(int idx) const;
  // on the lower face of a face axis
  bool on_face(int idx, int axis) const;

  // multilinear hat weights of the cell containing x
  std::vector<std::pair<int, double>> hat_weights(const Vec& x) const;

 private:
  int n_;
  DomainKind kind_;
  double L_, hg_;
  std::vector<int> dims_, stride_;
  std::vector<double> lo_;
  int total_ = 0;
};

// Nodal values with a piecewise tensor-cubic interpolant. Beyond the inscribed
// ball |x| <= L the values continue as w(L x/|x|) (|x|/L)^gamma.
class GridFunction {
 public:
  GridFunction(std::shared_ptr<const Grid> grid, std::vector<double> values, double far_gamma);

  const Grid& grid() const { return *grid_; }
  std::shared_ptr<const Grid> grid_ptr() const { return grid_; }
  const std::vector<double>& values() const { return values_; }
  double far_gamma() const { return gamma_; }

  double operator()(const Vec& x) const;
  ScalarJet jet(const Vec& x, int order) const;

  // ScalarField view offset by a constant: c + w
  ScalarField field(double offset = 0.0) const;

  double sup_abs() const;
  double min() const;
  double max() const;

 private:
  ScalarJet interior_jet(const Vec& x, int order) const;

  std::shared_ptr<const Grid> grid_;
  std::vector<double> values_;
  double gamma_;
};

}  // namespace pmt
