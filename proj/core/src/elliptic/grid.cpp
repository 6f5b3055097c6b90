#include "pmt/elliptic/grid.hpp"

#include <algorithm>
#include <cmath>

namespace pmt {

Grid::Grid(int n, DomainKind kind, double L, double hg) : n_(n), kind_(kind), L_(L), hg_(hg) {
  if (n < 3 || n > kMaxDim) throw DomainError("grid dimension out of range");
  if (!(hg > 0.0) || !(L > 4.0 * hg)) throw DomainError("grid needs L > 4 hg > 0");
  const int half = static_cast<int>(std::lround(L / hg));
  if (std::abs(half * hg - L) > 1e-9 * L) throw DomainError("L must be a multiple of the grid spacing");
  dims_.resize(n);
  stride_.resize(n);
  lo_.resize(n);
  for (int a = 0; a < n; ++a) {
    const bool face = is_face_axis(a);
    dims_[a] = face ? half + 1 : 2 * half + 1;
    lo_[a] = face ? 0.0 : -L;
  }
  int s = 1;
  for (int a = n - 1; a >= 0; --a) {
    stride_[a] = s;
    s *= dims_[a];
  }
  total_ = s;
}

bool Grid::is_face_axis(int axis) const {
  return axis == 0 || (kind_ == DomainKind::quarter_space && axis == n_ - 1);
}

int Grid::index(const std::vector<int>& m) const {
  int idx = 0;
  for (int a = 0; a < n_; ++a) idx += m[a] * stride_[a];
  return idx;
}

std::vector<int> Grid::multi(int idx) const {
  std::vector<int> m(n_);
  for (int a = 0; a < n_; ++a) {
    m[a] = idx / stride_[a];
    idx -= m[a] * stride_[a];
  }
  return m;
}

Vec Grid::point(int idx) const {
  Vec x(n_);
  for (int a = 0; a < n_; ++a) {
    const int i = idx / stride_[a];
    idx -= i * stride_[a];
    x(a) = lo_[a] + i * hg_;
  }
  return x;
}

bool Grid::is_outer(int idx) const {
  for (int a = 0; a < n_; ++a) {
    const int i = idx / stride_[a];
    idx -= i * stride_[a];
    if (i == dims_[a] - 1) return true;
    if (i == 0 && !is_face_axis(a)) return true;
  }
  return false;
}

bool Grid::on_face(int idx, int axis) const {
  return is_face_axis(axis) && (idx / stride_[axis]) % dims_[axis] == 0;
}

std::vector<std::pair<int, double>> Grid::hat_weights(const Vec& x) const {
  std::vector<int> base(n_);
  std::vector<double> frac(n_);
  for (int a = 0; a < n_; ++a) {
    const double u = (x(a) - lo_[a]) / hg_;
    int i = static_cast<int>(std::floor(u));
    i = std::clamp(i, 0, dims_[a] - 2);
    base[a] = i;
    frac[a] = std::clamp(u - i, 0.0, 1.0);
  }
  std::vector<std::pair<int, double>> out;
  for (int c = 0; c < (1 << n_); ++c) {
    int idx = 0;
    double w = 1.0;
    for (int a = 0; a < n_; ++a) {
      const int bit = (c >> a) & 1;
      idx += (base[a] + bit) * stride_[a];
      w *= bit ? frac[a] : 1.0 - frac[a];
    }
    if (w != 0.0) out.emplace_back(idx, w);
  }
  return out;
}

GridFunction::GridFunction(std::shared_ptr<const Grid> grid, std::vector<double> values,
                           double far_gamma)
    : grid_(std::move(grid)), values_(std::move(values)), gamma_(far_gamma) {
  if (static_cast<int>(values_.size()) != grid_->size()) throw Error("grid function size mismatch");
}

namespace {

// Lagrange basis on nodes 0..3 at u, with first and second derivatives
void cubic_basis(double u, double b0[4], double b1[4], double b2[4]) {
  for (int k = 0; k < 4; ++k) {
    double v = 1.0, d = 0.0, dd = 0.0, den = 1.0;
    // product over j != k of (u - j)
    for (int j = 0; j < 4; ++j) {
      if (j == k) continue;
      den *= (k - j);
      dd = dd * (u - j) + 2.0 * d;
      d = d * (u - j) + v;
      v *= (u - j);
    }
    b0[k] = v / den;
    b1[k] = d / den;
    b2[k] = dd / den;
  }
}

}  // namespace

ScalarJet GridFunction::interior_jet(const Vec& x, int order) const {
  const Grid& g = *grid_;
  const int n = g.dim();
  const double hg = g.spacing();
  std::vector<int> start(n);
  std::vector<std::array<double, 4>> B0(n), B1(n), B2(n);
  for (int a = 0; a < n; ++a) {
    const double u = (x(a) - g.lower(a)) / hg;
    const int N = g.extent(a);
    if (u < -2.0 || u > N + 1.0) throw DomainError("point outside the grid");
    int i = static_cast<int>(std::floor(u));
    int s = std::clamp(i - 1, 0, N - 4);
    start[a] = s;
    double b0[4], b1[4], b2[4];
    cubic_basis(u - s, b0, b1, b2);
    for (int k = 0; k < 4; ++k) {
      B0[a][k] = b0[k];
      B1[a][k] = b1[k] / hg;
      B2[a][k] = b2[k] / (hg * hg);
    }
  }
  ScalarJet j;
  j.n = n;
  j.order = order;
  j.v = 0.0;
  if (order >= 1) j.d.assign(n, 0.0);
  if (order >= 2) j.dd.assign(n * n, 0.0);
  int total = 1;
  for (int a = 0; a < n; ++a) total *= 4;
  std::vector<int> k(n);
  for (int c = 0; c < total; ++c) {
    int r = c, idx = 0;
    for (int a = 0; a < n; ++a) {
      k[a] = r % 4;
      r /= 4;
      idx += (start[a] + k[a]) * g.stride(a);
    }
    const double f = values_[idx];
    if (f == 0.0) continue;
    double p = 1.0;
    for (int a = 0; a < n; ++a) p *= B0[a][k[a]];
    j.v += f * p;
    if (order >= 1)
      for (int a = 0; a < n; ++a) {
        double q = B1[a][k[a]];
        for (int b = 0; b < n; ++b)
          if (b != a) q *= B0[b][k[b]];
        j.d[a] += f * q;
      }
    if (order >= 2)
      for (int a = 0; a < n; ++a)
        for (int b = a; b < n; ++b) {
          double q = 1.0;
          for (int c2 = 0; c2 < n; ++c2) {
            if (a == b && c2 == a) q *= B2[c2][k[c2]];
            else if (c2 == a || c2 == b) q *= B1[c2][k[c2]];
            else q *= B0[c2][k[c2]];
          }
          j.dd[a * n + b] += f * q;
          if (b != a) j.dd[b * n + a] += f * q;
        }
  }
  return j;
}

double GridFunction::operator()(const Vec& x) const {
  const double L = grid_->half_width();
  const double r = x.norm();
  if (r <= L) return interior_jet(x, 0).v;
  return interior_jet(x * (L / r), 0).v * std::pow(r / L, gamma_);
}

ScalarJet GridFunction::jet(const Vec& x, int order) const {
  const double L = grid_->half_width();
  if (x.norm() <= L) return interior_jet(x, order);
  const int n = grid_->dim();
  const double e = 1e-3 * x.norm();
  ScalarJet j;
  j.n = n;
  j.order = order;
  j.v = (*this)(x);
  if (order >= 1) {
    j.d.assign(n, 0.0);
    for (int a = 0; a < n; ++a) {
      const Vec ea = unit(n, a) * e;
      j.d[a] = ((*this)(x + ea) - (*this)(x - ea)) / (2.0 * e);
    }
  }
  if (order >= 2) {
    j.dd.assign(n * n, 0.0);
    for (int a = 0; a < n; ++a)
      for (int b = a; b < n; ++b) {
        double v;
        if (a == b) {
          const Vec ea = unit(n, a) * e;
          v = ((*this)(x + ea) - 2.0 * j.v + (*this)(x - ea)) / (e * e);
        } else {
          const Vec ea = unit(n, a) * e, eb = unit(n, b) * e;
          v = ((*this)(x + ea + eb) - (*this)(x + ea - eb) - (*this)(x - ea + eb) +
               (*this)(x - ea - eb)) / (4.0 * e * e);
        }
        j.dd[a * n + b] = j.dd[b * n + a] = v;
      }
  }
  return j;
}

ScalarField GridFunction::field(double offset) const {
  auto self = std::make_shared<GridFunction>(*this);
  ScalarField s;
  s.f = [self, offset](const Vec& x) { return offset + (*self)(x); };
  s.jet = [self, offset](const Vec& x, int order) {
    ScalarJet j = self->jet(x, order);
    j.v += offset;
    return j;
  };
  return s;
}

double GridFunction::sup_abs() const {
  double s = 0.0;
  for (double v : values_) s = std::max(s, std::abs(v));
  return s;
}

double GridFunction::min() const { return *std::min_element(values_.begin(), values_.end()); }
double GridFunction::max() const { return *std::max_element(values_.begin(), values_.end()); }

}  // namespace pmt
