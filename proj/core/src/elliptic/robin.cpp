#include "pmt/elliptic/robin.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <unordered_map>

#include "pmt/geometry/adapted.hpp"
#include "pmt/geometry/curvature.hpp"
#include "pmt/geometry/hypersurface.hpp"

namespace pmt {

namespace {

using SpMat = Eigen::SparseMatrix<double, Eigen::RowMajor>;

enum RowKind : char { interior_row = 0, face_row = 1, outer_row = 2 };

struct Assembly {
  std::shared_ptr<const Grid> grid;
  SpMat A;
  Eigen::VectorXd b;
  std::vector<char> kind;
  std::vector<int> face_of;  // first face axis of a face row, else -1
};

std::vector<int> face_axes(const Grid& g) {
  std::vector<int> f{0};
  if (g.kind() == DomainKind::quarter_space) f.push_back(g.dim() - 1);
  return f;
}

const ScalarField& face_h(const RobinProblem& p, int k) { return k == 0 ? p.h1 : p.h2; }
const ScalarField& face_f(const RobinProblem& p, int k) { return k == 0 ? p.f1 : p.f2; }

Assembly assemble(const RobinProblem& p, const BvpOptions& opt) {
  const MetricField& field = p.metric;
  const int n = field.dim();
  auto grid = std::make_shared<const Grid>(n, field.kind(), opt.L, opt.hg);
  const Grid& G = *grid;
  const int N = G.size();
  const double hg = opt.hg;
  const std::vector<int> faces = face_axes(G);

  // K = sqrt(g) g^{-1} at the midpoints x_i + hg/2 e_a
  std::vector<Mat> Kmid(static_cast<size_t>(N) * n);
  std::vector<double> sqrtg(N, 0.0);
  std::vector<Mat> ginv(N);
  for (int i = 0; i < N; ++i) {
    const Vec x = G.point(i);
    const Mat g = field.eval(x);
    sqrtg[i] = std::sqrt(g.determinant());
    ginv[i] = g.inverse();
    if (G.is_outer(i)) continue;
    for (int a = 0; a < n; ++a) {
      const Vec m = x + 0.5 * hg * unit(n, a);
      const Mat gm = field.eval(m);
      Kmid[static_cast<size_t>(i) * n + a] = std::sqrt(gm.determinant()) * gm.inverse();
    }
  }
  // left midpoints of interior nodes whose left neighbour is outer
  auto Kleft = [&](int i, int a) -> Mat {
    const int j = i - G.stride(a);
    if (!G.is_outer(j)) return Kmid[static_cast<size_t>(j) * n + a];
    const Vec m = G.point(i) - 0.5 * hg * unit(n, a);
    const Mat gm = field.eval(m);
    return std::sqrt(gm.determinant()) * gm.inverse();
  };

  // cell loads int h phi_i dv and int f phi_i dv
  std::vector<double> H(N, 0.0), F(N, 0.0);
  std::shared_ptr<const AdaptedMetric> mm = p.band_loads ? field.adapted() : nullptr;
  const bool band = mm && mm->band_warp();
  auto idx_of = [&](int i, int a) { return (i / G.stride(a)) % G.extent(a); };
  auto width = [&](int i, int b) { return (G.is_face_axis(b) && idx_of(i, b) == 0) ? 0.5 * hg : hg; };
  auto cell_volume = [&](int i) {
    double v = 1.0;
    for (int b = 0; b < n; ++b) v *= width(i, b);
    return v;
  };
  for (int i = 0; i < N; ++i) {
    if (G.is_outer(i)) continue;
    const Vec x = G.point(i);
    if (band && mm->in_band(x)) continue;
    const double V = sqrtg[i] * cell_volume(i);
    const double hv = p.h(x);
    if (p.check_signs && hv < -1e-12) throw DomainError("sign hypothesis h >= 0 violated");
    H[i] = hv * V;
    F[i] = p.f(x) * V;
  }
  if (band) {
    for (const VolumeNode& v : volume_nodes(field, opt.L - 2.0 * hg, opt.quad)) {
      if (!v.band) continue;
      const double hv = p.h(v.x);
      if (p.check_signs && hv < -1e-12) throw DomainError("sign hypothesis h >= 0 violated");
      const double fv = p.f(v.x);
      for (const auto& [j, w] : G.hat_weights(v.x)) {
        H[j] += v.w_g * hv * w;
        F[j] += v.w_g * fv * w;
      }
    }
  }

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(static_cast<size_t>(N) * (2 * n * n + 1));
  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(N);
  std::vector<char> kind(N, interior_row);
  std::vector<int> face_of(N, -1);
  std::unordered_map<int, double> row;

  // derivative in b at node j as a list of (node, coefficient)
  auto Db = [&](int j, int b, double scale) {
    if (G.is_face_axis(b) && idx_of(j, b) == 0) {
      row[j + G.stride(b)] += scale / hg;
      row[j] -= scale / hg;
    } else {
      row[j + G.stride(b)] += scale / (2.0 * hg);
      row[j - G.stride(b)] -= scale / (2.0 * hg);
    }
  };

  const double far = p.far_gamma != 0.0 ? p.far_gamma : 2.0 - n;
  const double shrink = (opt.L - 2.0 * hg) / opt.L;
  for (int i = 0; i < N; ++i) {
    row.clear();
    const Vec x = G.point(i);
    if (G.is_outer(i)) {
      kind[i] = outer_row;
      row[i] += 1.0;
      if (p.dirichlet) {
        rhs(i) = (*p.dirichlet)(x);
      } else {
        const double s = std::pow(shrink, -far);
        for (const auto& [j, w] : G.hat_weights(x * shrink)) row[j] -= s * w;
      }
    } else {
      double V = sqrtg[i] * cell_volume(i);
      for (int a = 0; a < n; ++a) {
        double area = 1.0;
        for (int b = 0; b < n; ++b)
          if (b != a) area *= width(i, b);
        // right face: -area * F^+
        {
          const Mat& K = Kmid[static_cast<size_t>(i) * n + a];
          const int ip = i + G.stride(a);
          row[ip] -= area * K(a, a) / hg;
          row[i] += area * K(a, a) / hg;
          for (int b = 0; b < n; ++b) {
            if (b == a) continue;
            Db(i, b, -0.5 * area * K(a, b));
            Db(ip, b, -0.5 * area * K(a, b));
          }
        }
        if (G.is_face_axis(a) && idx_of(i, a) == 0) {
          const double s = sqrtg[i] * std::sqrt(ginv[i](a, a));
          const double hk = face_h(p, a)(x);
          if (p.check_signs && hk < -1e-12) throw DomainError("sign hypothesis h_k >= 0 violated");
          row[i] += area * s * hk;
          rhs(i) += area * s * face_f(p, a)(x);
          kind[i] = face_row;
          if (face_of[i] < 0) face_of[i] = a;
        } else {
          const Mat K = Kleft(i, a);
          const int im = i - G.stride(a);
          row[i] += area * K(a, a) / hg;
          row[im] -= area * K(a, a) / hg;
          for (int b = 0; b < n; ++b) {
            if (b == a) continue;
            Db(im, b, 0.5 * area * K(a, b));
            Db(i, b, 0.5 * area * K(a, b));
          }
        }
      }
      row[i] += H[i];
      rhs(i) += F[i];
      for (auto& [j, c] : row) c /= V;
      rhs(i) /= V;
    }
    for (const auto& [j, c] : row)
      if (c != 0.0) trip.emplace_back(i, j, c);
  }
  Assembly as;
  as.grid = grid;
  as.A.resize(N, N);
  as.A.setFromTriplets(trip.begin(), trip.end());
  as.A.makeCompressed();
  as.b = std::move(rhs);
  as.kind = std::move(kind);
  as.face_of = std::move(face_of);
  return as;
}

double shell_mean_abs(const GridFunction& w, double r) {
  const Grid& G = w.grid();
  const auto nodes = sector_sphere_nodes(G.kind(), G.dim(), r, 8);
  double s = 0.0, a = 0.0;
  for (const SphereNode& p : nodes) {
    s += p.w * std::abs(w(p.x));
    a += p.w;
  }
  return s / a;
}

BvpSolution finish(const RobinProblem& p, const BvpOptions& opt, const Assembly& as,
                   Eigen::VectorXd x, int iterations) {
  const Grid& G = *as.grid;
  const int N = G.size();
  BvpSolution s;
  s.unknowns = N;
  s.iterations = iterations;
  const Eigen::VectorXd r = as.A * x - as.b;
  const double bn = as.b.norm();
  s.linear_residual = bn > 0.0 ? r.norm() / bn : r.norm();
  s.residual_boundary.assign(face_axes(G).size(), 0.0);
  s.min_diagonal_margin = 1e300;
  for (int i = 0; i < N; ++i) {
    if (as.kind[i] == interior_row) s.residual_interior = std::max(s.residual_interior, std::abs(r(i)));
    if (as.kind[i] == face_row) {
      const int k = as.face_of[i] == 0 ? 0 : 1;
      s.residual_boundary[k] = std::max(s.residual_boundary[k], std::abs(r(i)));
    }
    if (as.kind[i] == outer_row) continue;
    double d = 0.0, off = 0.0;
    for (SpMat::InnerIterator it(as.A, i); it; ++it) {
      if (it.col() == i) d = it.value();
      else off += std::abs(it.value());
    }
    s.min_diagonal_margin = std::min(s.min_diagonal_margin, (std::abs(d) - off) / std::abs(d));
  }
  std::vector<double> v(x.data(), x.data() + N);
  s.w.emplace(as.grid, std::move(v), p.far_gamma != 0.0 ? p.far_gamma : 2.0 - G.dim());
  s.sup_abs = s.w->sup_abs();
  s.min_value = s.w->min();
  s.max_value = s.w->max();
  // nodal C^0_gamma and C^1_gamma
  double c0 = 0.0, c1 = 0.0;
  for (int i = 0; i < N; ++i) {
    if (G.is_outer(i)) continue;
    const Vec xi = G.point(i);
    const double rr = std::max(xi.norm(), 1.0);
    c0 = std::max(c0, std::pow(rr, -p.gamma) * std::abs(x(i)));
    double g2 = 0.0;
    for (int a = 0; a < G.dim(); ++a) {
      const int ip = i + G.stride(a);
      const bool edge = G.is_face_axis(a) && (i / G.stride(a)) % G.extent(a) == 0;
      const double d = edge ? (x(ip) - x(i)) / opt.hg : (x(ip) - x(i - G.stride(a))) / (2.0 * opt.hg);
      g2 += d * d;
    }
    c1 = std::max(c1, std::pow(rr, 1.0 - p.gamma) * std::sqrt(g2));
  }
  s.weighted_norm_report["C0_gamma"] = c0;
  s.weighted_norm_report["C1_gamma"] = c0 + c1;
  // decay exponent from shell means
  const double L = opt.L;
  std::vector<double> lr, lw;
  for (double rad : {L / 4.0, L / 2.0, L - 2.0 * opt.hg}) {
    const double m = shell_mean_abs(*s.w, rad);
    if (m > 0.0) {
      lr.push_back(std::log(rad));
      lw.push_back(std::log(m));
    }
  }
  if (lr.size() == 3) {
    const double mr = (lr[0] + lr[1] + lr[2]) / 3.0, mw = (lw[0] + lw[1] + lw[2]) / 3.0;
    double num = 0.0, den = 0.0;
    for (int k = 0; k < 3; ++k) {
      num += (lr[k] - mr) * (lw[k] - mw);
      den += (lr[k] - mr) * (lr[k] - mr);
    }
    s.decay_fit = num / den;
  }
  return s;
}

BvpSolution solve_assembled(const RobinProblem& p, const BvpOptions& opt, const Assembly& as,
                            const Eigen::VectorXd& b) {
  const int N = as.grid->size();
  if (b.norm() == 0.0) return finish(p, opt, as, Eigen::VectorXd::Zero(N), 0);
  Eigen::BiCGSTAB<SpMat, Eigen::IncompleteLUT<double>> solver;
  solver.preconditioner().setDroptol(1e-4);
  solver.preconditioner().setFillfactor(4);
  solver.setTolerance(opt.tol);
  solver.setMaxIterations(opt.max_iterations);
  solver.compute(as.A);
  if (solver.info() != Eigen::Success) throw SolveError("preconditioner setup failed (singular operator?)");
  Eigen::VectorXd x = solver.solve(b);
  if (solver.info() != Eigen::Success || !x.allFinite())
    throw SolveError("linear solve did not converge (error " + std::to_string(solver.error()) + ")");
  return finish(p, opt, as, std::move(x), static_cast<int>(solver.iterations()));
}

}  // namespace

BvpSolution solve_robin_bvp(const RobinProblem& problem, const BvpOptions& opt) {
  if (!(problem.gamma > 2.0 - problem.metric.dim() && problem.gamma < 0.0))
    throw DomainError("decay order gamma must lie in (2 - n, 0)");
  const Assembly as = assemble(problem, opt);
  return solve_assembled(problem, opt, as, as.b);
}

std::vector<double> apply_discrete_operator(const RobinProblem& problem, const BvpOptions& opt,
                                            const std::vector<double>& w) {
  const Assembly as = assemble(problem, opt);
  if (static_cast<int>(w.size()) != as.grid->size()) throw Error("nodal vector size mismatch");
  const Eigen::Map<const Eigen::VectorXd> wv(w.data(), static_cast<Eigen::Index>(w.size()));
  const Eigen::VectorXd r = as.A * wv;
  return std::vector<double>(r.data(), r.data() + r.size());
}

BvpSolution solve_discrete_system(const RobinProblem& problem, const BvpOptions& opt,
                                  const std::vector<double>& rhs) {
  const Assembly as = assemble(problem, opt);
  if (static_cast<int>(rhs.size()) != as.grid->size()) throw Error("rhs size mismatch");
  const Eigen::Map<const Eigen::VectorXd> b(rhs.data(), static_cast<Eigen::Index>(rhs.size()));
  return solve_assembled(problem, opt, as, b);
}

namespace {

// memoized pointwise evaluation keyed on the bit pattern of x
ScalarField memoized(std::function<double(const Vec&)> f) {
  auto cache = std::make_shared<std::unordered_map<std::string, double>>();
  ScalarField s;
  s.f = [cache, f = std::move(f)](const Vec& x) {
    std::string key(reinterpret_cast<const char*>(x.data()), sizeof(double) * x.size());
    auto it = cache->find(key);
    if (it != cache->end()) return it->second;
    const double v = f(x);
    cache->emplace(std::move(key), v);
    return v;
  };
  return s;
}

ScalarField scaled(const ScalarField& s, double c) {
  ScalarField o;
  o.f = [s, c](const Vec& x) { return c * s(x); };
  return o;
}

ScalarField face_mean(const MetricField& field, int axis, double h) {
  const HypersurfaceChart chart = axis == 0 ? HypersurfaceChart::face_x1() : HypersurfaceChart::face_xn();
  return memoized([field, chart, h](const Vec& x) { return mean_curvature(field, chart, x, h); });
}

}  // namespace

RobinProblem mollified_correction_problem(const MetricField& field_delta, double h) {
  const int n = field_delta.dim();
  const double c = conformal_constant(n);
  ScalarField Rm = memoized([field_delta, h](const Vec& x) {
    return std::max(-scalar_curvature(field_delta, x, h), 0.0);
  });
  RobinProblem p;
  p.metric = field_delta;
  p.h = scaled(Rm, -c);
  p.f = scaled(Rm, c);
  auto neg = [](const ScalarField& H) {
    ScalarField o;
    o.f = [H](const Vec& x) { return std::max(-H(x), 0.0); };
    return o;
  };
  const ScalarField H1m = neg(face_mean(field_delta, 0, h));
  p.h1 = scaled(H1m, -2.0 * c);
  p.f1 = scaled(H1m, 2.0 * c);
  if (field_delta.kind() == DomainKind::quarter_space) {
    const ScalarField H2m = neg(face_mean(field_delta, n - 1, h));
    p.h2 = scaled(H2m, -2.0 * c);
    p.f2 = scaled(H2m, 2.0 * c);
  }
  p.gamma = 0.5 * (2.0 - n) - 0.25;
  p.check_signs = false;
  return p;
}

RobinProblem strict_positivity_problem(const MetricField& field_tilde, double h) {
  const int n = field_tilde.dim();
  const double c = conformal_constant(n);
  ScalarField R = memoized([field_tilde, h](const Vec& x) { return scalar_curvature(field_tilde, x, h); });
  RobinProblem p;
  p.metric = field_tilde;
  p.h = scaled(R, c);
  p.f = scaled(R, -c);
  const ScalarField H1 = face_mean(field_tilde, 0, h);
  p.h1 = scaled(H1, 2.0 * c);
  p.f1 = scaled(H1, -2.0 * c);
  if (field_tilde.kind() == DomainKind::quarter_space) {
    const ScalarField H2 = face_mean(field_tilde, n - 1, h);
    p.h2 = scaled(H2, 2.0 * c);
    p.f2 = scaled(H2, -2.0 * c);
  }
  p.gamma = 0.5 * (2.0 - n) - 0.25;
  p.check_signs = false;
  return p;
}

BvpSolution solve_mollified_correction(const MetricField& field_delta, const BvpOptions& opt) {
  return solve_robin_bvp(mollified_correction_problem(field_delta, opt.quad.h), opt);
}

BvpSolution solve_strict_positivity(const MetricField& field_tilde, const BvpOptions& opt,
                                    double sign_tol) {
  BvpSolution s = solve_robin_bvp(strict_positivity_problem(field_tilde, opt.quad.h), opt);
  if (!(1.0 + s.min_value > 0.0)) throw SolveError("v = 1 + z is not positive");
  if (1.0 + s.max_value > 1.0 + sign_tol) s.weighted_norm_report["max_v_excess"] = s.max_value;
  return s;
}

double continuous_operator(const MetricField& metric, const ScalarField& w, const ScalarField& h,
                           const Vec& x, double step) {
  const ScalarJet j = scalar_jet(w, x, 2, step, metric.kind());
  return -laplacian(metric, j, x, step) + h(x) * j.v;
}

double continuous_boundary_operator(const MetricField& metric, const ScalarField& w,
                                    const ScalarField& hk, int axis, const Vec& x, double step) {
  const int n = metric.dim();
  const ScalarJet j = scalar_jet(w, x, 1, step, metric.kind());
  const Mat gi = metric.eval(x).inverse();
  double dn = 0.0;
  for (int a = 0; a < n; ++a) dn -= gi(axis, a) * j.d[a];
  dn /= std::sqrt(gi(axis, axis));
  return dn + hk(x) * j.v;
}

}  // namespace pmt
