#include "pmt/testbed/pipeline.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cmath>
#include <limits>
#include <optional>
#include <set>

#include "pmt/collar/control.hpp"
#include "pmt/conformal/conformal.hpp"
#include "pmt/doubling/doubling.hpp"
#include "pmt/geometry/decay.hpp"
#include "pmt/geometry/hypersurface.hpp"
#include "pmt/testbed/config.hpp"

namespace pmt {

Tolerances default_tolerances() {
  return {{"decay_tau_slack", 0.1},
          {"collar_roundtrip", 1e-10},
          {"locality_mismatches", 0.0},
          {"control_singular_fit", 0.05},
          {"control_variation", 2.0},
          {"control_noise_floor", 1e-8},
          {"curvature_floor", 1e-6},
          {"mass_relative", 0.005},
          {"shift_relative", 0.02},
          {"positivity_abs", 1e-6},
          {"strict_positivity_upper", 1e-9},
          {"flatten_defect", 1e-12},
          {"c2", 1e-3},
          {"doubling_ratio", 1e-10},
          {"order_min", 1.7},
          {"green_symmetry", 1e-14},
          {"green_representation", 0.01},
          {"euclidean_zero", 1e-12},
          {"runtime_euclidean", 1.0},
          {"runtime_schwarzschild", 60.0}};
}

Tolerances merged_tolerances(const Tolerances& overrides) {
  Tolerances t = default_tolerances();
  for (const auto& [k, v] : overrides) {
    if (!t.count(k)) throw ConfigError("unknown tolerance '" + k + "'");
    t[k] = v;
  }
  return t;
}

namespace {

const std::map<std::string, std::vector<std::string>>& prerequisites() {
  static const std::map<std::string, std::vector<std::string>> m = {
      {"build", {}},
      {"decay", {"build"}},
      {"curvature", {"build"}},
      {"collar", {"build"}},
      {"mollify", {"collar"}},
      {"control", {"mollify"}},
      {"solve", {"mollify"}},
      {"corrected", {"solve"}},
      {"mass", {"build"}},
      {"shift", {"solve", "mass"}},
      {"positivity", {"mass"}},
      {"flatten", {"build"}},
      {"double", {"build"}},
      {"interface", {"double"}},
      {"relation", {"double"}}};
  return m;
}

bool is_criterion(const std::string& s, int* k = nullptr) {
  const std::string p = "criterion-";
  if (s.rfind(p, 0) != 0) return false;
  const std::string rest = s.substr(p.size());
  if (rest.empty() || rest.find_first_not_of("0123456789") != std::string::npos) return false;
  const int v = std::stoi(rest);
  if (v < 1 || v > 11) return false;
  if (k) *k = v;
  return true;
}

const std::map<std::string, std::vector<std::string>>& pipelines() {
  static const std::map<std::string, std::vector<std::string>> m = {
      {"theorem-1",
       {"build", "decay", "curvature", "collar", "mollify", "control", "solve", "corrected",
        "mass", "shift", "positivity"}},
      {"theorem-2",
       {"build", "decay", "curvature", "flatten", "double", "interface", "relation", "mass",
        "positivity"}},
      {"curvature", {"build", "curvature"}},
      {"mass", {"build", "mass"}},
      {"mollify", {"build", "collar", "mollify", "control"}},
      {"solve", {"build", "collar", "mollify", "solve", "corrected"}},
      {"flatten", {"build", "flatten"}},
      {"double", {"build", "flatten", "double", "interface", "relation"}}};
  return m;
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string tag(double delta) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "d%g", delta);
  return buf;
}

struct DeltaRun {
  double delta = 0.0;
  MollifierSpec spec;
  MetricField fd;
  std::optional<BvpSolution> w;
  std::optional<CorrectedMetric> corrected;
};

struct Skip {
  std::string reason;
};

class Runner {
 public:
  explicit Runner(const ScenarioConfig& cfg)
      : cfg_(cfg),
        tol_(merged_tolerances(cfg.tolerances)),
        traits_(scenario_traits(cfg.scenario, cfg.params, cfg.domain)) {}

  Report run() {
    Report r;
    const std::vector<std::string> stages = resolve_pipeline(cfg_.pipeline);
    r.pipeline = join(cfg_.pipeline);
    r.scenario = to_string(cfg_.scenario);
    r.config_hash = config_hash(cfg_);
    r.grid = {make_record("n", cfg_.domain.n),
              make_record("r_inner", cfg_.domain.r_inner),
              make_record("r_outer", cfg_.domain.r_outer),
              make_record("h", cfg_.domain.h),
              make_record("grid_L", cfg_.grid_L),
              make_record("grid_h", cfg_.grid_h),
              make_record("flatten_radius", cfg_.flatten_radius)};
    for (double d : cfg_.deltas) r.grid.push_back(make_record("delta", d));
    report_ = &r;
    bool aborted = false;
    std::set<std::string> unavailable;
    for (const std::string& name : stages) {
      StageResult s;
      s.name = name;
      const auto t0 = std::chrono::steady_clock::now();
      if (aborted) {
        s.status = StageStatus::skipped;
        s.message = "skipped after an earlier error";
      } else if (const std::string* dep = missing(name, unavailable)) {
        s.status = StageStatus::skipped;
        s.message = "prerequisite '" + *dep + "' unavailable";
        unavailable.insert(name);
      } else {
        try {
          dispatch(name, s);
          s.settle();
        } catch (const Skip& k) {
          s.status = StageStatus::skipped;
          s.message = k.reason;
          unavailable.insert(name);
        } catch (const std::exception& e) {
          s.status = StageStatus::error;
          s.message = "stage '" + name + "': " + e.what();
          aborted = true;
        }
      }
      s.seconds = seconds_since(t0);
      r.stages.push_back(std::move(s));
    }
    return r;
  }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (const auto& s : v) out += (out.empty() ? "" : ",") + s;
    return out;
  }

  const std::string* missing(const std::string& name, const std::set<std::string>& unavailable) {
    int k = 0;
    if (is_criterion(name, &k)) return nullptr;
    for (const std::string& d : prerequisites().at(name))
      if (unavailable.count(d)) return &d;
    return nullptr;
  }

  double tol(const std::string& k) const { return tol_.at(k); }

  const MetricField& field() const { return *field_; }

  BvpOptions bvp() const {
    BvpOptions o;
    o.L = cfg_.grid_L;
    o.hg = cfg_.grid_h;
    o.quad = quad();
    return o;
  }

  QuadratureSpec quad() const {
    QuadratureSpec q;
    q.h = cfg_.domain.h;
    q.r_outer = cfg_.domain.r_outer;
    return q;
  }

  // mass radii and truncation inside the grid box
  QuadratureSpec box_quad() const {
    QuadratureSpec q = quad();
    q.r_outer = std::min(cfg_.domain.r_outer, cfg_.grid_L - 2.0 * cfg_.grid_h);
    return q;
  }

  std::vector<double> box_radii() const {
    const QuadratureSpec q = box_quad();
    return {0.5 * q.r_outer, 0.75 * q.r_outer, q.r_outer - 2.0 * q.h};
  }

  void need_interface() const {
    if (field().mode() != FieldMode::two_piece) throw Skip{"scenario has no interface"};
  }

  void dispatch(const std::string& name, StageResult& s) {
    int k = 0;
    if (is_criterion(name, &k)) {
      StageResult c = run_criterion(k, tol_);
      s.checks = std::move(c.checks);
      s.message = c.message;
      s.status = c.status;
      return;
    }
    if (name == "build") return build(s);
    if (name == "decay") return decay(s);
    if (name == "curvature") return curvature(s);
    if (name == "collar") return collar(s);
    if (name == "mollify") return mollify(s);
    if (name == "control") return control(s);
    if (name == "solve") return solve(s);
    if (name == "corrected") return corrected(s);
    if (name == "mass") return mass(s);
    if (name == "shift") return shift(s);
    if (name == "positivity") return positivity(s);
    if (name == "flatten") return flatten(s);
    if (name == "double") return doubling(s);
    if (name == "interface") return interface(s);
    if (name == "relation") return relation(s);
    throw ConfigError("unknown stage '" + name + "'");
  }

  void build(StageResult& s) {
    field_ = builtin_metric(cfg_);
    s.add(make_record("tau", field_->tau()));
    s.add(make_record("C", field_->C_decay()));
    if (field_->mode() == FieldMode::two_piece) {
      s.add(make_record("interface_radius", field_->interface_radius()));
      s.add(make_check("interface_mismatch", field_->interface_mismatch(), Relation::le,
                       field_->match_tol()));
    }
  }

  void decay(StageResult& s) {
    const double R = cfg_.domain.r_outer;
    const DecayProfile p = decay_profile(field(), {R / 8, R / 4, R / 2, R}, cfg_.domain.h);
    s.add(make_check("violation", p.violation ? 1.0 : 0.0, Relation::le, 0.0));
    s.add(make_check("tau_hat", p.tau_hat, Relation::ge, field().tau() - tol("decay_tau_slack")));
    s.add(make_record("C_hat", p.C_hat));
  }

  void curvature(StageResult& s) {
    const int n = cfg_.domain.n;
    const double h = cfg_.domain.h;
    const bool two = field().mode() == FieldMode::two_piece;
    const double r0 = field().interface_radius();
    double minR = std::numeric_limits<double>::infinity(), maxR = -minR;
    double minH = minR;
    for (const Vec& d : sector_directions(cfg_.domain.kind, n, 16))
      for (double rho : {1.5, 3.0, 6.0, 12.0}) {
        if (rho >= cfg_.domain.r_outer) continue;
        if (two && std::abs(rho - r0) < 0.25) continue;
        const Vec x = rho * d;
        const double R = scalar_curvature(field(), x, h);
        minR = std::min(minR, R);
        maxR = std::max(maxR, R);
        std::vector<HypersurfaceChart> faces = {HypersurfaceChart::face_x1()};
        if (cfg_.domain.kind == DomainKind::quarter_space) faces.push_back(HypersurfaceChart::face_xn());
        for (const HypersurfaceChart& f : faces) {
          const int axis = f.kind == SurfaceKind::boundary_face_x1 ? 0 : n - 1;
          Vec y = d;
          y(axis) = 0.0;
          if (y.norm() < 1e-3) continue;
          y *= rho / y.norm();
          minH = std::min(minH, mean_curvature(field(), f, y, h));
        }
      }
    if (traits_.satisfies_hypotheses) {
      s.add(make_check("min_R", minR, Relation::ge, -tol("curvature_floor")));
      s.add(make_check("min_H", minH, Relation::ge, -tol("curvature_floor")));
    } else {
      s.add(make_record("min_R", minR));
      s.add(make_record("min_H", minH));
    }
    s.add(make_record("max_R", maxR));
  }

  void collar(StageResult& s) {
    need_interface();
    Domain d = cfg_.domain;
    d.r_inner = field().interface_radius();
    collar_ = build_collar_field(field(), d);
    double err = 0.0;
    for (const Vec& dir : sector_directions(cfg_.domain.kind, cfg_.domain.n, 8))
      for (double t : {-0.9, -0.3, 0.0, 0.4, 0.9}) {
        const Vec x = collar_->r0() * dir;
        const auto [xb, tb] = collar_->from_ambient(collar_->to_ambient(x, t));
        err = std::max({err, (xb - x).norm(), std::abs(tb - t)});
      }
    s.add(make_record("epsilon", collar_->epsilon()));
    s.add(make_check("roundtrip", err, Relation::le, tol("collar_roundtrip")));
  }

  void mollify(StageResult& s) {
    runs_.clear();
    double prev = std::numeric_limits<double>::infinity();
    for (double delta : cfg_.deltas) {
      DeltaRun run;
      run.delta = delta;
      run.spec.delta = delta;
      run.fd = mollify_metric(field(), collar_, run.spec);
      int mismatches = 0;
      for (const Vec& dir : sector_directions(cfg_.domain.kind, cfg_.domain.n, 12))
        for (double t : {-1.5, -0.9, -0.5 * delta - 1e-3, 0.5 * delta + 1e-3, 0.9, 1.5}) {
          const Vec x = collar_->r0() * dir;
          const Vec y = std::abs(t) < collar_->epsilon()
                            ? collar_->to_ambient(x, t)
                            : Vec(dir * (collar_->r0() + t));
          const Mat a = run.fd.eval(y), b = field().eval(y);
          if (!(a.array() == b.array()).all()) ++mismatches;
        }
      const double sup = band_sup_difference(run.fd, field());
      const std::string t = tag(delta);
      s.add(make_check("outside_band_mismatches_" + t, mismatches, Relation::le,
                       tol("locality_mismatches")));
      if (std::isfinite(prev))
        s.add(make_check("band_sup_ratio_" + t, sup / prev, Relation::lt, 1.0));
      s.add(make_record("band_sup_" + t, sup));
      prev = sup;
      runs_.push_back(std::move(run));
    }
  }

  static double variation(const std::vector<double>& v, double floor) {
    double lo = std::numeric_limits<double>::infinity(), hi = 0.0;
    for (double x : v) {
      lo = std::min(lo, std::max(std::abs(x), floor));
      hi = std::max(hi, std::max(std::abs(x), floor));
    }
    return hi / lo;
  }

  void control(StageResult& s) {
    std::vector<double> smooth, fitted, bmean;
    for (const DeltaRun& run : runs_) {
      const CurvatureControlReport c =
          curvature_control_report(run.fd, field(), *collar_, run.spec);
      const std::string t = tag(run.delta);
      s.add(make_record("singular_fit_error_" + t, c.singular_fit_error));
      s.add(make_record("fitted_coefficient_" + t, c.fitted_coefficient));
      s.add(make_record("smooth_bound_" + t, c.smooth_bound));
      s.add(make_record("smooth_bound_fitted_" + t, c.smooth_bound_fitted));
      s.add(make_record("boundary_mean_" + t, c.boundary_mean_bound));
      smooth.push_back(c.smooth_bound);
      fitted.push_back(c.smooth_bound_fitted);
      bmean.push_back(c.boundary_mean_bound);
      if (&run == &runs_.back())
        s.add(make_check("singular_fit_error", c.singular_fit_error, Relation::le,
                         tol("control_singular_fit")));
    }
    const double floor = tol("control_noise_floor");
    s.add(make_check("remainder_variation", variation(smooth, floor), Relation::le,
                     tol("control_variation")));
    s.add(make_record("remainder_variation_fitted", variation(fitted, floor)));
    s.add(make_check("boundary_mean_variation", variation(bmean, floor), Relation::le,
                     tol("control_variation")));
  }

  void solve(StageResult& s) {
    double prev = std::numeric_limits<double>::infinity();
    for (DeltaRun& run : runs_) {
      run.w = solve_mollified_correction(run.fd, bvp());
      const std::string t = tag(run.delta);
      s.add(make_record("w_sup_" + t, run.w->sup_abs));
      s.add(make_record("iterations_" + t, run.w->iterations));
      s.add(make_check("linear_residual_" + t, run.w->linear_residual, Relation::le,
                       10.0 * bvp().tol));
      if (std::isfinite(prev))
        s.add(make_check("w_sup_ratio_" + t, run.w->sup_abs / std::max(prev, 1e-300),
                         Relation::le, 1.0));
      prev = run.w->sup_abs;
    }
  }

  void corrected(StageResult& s) {
    for (DeltaRun& run : runs_) {
      CertificateOptions co;
      co.h = cfg_.domain.h;
      co.calibration = calibrate_discretization(run.fd, bvp(), cfg_.domain.h);
      run.corrected = corrected_metric(run.fd, *run.w, co);
      const CurvatureCertificates& c = run.corrected->certificates;
      const std::string t = tag(run.delta);
      s.add(make_check("min_R_" + t, c.min_R, Relation::ge, -c.tol_R));
      s.add(make_check("min_H_" + t, c.min_H_trace, Relation::ge, -c.tol_H));
      s.add(make_record("excluded_points_" + t, c.excluded_points));
      s.add(make_record("min_R_excluded_" + t, c.min_R_excluded));
    }
  }

  void mass(StageResult& s) {
    const QuadratureSpec q = quad();
    mass_ = mass_series(field(), default_mass_radii(q), q);
    report_->series.push_back(make_series("mass_g", *mass_));
    s.add(make_record("m", mass_->m_infinity));
    s.add(make_record("fit_residual", mass_->fit_residual));
    if (std::isfinite(traits_.expected_mass)) {
      const double ref = traits_.expected_mass;
      const double err = ref != 0.0 ? std::abs(mass_->m_infinity / ref - 1.0)
                                    : std::abs(mass_->m_infinity);
      s.add(make_record("m_expected", ref));
      s.add(make_check(ref != 0.0 ? "m_relative_error" : "m_abs_error", err, Relation::le,
                       ref != 0.0 ? tol("mass_relative") : tol("positivity_abs")));
    }
  }

  void shift(StageResult& s) {
    const QuadratureSpec q = box_quad();
    const std::vector<double> radii = box_radii();
    const MassEstimate mg = mass_series(field(), radii, q);
    report_->series.push_back(make_series("mass_g_box", mg));
    const int n = cfg_.domain.n;
    for (const DeltaRun& run : runs_) {
      const ConformalFactor u{run.w->field(1.0), 2.0 - n};
      const MetricField gt = run.corrected ? run.corrected->metric : conformal_field(run.fd, u);
      const MassEstimate mt = mass_series(gt, radii, q);
      const std::string t = tag(run.delta);
      report_->series.push_back(make_series("mass_tilde_" + t, mt));
      const MassShift e = conformal_mass_shift(run.fd, u, q);
      const double diff = mg.m_infinity - mt.m_infinity;
      const double scale = std::max(std::abs(mg.m_infinity), std::abs(e.total));
      s.add(make_record("mass_difference_" + t, diff));
      s.add(make_record("energy_" + t, e.total));
      s.add(make_check("shift_identity_" + t, std::abs(diff - e.total), Relation::le,
                       tol("shift_relative") * scale));
      s.add(make_record("shift_agreement_" + t,
                        std::abs(diff - e.total) / std::max(std::abs(diff), std::abs(e.total))));
    }
  }

  void positivity(StageResult& s) {
    const double combined = tol("positivity_abs") + mass_->fit_residual;
    if (traits_.satisfies_hypotheses)
      s.add(make_check("m", mass_->m_infinity, Relation::ge, -combined));
    else
      s.add(make_record("m", mass_->m_infinity));
    if (!traits_.strict_jump) return;
    s.add(make_check("m_strict", mass_->m_infinity, Relation::gt, 0.0));
    const DeltaRun* run = nullptr;
    for (const DeltaRun& r : runs_)
      if (r.corrected) run = &r;
    if (!run) {
      s.message = "no corrected metric; mass gap not computed";
      return;
    }
    const MetricField& gt = run->corrected->metric;
    const BvpSolution z = solve_strict_positivity(gt, bvp());
    CertificateOptions co;
    co.h = cfg_.domain.h;
    const HatMetric hm = hat_metric(gt, z, co, quad());
    report_->series.push_back(make_series("mass_hat", hm.mass_hat));
    s.add(make_check("v_min", 1.0 + z.min_value, Relation::gt, 0.0));
    s.add(make_check("v_max_excess", hm.max_v - 1.0, Relation::le, tol("strict_positivity_upper")));
    s.add(make_check("gap_mass_difference", hm.gap_mass_difference, Relation::gt, 0.0));
    s.add(make_check("gap_energy", hm.gap_energy.total, Relation::gt, 0.0));
    s.add(make_record("m_hat", hm.mass_hat.m_infinity));
    s.add(make_check("hat_min_R", hm.certificates.min_R, Relation::ge, -hm.certificates.tol_R));
    s.add(make_check("hat_min_H", hm.certificates.min_H_trace, Relation::ge,
                     -hm.certificates.tol_H));
  }

  void flatten(StageResult& s) {
    if (field().kind() != DomainKind::quarter_space) throw Skip{"flattening needs a quarter space"};
    FlattenOptions fo;
    fo.quad = quad();
    fo.certificates.h = cfg_.domain.h;
    flat_ = conformally_flatten(field(), cfg_.flatten_radius, cfg_.domain, fo);
    const CurvatureCertificates& c = flat_->curvature_certificates;
    s.add(make_record("K_radius", flat_->K_radius));
    s.add(make_record("v_sup", flat_->v.sup_abs));
    s.add(make_check("min_R", c.min_R, Relation::ge, -c.tol_R));
    s.add(make_check("min_H", c.min_H_trace, Relation::ge, -c.tol_H));
    s.add(make_check("max_abs_R_outer", c.max_abs_R_outer, Relation::le, c.tol_R));
    s.add(make_check("max_abs_H_outer", c.max_abs_H_outer, Relation::le, c.tol_H));
    s.add(make_check("flatness_defect", flat_->flatness_defect, Relation::le, tol("flatten_defect")));
    s.add(make_record("mass_drift", flat_->mass_drift));
    report_->series.push_back(make_series("mass_flatten_g", flat_->mass_g));
    report_->series.push_back(make_series("mass_flatten_eps", flat_->mass_eps));
  }

  void doubling(StageResult& s) {
    if (field().kind() != DomainKind::quarter_space) throw Skip{"doubling needs a quarter space"};
    DoublingOptions o;
    o.K_radius = flat_ ? flat_->K_radius : 0.0;
    o.h = cfg_.domain.h;
    o.r_outer = cfg_.domain.r_outer;
    o.tol = tol("c2");
    doubled_ = double_manifold(flat_ ? flat_->g_eps : field(), o);
    s.add(make_check("second_ff_outside_K", doubled_->max_second_ff, Relation::le, tol("c2")));
  }

  void interface(StageResult& s) {
    const int n = cfg_.domain.n;
    const double K = doubled_->K_radius, R = cfg_.domain.r_outer;
    const auto probes = seam_probes(n, K, R, 12);
    const C2Report c = check_c2_across_interface(*doubled_, probes, cfg_.domain.h, tol("c2"));
    s.add(make_check("g_an_defect", c.max_g_an_defect, Relation::le, tol("c2")));
    s.add(make_check("g_ij_n", c.max_g_ij_n, Relation::le, tol("c2")));
    s.add(make_record("cartesian_g_in", c.cartesian_g_in));
    s.add(make_record("derivative_jump", c.derivative_jump));
    const SeamCurvature sc = seam_mean_curvatures(*doubled_, probes.front(), cfg_.domain.h);
    s.add(make_record("seam_H_from_base", sc.from_base));
    s.add(make_record("seam_H_from_mirror", sc.from_mirror));
    const InterfaceExtension ie = extend_interface(doubled_->doubled, 0.5 * (K + R), K, cfg_.domain.h);
    s.add(make_check("orthogonality_defect", ie.orthogonality_defect, Relation::le, tol("c2")));
  }

  void relation(StageResult& s) {
    const QuadratureSpec q = quad();
    const double R = q.r_outer;
    std::vector<double> radii = {0.65 * R, 0.8 * R, R - 2.0 * q.h};
    if (!(radii.front() > doubled_->K_radius)) throw Error("mass radii must lie outside K");
    const DoubledMass dm = doubled_mass_relation(*doubled_, radii, q);
    MassEstimate c, d;
    c.samples = dm.corner;
    c.m_infinity = dm.m_corner;
    d.samples = dm.doubled;
    d.m_infinity = dm.m_doubled;
    report_->series.push_back(make_series("mass_corner", c));
    report_->series.push_back(make_series("mass_doubled", d));
    s.add(make_record("m_corner", dm.m_corner));
    s.add(make_record("m_doubled", dm.m_doubled));
    s.add(make_check("relation_defect",
                     std::abs(dm.m_doubled - 2.0 * dm.m_corner) / std::max(1.0, std::abs(dm.m_corner)),
                     Relation::le, tol("doubling_ratio")));
    s.add(make_check("sample_defect", dm.max_sample_defect, Relation::le, tol("doubling_ratio")));
  }

  const ScenarioConfig& cfg_;
  Tolerances tol_;
  ScenarioTraits traits_;
  Report* report_ = nullptr;
  std::optional<MetricField> field_;
  std::shared_ptr<const CollarChart> collar_;
  std::vector<DeltaRun> runs_;
  std::optional<MassEstimate> mass_;
  std::optional<FlatteningResult> flat_;
  std::optional<DoubledConfig> doubled_;
};

}  // namespace

bool is_named_pipeline(const std::string& name) {
  return pipelines().count(name) || name == "acceptance" || is_criterion(name);
}

std::vector<std::string> named_pipeline(const std::string& name) {
  if (name == "acceptance") {
    std::vector<std::string> v;
    for (int k = 1; k <= 11; ++k) v.push_back("criterion-" + std::to_string(k));
    return v;
  }
  if (is_criterion(name)) return {name};
  auto it = pipelines().find(name);
  if (it == pipelines().end()) throw ConfigError("unknown pipeline '" + name + "'");
  return it->second;
}

std::vector<std::string> resolve_pipeline(const std::vector<std::string>& stages) {
  if (stages.empty()) throw ConfigError("empty pipeline");
  std::vector<std::string> out = stages;
  if (stages.size() == 1 && is_named_pipeline(stages.front()) &&
      !prerequisites().count(stages.front()))
    out = named_pipeline(stages.front());
  else if (stages.size() == 1 && pipelines().count(stages.front()))
    out = named_pipeline(stages.front());
  std::set<std::string> seen;
  for (const std::string& s : out) {
    if (is_criterion(s)) {
      seen.insert(s);
      continue;
    }
    auto it = prerequisites().find(s);
    if (it == prerequisites().end()) throw ConfigError("unknown stage '" + s + "'");
    if (seen.count(s)) throw ConfigError("stage '" + s + "' appears twice");
    for (const std::string& d : it->second)
      if (!seen.count(d))
        throw ConfigError("stage '" + s + "' needs '" + d + "' earlier in the pipeline");
    seen.insert(s);
  }
  return out;
}

Report run_pipeline(const ScenarioConfig& config) {
  config.validate();
  return Runner(config).run();
}

}  // namespace pmt
