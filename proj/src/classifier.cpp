#include "weingarten/classifier.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <vector>

namespace wg {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;

DiagnosticCheck at_most(double measured, double threshold) {
  return {measured <= threshold, measured, threshold};
}

double reference_height(const Profile& P) {
  if (P.s_begin() <= 0.0 && 0.0 <= P.s_end()) return P.interpolate(0.0).t;
  return P.samples.front().t;
}

bool is_minimum(const Profile& P, double s) { return P.interpolate(s).phi < kHalfPi; }

void add_common_checks(const Profile& P, ClassificationReport& r) {
  r.diagnostics["weingarten_residual"] = at_most(max_weingarten_residual(P), 1e-8);
  double max_ke = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < P.samples.size(); ++i) {
    const auto c = curvatures_from_k1(P.spec.A, P.samples[i], P.k1[i]);
    max_ke = std::max(max_ke, c.Ke);
  }
  r.diagnostics["extrinsic_curvature_nonpositive"] = at_most(max_ke, 0.0);
}

void classify_catenoidal(const Profile& P, ClassificationReport& r) {
  r.kind = SurfaceKind::Catenoidal;
  const auto crit = P.events_of(EventKind::PhiCritical);
  r.diagnostics["single_neck"] = {crit.size() == 1, static_cast<double>(crit.size()), 1.0};
  if (crit.size() != 1) return;
  const double s_neck = crit.front().s;
  r.s1 = s_neck;
  r.phi_min = P.interpolate(s_neck).phi;

  double min_phi_pp = std::numeric_limits<double>::infinity();
  bool phi_p_monotone = true;  // cos(alpha) saturates at 1 on the tails
  for (std::size_t i = 0; i < P.samples.size(); ++i) {
    min_phi_pp = std::min(min_phi_pp, P.phi_pp(i));
    if (i > 0 && P.samples[i].phi_p < P.samples[i - 1].phi_p) phi_p_monotone = false;
  }
  r.diagnostics["strict_convexity"] = {min_phi_pp > 0.0 && phi_p_monotone, min_phi_pp, 0.0};
  r.diagnostics["symmetry"] = at_most(check_symmetry(P, s_neck), kSymmetryTol);

  // A window too short for the exponential regime leaves the asymptote unknown.
  const TInfinityEstimate tail = estimate_t_infinity(P);
  if (!tail.fit_ok) return;
  r.t_infinity = tail.t_inf;
  r.decay_rate_b = tail.decay_rate_b;
  r.diagnostics["tail_fit_residual"] = at_most(tail.fit_residual, kTailFitResidualTol);
  r.diagnostics["decay_rate_positive"] = {tail.decay_rate_b > 0.0, tail.decay_rate_b, 0.0};

  const double t_c = P.interpolate(s_neck).t;
  double max_height = 0.0;
  bool bounded = std::isfinite(tail.t_inf);
  for (const auto& st : P.samples) {
    const double height = std::abs(st.t - t_c);
    max_height = std::max(max_height, height);
    if (height < tail.t_inf) continue;
    // Once h t' falls under half an ulp of t, steps stop moving t although the
    // true gap |t'|/b is still ~10 ulp; equality is all double can show there.
    bounded = bounded && height == tail.t_inf &&
              std::abs(st.t_p) / tail.decay_rate_b <= kHeightResolution * tail.t_inf;
  }
  r.diagnostics["height_bound"] = {bounded, max_height, tail.t_inf};
}

void classify_unduloidal(const Profile& P, ClassificationReport& r) {
  r.kind = SurfaceKind::Unduloidal;
  PeriodEstimate period;
  try {
    period = estimate_period(P);
  } catch (const InsufficientEvents& e) {
    throw InconsistentProfile(std::string("unduloid candidate without a full period: ") + e.what());
  }
  r.s1 = period.s1;
  r.s2 = period.s2;
  r.period_T = period.T;
  r.vertical_period = period.T_tilde;
  r.phi_min = P.interpolate(period.s1).phi;
  r.phi_max = P.interpolate(period.s2).phi;
  r.diagnostics["period_positive"] = {period.T > 0.0, period.T, 0.0};
  r.diagnostics["vertical_period_nonzero"] = {std::abs(period.T_tilde) > 0.0,
                                              std::abs(period.T_tilde), 0.0};
  r.diagnostics["period_cross_check"] = at_most(period.cross_check, 1e-7 * period.T);
  r.diagnostics["hemisphere_escape"] = {*r.phi_min < kHalfPi && kHalfPi < *r.phi_max,
                                        *r.phi_max - *r.phi_min, 0.0};

  for (const auto& e : P.events_of(EventKind::EquatorCrossing)) {
    if (e.s > period.s1 && e.s < period.s2) {
      r.s3 = e.s;
      break;
    }
  }
  r.diagnostics["equator_crossing_found"] = {r.s3.has_value(), r.s3 ? 1.0 : 0.0, 1.0};

  // phi'' > 0 below the equator, < 0 above it.
  int violations = 0;
  for (std::size_t i = 0; i < P.samples.size(); ++i) {
    const double offset = P.samples[i].phi - kHalfPi;
    if (std::abs(offset) <= 1e-9) continue;
    const double pp = P.phi_pp(i);
    if (offset < 0.0 ? !(pp > 0.0) : !(pp < 0.0)) ++violations;
  }
  r.diagnostics["inflection_sign"] = at_most(violations, 0.0);

  r.diagnostics["symmetry_min"] = at_most(check_symmetry(P, period.s1), kSymmetryTol);
  r.diagnostics["symmetry_max"] = at_most(check_symmetry(P, period.s2), kSymmetryTol);
}

}  // namespace

const char* to_string(SurfaceKind kind) {
  switch (kind) {
    case SurfaceKind::Slice:
      return "Slice";
    case SurfaceKind::Cylinder:
      return "Cylinder";
    case SurfaceKind::Catenoidal:
      return "Catenoidal";
    case SurfaceKind::Unduloidal:
      return "Unduloidal";
  }
  return "?";
}

ClassificationReport classify(const Profile& P) {
  if (P.termination != Termination::Completed) {
    throw std::invalid_argument(std::string("classify needs a completed profile, got ") +
                                to_string(P.termination));
  }
  if (P.samples.size() < 2) throw std::invalid_argument("classify needs at least two samples");

  ClassificationReport r;
  const double t_ref = reference_height(P);
  double spread_t = 0.0;
  double spread_phi = 0.0;
  for (const auto& st : P.samples) {
    spread_t = std::max(spread_t, std::abs(st.t - t_ref));
    spread_phi = std::max(spread_phi, std::abs(st.phi - kHalfPi));
  }

  const double tol_slice = 1e-10 * (1.0 + std::abs(t_ref));
  if (spread_t <= tol_slice) {
    r.kind = SurfaceKind::Slice;
    r.diagnostics["slice_height_spread"] = at_most(spread_t, tol_slice);
    add_common_checks(P, r);
  } else if (P.spec.A.is_sphere() && spread_phi <= kCylinderTol) {
    r.kind = SurfaceKind::Cylinder;
    r.phi_min = r.phi_max = kHalfPi;
    r.diagnostics["cylinder_radius_spread"] = at_most(spread_phi, kCylinderTol);
    add_common_checks(P, r);
  } else if (!P.spec.A.is_sphere()) {
    classify_catenoidal(P, r);
    add_common_checks(P, r);
  } else {
    classify_unduloidal(P, r);
    add_common_checks(P, r);
  }

  for (const auto& [name, check] : r.diagnostics) {
    if (!check.passed) {
      throw InconsistentProfile(std::string(to_string(r.kind)) + " candidate failed '" + name +
                                "': measured " + std::to_string(check.measured) + " vs " +
                                std::to_string(check.threshold));
    }
  }
  return r;
}

PeriodEstimate estimate_period(const Profile& P) {
  const auto crit = P.events_of(EventKind::PhiCritical);
  if (crit.size() < 3) {
    throw InsufficientEvents("need at least 3 phi' zeros for a period estimate, found " +
                             std::to_string(crit.size()));
  }
  std::vector<bool> minimum(crit.size());
  for (std::size_t i = 0; i < crit.size(); ++i) minimum[i] = is_minimum(P, crit[i].s);

  std::optional<std::size_t> pick;
  for (std::size_t i = 0; i + 1 < crit.size(); ++i) {
    if (!minimum[i] || minimum[i + 1]) continue;
    if (!pick || std::abs(crit[i].s) < std::abs(crit[*pick].s)) pick = i;
  }
  if (!pick) throw InsufficientEvents("no minimum followed by a maximum");

  PeriodEstimate out;
  out.s1 = crit[*pick].s;
  out.s2 = crit[*pick + 1].s;
  out.T = 2.0 * (out.s2 - out.s1);
  out.T_tilde = 2.0 * (P.interpolate(out.s2).t - P.interpolate(out.s1).t);

  double worst = 0.0;
  bool compared = false;
  for (std::size_t i = 0; i + 2 < crit.size(); ++i) {
    if (minimum[i] != minimum[i + 2]) continue;
    worst = std::max(worst, std::abs((crit[i + 2].s - crit[i].s) - out.T));
    compared = true;
  }
  if (!compared) throw InsufficientEvents("no pair of same-type extrema to cross-check T");
  out.cross_check = worst;
  return out;
}

TInfinityEstimate estimate_t_infinity(const Profile& P) {
  if (P.spec.A.is_sphere()) throw std::domain_error("estimate_t_infinity applies to H^2 profiles");
  const auto crit = P.events_of(EventKind::PhiCritical);
  const double s_c = crit.empty() ? 0.0 : crit.front().s;
  const double s_end = P.s_end();
  const double s_fit = s_c + 0.75 * (s_end - s_c);
  const double t_c = P.interpolate(s_c).t;

  std::vector<double> xs, ys;
  for (const auto& st : P.samples) {
    if (st.s < s_fit || st.t_p == 0.0) continue;
    xs.push_back(st.s);
    ys.push_back(std::log(std::abs(st.t_p)));
  }
  const ProfileState& last = P.samples.back();

  TInfinityEstimate out;
  out.t_inf = std::abs(last.t - t_c);
  if (xs.size() < 4) return out;

  const Eigen::Index n = static_cast<Eigen::Index>(xs.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd rhs(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = xs[static_cast<std::size_t>(i)] - s_end;
    rhs(i) = ys[static_cast<std::size_t>(i)];
  }
  const Eigen::Vector2d coef = design.colPivHouseholderQr().solve(rhs);
  const Eigen::VectorXd resid = design * coef - rhs;
  out.fit_residual = std::sqrt(resid.squaredNorm() / static_cast<double>(n));
  out.decay_rate_b = -coef(1);
  out.fit_ok = out.decay_rate_b > 0.0 && out.fit_residual <= kTailFitResidualTol;
  if (out.fit_ok) out.t_inf += std::abs(last.t_p) / out.decay_rate_b;
  return out;
}

double check_symmetry(const Profile& P, double s0) {
  const double t0 = P.interpolate(s0).t;
  double worst = 0.0;
  for (const auto& st : P.samples) {
    const double mirror = 2.0 * s0 - st.s;
    if (mirror < P.s_begin() || mirror > P.s_end()) continue;
    const ProfileState m = P.interpolate(mirror);
    worst = std::max(worst, std::abs(st.phi - m.phi) + std::abs(st.t + m.t - 2.0 * t0));
  }
  return worst;
}

}  // namespace wg
