#include "weingarten/profile.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace wg {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kHalfPi = std::numbers::pi / 2.0;

// State (phi, alpha, t) with phi' = cos(alpha), t' = sin(alpha), alpha' = k1.
using State = Eigen::Vector3d;

enum class RhsStatus { Ok, NoSolution, OutOfDomain };

struct Rhs {
  const EllipticFunction& F;
  const Ambient& A;

  RhsStatus operator()(const State& y, State& dy) const {
    if (!std::isfinite(y[0]) || !A.in_domain(y[0])) return RhsStatus::OutOfDomain;
    const double t_p = std::sin(y[1]);
    const auto k1 = solve_k1(F, A, y[0], t_p);
    if (!k1) return RhsStatus::NoSolution;
    dy << std::cos(y[1]), *k1, t_p;
    return RhsStatus::Ok;
  }
};

// Dormand-Prince 5(4) tableau.
constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                 a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                 e6 = 22.0 / 525, e7 = -1.0 / 40;

struct StepResult {
  RhsStatus status = RhsStatus::Ok;
  State y_new;
  State dy_new;  // derivative at y_new (FSAL)
  State err;
};

StepResult dp_step(const Rhs& rhs, const State& y, const State& k1, double h) {
  StepResult r;
  State k2, k3, k4, k5, k6, k7;
  auto stage = [&](const State& arg, State& out) {
    if (r.status != RhsStatus::Ok) return;
    r.status = rhs(arg, out);
  };
  stage(y + h * a21 * k1, k2);
  stage(y + h * (a31 * k1 + a32 * k2), k3);
  stage(y + h * (a41 * k1 + a42 * k2 + a43 * k3), k4);
  stage(y + h * (a51 * k1 + a52 * k2 + a53 * k3 + a54 * k4), k5);
  stage(y + h * (a61 * k1 + a62 * k2 + a63 * k3 + a64 * k4 + a65 * k5), k6);
  if (r.status != RhsStatus::Ok) return r;
  r.y_new = y + h * (b1 * k1 + b3 * k3 + b4 * k4 + b5 * k5 + b6 * k6);
  stage(r.y_new, k7);
  if (r.status != RhsStatus::Ok) return r;
  r.dy_new = k7;
  r.err = h * (e1 * k1 + e3 * k3 + e4 * k4 + e5 * k5 + e6 * k6 + e7 * k7);
  return r;
}

ProfileState to_profile_state(double s, const State& y) {
  return {s, y[0], std::cos(y[1]), y[2], std::sin(y[1])};
}

// Sign changes smaller than this on both ends are rounding noise around an
// equilibrium (the cylinder), not events.
constexpr double kEventNoise = 1e-12;
constexpr double kEventWidth = 1e-10;

double event_value(EventKind kind, const State& y) {
  return kind == EventKind::PhiCritical ? std::cos(y[1]) : y[0] - kHalfPi;
}

bool crosses(double a, double b) {
  if (std::max(std::abs(a), std::abs(b)) <= kEventNoise) return false;
  return (a < 0.0 && b >= 0.0) || (a > 0.0 && b <= 0.0);
}

struct HalfResult {
  std::vector<ProfileState> samples;  // ordered by increasing |s|, seed first
  std::vector<double> k1;
  std::vector<ProfileEvent> events;
  Termination termination = Termination::Completed;
  std::optional<double> failure_s;
};

struct HalfOptions {
  double direction = 1.0;
  double s_stop = 0.0;
  bool stop_at_first_critical = false;
};

HalfResult integrate_half(const ShootingSpec& spec, const State& y0, const HalfOptions& opt) {
  const Rhs rhs{spec.F, spec.A};
  HalfResult out;

  State y = y0;
  State dy;
  if (rhs(y, dy) != RhsStatus::Ok) {
    out.termination = Termination::GateFailure;
    out.failure_s = 0.0;
    return out;
  }
  out.samples.push_back(to_profile_state(0.0, y));
  out.k1.push_back(dy[1]);

  std::vector<EventKind> kinds{EventKind::PhiCritical};
  if (spec.A.is_sphere()) kinds.push_back(EventKind::EquatorCrossing);

  const double d = opt.direction;
  double s = 0.0;
  double h = d * std::min(spec.h_max, 1e-3);
  long steps = 0;

  while (std::abs(s) < opt.s_stop) {
    if (steps >= spec.max_steps) {
      out.termination = Termination::StepLimit;
      return out;
    }
    const double remaining = opt.s_stop - std::abs(s);
    bool last = false;
    if (std::abs(h) >= remaining) {
      h = d * remaining;
      last = true;
    }

    StepResult step = dp_step(rhs, y, dy, h);
    if (step.status != RhsStatus::Ok) {
      h *= 0.25;
      if (std::abs(h) < 1e-14 * std::max(1.0, std::abs(s))) {
        if (step.status == RhsStatus::OutOfDomain) {
          throw PoleError("profile reached the edge of the phi domain at s = " + std::to_string(s));
        }
        out.termination = Termination::GateFailure;
        out.failure_s = s;
        return out;
      }
      continue;
    }

    double err = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double scale =
          spec.abs_tol + spec.rel_tol * std::max(std::abs(y[i]), std::abs(step.y_new[i]));
      err = std::max(err, std::abs(step.err[i]) / scale);
    }
    if (!(err <= 1.0)) {
      h *= std::max(0.2, 0.9 * std::pow(std::isfinite(err) ? err : 1e10, -0.2));
      continue;
    }

    ++steps;
    const double s_new = last ? d * opt.s_stop : s + h;

    // Event localization on actual sub-steps from the accepted left state.
    struct Found {
      double theta;
      EventKind kind;
      State y;
      State dy;
    };
    std::vector<Found> found;
    for (const EventKind kind : kinds) {
      const double ea = event_value(kind, y);
      const double eb = event_value(kind, step.y_new);
      // The seed sits exactly on phi' = 0; its crossing is recorded separately.
      if (kind == EventKind::PhiCritical && s == 0.0 && spec.phi_p0 == 0.0) continue;
      if (!crosses(ea, eb)) continue;
      double lo = 0.0, hi = s_new - s;
      double e_lo = ea;
      while (std::abs(hi - lo) > kEventWidth) {
        const double mid = 0.5 * (lo + hi);
        const StepResult sub = dp_step(rhs, y, dy, mid);
        if (sub.status != RhsStatus::Ok) break;
        const double em = event_value(kind, sub.y_new);
        if ((em < 0.0) == (e_lo < 0.0) && em != 0.0) {
          lo = mid;
          e_lo = em;
        } else {
          hi = mid;
        }
      }
      const double theta = 0.5 * (lo + hi);
      const StepResult at = dp_step(rhs, y, dy, theta);
      if (at.status != RhsStatus::Ok) continue;
      found.push_back({theta, kind, at.y_new, at.dy_new});
    }
    std::sort(found.begin(), found.end(),
              [](const Found& a, const Found& b) { return std::abs(a.theta) < std::abs(b.theta); });
    const double span = std::abs(s_new - s);
    for (const Found& f : found) {
      out.events.push_back({s + f.theta, f.kind});
      const double at = std::abs(f.theta);
      const bool distinct_from_last = out.samples.back().s != s + f.theta;
      if (at > 1e-12 && span - at > 1e-12 && distinct_from_last) {
        out.samples.push_back(to_profile_state(s + f.theta, f.y));
        out.k1.push_back(f.dy[1]);
      }
    }

    y = step.y_new;
    dy = step.dy_new;
    s = s_new;
    out.samples.push_back(to_profile_state(s, y));
    out.k1.push_back(dy[1]);

    if (opt.stop_at_first_critical &&
        std::any_of(found.begin(), found.end(),
                    [](const Found& f) { return f.kind == EventKind::PhiCritical; })) {
      return out;
    }

    const double factor = err == 0.0 ? 5.0 : std::clamp(0.9 * std::pow(err, -0.2), 0.2, 5.0);
    h = d * std::min(spec.h_max, std::abs(h) * factor);
  }
  return out;
}

State seed_state(const ShootingSpec& spec) {
  const double phi_p = spec.phi_p0;
  const double t_p = spec.sigma * std::sqrt(1.0 - phi_p * phi_p);
  return {spec.phi0, std::atan2(t_p, phi_p), 0.0};
}

}  // namespace

void validate(const ShootingSpec& spec) {
  if (spec.sigma != 1 && spec.sigma != -1) throw std::invalid_argument("sigma must be +1 or -1");
  if (!spec.A.in_domain(spec.phi0)) throw std::invalid_argument("phi0 outside the profile domain");
  if (spec.A.is_sphere() && spec.phi0 > kHalfPi) {
    throw std::invalid_argument("on S^2 the minimum phi0 must lie in (0, pi/2]");
  }
  if (!(spec.s_max > 0.0) || !std::isfinite(spec.s_max)) throw std::invalid_argument("s_max must be positive");
  if (!(spec.rel_tol > 0.0) || !(spec.abs_tol > 0.0)) throw std::invalid_argument("tolerances must be positive");
  if (!(spec.h_max > 0.0)) throw std::invalid_argument("h_max must be positive");
  if (spec.max_steps <= 0) throw std::invalid_argument("max_steps must be positive");
  if (!(std::abs(spec.phi_p0) < 1.0)) throw std::invalid_argument("|phi_p0| must be < 1");
  require_admissible(spec.F);
}

GateCheck evaluate_gate(const ShootingSpec& spec) {
  const GLimits lim = compute_limits(spec.F);
  GateCheck gate;
  gate.lhs = eta_eps(spec.A, spec.phi0);
  if (spec.sigma == 1) {
    gate.rhs = -lim.ell_minus;
    gate.inequality = "eta(phi0) < -lim_{r->-inf}(r - f(r^2))";
  } else {
    gate.rhs = lim.ell_plus;
    gate.inequality = "eta(phi0) < lim_{r->+inf}(r - f(r^2))";
  }
  gate.holds = gate.lhs < gate.rhs;
  return gate;
}

std::variant<double, GateFailure> solve_initial_phi_pp(const ShootingSpec& spec) {
  const GateCheck gate = evaluate_gate(spec);
  if (!gate.holds) return GateFailure{gate};
  const auto z = solve_phi_pp(spec.F, spec.A, spec.phi0, static_cast<double>(spec.sigma));
  if (!z) return GateFailure{gate};
  return *z;
}

ShootingSpec make_shooting_spec(const EllipticFunction& F, const Ambient& A, double phi0,
                                int sigma, double s_max) {
  ShootingSpec spec;
  spec.F = F;
  spec.A = A;
  spec.phi0 = phi0;
  spec.sigma = sigma;
  spec.s_max = s_max > 0.0 ? s_max : kDefaultHyperbolicSMax;
  if (s_max > 0.0 || !A.is_sphere()) return spec;

  validate(spec);
  if (std::holds_alternative<GateFailure>(solve_initial_phi_pp(spec))) return spec;
  HalfOptions pilot{1.0, 200.0, true};
  const HalfResult half = integrate_half(spec, seed_state(spec), pilot);
  const auto it = std::find_if(half.events.begin(), half.events.end(),
                               [](const ProfileEvent& e) { return e.kind == EventKind::PhiCritical; });
  if (it != half.events.end()) spec.s_max = 4.0 * (2.0 * it->s);
  return spec;
}

Profile integrate_profile(const ShootingSpec& spec) {
  validate(spec);
  Profile P;
  P.spec = spec;

  const State y0 = seed_state(spec);
  if (spec.phi_p0 == 0.0) {
    if (std::holds_alternative<GateFailure>(solve_initial_phi_pp(spec))) {
      P.samples.push_back(to_profile_state(0.0, y0));
      P.samples.back().phi_p = 0.0;
      P.k1.push_back(0.0);
      P.termination = Termination::GateFailure;
      P.failure_s = 0.0;
      return P;
    }
  }

  const HalfResult fwd = integrate_half(spec, y0, {1.0, spec.s_max, false});
  const bool mirror = spec.phi_p0 == 0.0 && !spec.reintegrate_backward;
  HalfResult bwd;
  if (!mirror) bwd = integrate_half(spec, y0, {-1.0, spec.s_max, false});

  const bool seed_is_critical =
      spec.phi_p0 == 0.0 && !fwd.k1.empty() && std::abs(fwd.samples[0].t_p * fwd.k1[0]) > 1e-12;

  if (mirror) {
    for (std::size_t i = fwd.samples.size(); i-- > 1;) {
      ProfileState m = fwd.samples[i];
      m.s = -m.s;
      m.phi_p = -m.phi_p;
      m.t = -m.t;
      P.samples.push_back(m);
      P.k1.push_back(fwd.k1[i]);
    }
    for (auto it = fwd.events.rbegin(); it != fwd.events.rend(); ++it) {
      P.events.push_back({-it->s, it->kind});
    }
  } else {
    for (std::size_t i = bwd.samples.size(); i-- > 1;) {
      P.samples.push_back(bwd.samples[i]);
      P.k1.push_back(bwd.k1[i]);
    }
    for (auto it = bwd.events.rbegin(); it != bwd.events.rend(); ++it) P.events.push_back(*it);
  }
  if (seed_is_critical) P.events.push_back({0.0, EventKind::PhiCritical});
  for (std::size_t i = 0; i < fwd.samples.size(); ++i) {
    P.samples.push_back(fwd.samples[i]);
    P.k1.push_back(fwd.k1[i]);
  }
  if (spec.phi_p0 == 0.0) {
    // exact seed values
    auto seed = std::find_if(P.samples.begin(), P.samples.end(),
                             [](const ProfileState& st) { return st.s == 0.0; });
    seed->phi_p = 0.0;
  }
  P.events.insert(P.events.end(), fwd.events.begin(), fwd.events.end());

  auto worst = [](const HalfResult& h) { return h.termination; };
  const Termination tf = worst(fwd);
  const Termination tb = mirror ? Termination::Completed : worst(bwd);
  if (tf == Termination::GateFailure || tb == Termination::GateFailure) {
    P.termination = Termination::GateFailure;
    P.failure_s = tf == Termination::GateFailure ? fwd.failure_s : bwd.failure_s;
  } else if (tf == Termination::StepLimit || tb == Termination::StepLimit) {
    P.termination = Termination::StepLimit;
  }
  return P;
}

namespace {

// Quintic Hermite basis on [0, 1] and its derivative.
std::array<double, 6> hermite5(double u) {
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u, u5 = u4 * u;
  return {1 - 10 * u3 + 15 * u4 - 6 * u5,
          u - 6 * u3 + 8 * u4 - 3 * u5,
          0.5 * u2 - 1.5 * u3 + 1.5 * u4 - 0.5 * u5,
          0.5 * u3 - u4 + 0.5 * u5,
          -4 * u3 + 7 * u4 - 3 * u5,
          10 * u3 - 15 * u4 + 6 * u5};
}

std::array<double, 6> hermite5_d(double u) {
  const double u2 = u * u, u3 = u2 * u, u4 = u3 * u;
  return {-30 * u2 + 60 * u3 - 30 * u4,
          1 - 18 * u2 + 32 * u3 - 15 * u4,
          u - 4.5 * u2 + 6 * u3 - 2.5 * u4,
          1.5 * u2 - 4 * u3 + 2.5 * u4,
          -12 * u2 + 28 * u3 - 15 * u4,
          30 * u2 - 60 * u3 + 30 * u4};
}

}  // namespace

ProfileState Profile::interpolate(double s) const {
  if (samples.empty() || s < s_begin() || s > s_end()) {
    throw std::out_of_range("interpolate: s outside the profile window");
  }
  auto it = std::upper_bound(samples.begin(), samples.end(), s,
                             [](double v, const ProfileState& st) { return v < st.s; });
  std::size_t i1 = static_cast<std::size_t>(it - samples.begin());
  if (i1 == samples.size()) i1 = samples.size() - 1;
  if (i1 == 0) i1 = 1;
  const std::size_t i0 = i1 - 1;
  const ProfileState& a = samples[i0];
  const ProfileState& b = samples[i1];
  const double h = b.s - a.s;
  const double u = (s - a.s) / h;
  const auto H = hermite5(u);
  const auto D = hermite5_d(u);

  auto blend = [&](const std::array<double, 6>& w, double p0, double d0, double dd0, double p1,
                   double d1, double dd1) {
    return w[0] * p0 + w[1] * h * d0 + w[2] * h * h * dd0 + w[3] * h * h * dd1 + w[4] * h * d1 +
           w[5] * p1;
  };
  const double app = -a.t_p * k1[i0], bpp = -b.t_p * k1[i1];
  const double att = a.phi_p * k1[i0], btt = b.phi_p * k1[i1];

  ProfileState out;
  out.s = s;
  out.phi = blend(H, a.phi, a.phi_p, app, b.phi, b.phi_p, bpp);
  out.t = blend(H, a.t, a.t_p, att, b.t, b.t_p, btt);
  out.phi_p = blend(D, a.phi, a.phi_p, app, b.phi, b.phi_p, bpp) / h;
  out.t_p = blend(D, a.t, a.t_p, att, b.t, b.t_p, btt) / h;
  return out;
}

std::vector<ProfileEvent> Profile::events_of(EventKind kind) const {
  std::vector<ProfileEvent> out;
  for (const auto& e : events) {
    if (e.kind == kind) out.push_back(e);
  }
  return out;
}

Profile reflect_profile(const Profile& P, double s0) {
  if (!P.spec.A.is_sphere()) throw std::domain_error("reflect_profile is defined on S^2 only");
  Profile R;
  R.spec = P.spec;
  R.spec.sigma = -P.spec.sigma;
  R.termination = P.termination;
  if (P.failure_s) R.failure_s = 2.0 * s0 - *P.failure_s;
  for (std::size_t i = P.samples.size(); i-- > 0;) {
    const ProfileState& st = P.samples[i];
    R.samples.push_back({2.0 * s0 - st.s, kPi - st.phi, st.phi_p, st.t, -st.t_p});
    R.k1.push_back(P.k1[i]);
  }
  for (auto it = P.events.rbegin(); it != P.events.rend(); ++it) {
    R.events.push_back({2.0 * s0 - it->s, it->kind});
  }
  return R;
}

Profile make_slice_profile(const EllipticFunction& F, const Ambient& A, double t0,
                           double phi_begin, double phi_end, int n) {
  if (n < 2 || !(phi_begin < phi_end) || !A.in_domain(phi_begin) || !A.in_domain(phi_end)) {
    throw std::invalid_argument("make_slice_profile: bad sampling range");
  }
  Profile P;
  P.spec.F = F;
  P.spec.A = A;
  P.spec.phi0 = phi_begin;
  P.spec.s_max = phi_end - phi_begin;
  for (int i = 0; i < n; ++i) {
    const double phi = phi_begin + (phi_end - phi_begin) * i / (n - 1);
    P.samples.push_back({phi - phi_begin, phi, 1.0, t0, 0.0});
    P.k1.push_back(0.0);
  }
  return P;
}

double max_weingarten_residual(const Profile& P) {
  double worst = 0.0;
  for (std::size_t i = 0; i < P.samples.size(); ++i) {
    const auto c = curvatures_from_k1(P.spec.A, P.samples[i], P.k1[i]);
    worst = std::max(worst, std::abs(curvature_residual(P.spec.F, c)));
  }
  return worst;
}

const char* to_string(EventKind kind) {
  return kind == EventKind::PhiCritical ? "PhiCritical" : "EquatorCrossing";
}

const char* to_string(Termination t) {
  switch (t) {
    case Termination::Completed:
      return "Completed";
    case Termination::GateFailure:
      return "GateFailure";
    case Termination::StepLimit:
      return "StepLimit";
  }
  return "?";
}

}  // namespace wg
