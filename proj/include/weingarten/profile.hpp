#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "weingarten/ambient.hpp"
#include "weingarten/elliptic_fn.hpp"

namespace wg {

/// Initial data for shooting from a symmetry point:
/// phi(0) = phi0, phi'(0) = 0, t(0) = 0, t'(0) = sigma.
struct ShootingSpec {
  EllipticFunction F = EllipticFunction::zero();
  Ambient A = Ambient::sphere();
  double phi0 = 0.0;
  int sigma = 1;
  double s_max = 20.0;  // integration window is [-s_max, s_max]
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  long max_steps = 1'000'000;
  double h_max = 0.05;

  // Diagnostic: integrate the backward half instead of mirroring it.
  bool reintegrate_backward = false;
  // Expert: start with phi'(0) = phi_p0 instead of a symmetry point. Both
  // halves are then integrated.
  double phi_p0 = 0.0;
};

inline constexpr double kDefaultHyperbolicSMax = 20.0;

/// Spec with default tolerances. A non-positive s_max selects the default
/// window: 20 on H^2; on S^2 four pilot periods (20 if the pilot finds no
/// critical point, i.e. the cylinder).
ShootingSpec make_shooting_spec(const EllipticFunction& F, const Ambient& A, double phi0,
                                int sigma, double s_max = 0.0);

/// Throws std::invalid_argument for malformed specs (sigma, phi0 range,
/// tolerances, non-elliptic F).
void validate(const ShootingSpec& spec);

/// The existence inequality for a profile with minimum phi0:
///   sigma = +1:  eta(phi0) < -ell_minus
///   sigma = -1:  eta(phi0) <  ell_plus
struct GateCheck {
  bool holds = false;
  double lhs = 0.0;  // eta(phi0)
  double rhs = 0.0;  // -ell_minus or ell_plus (may be +inf)
  std::string inequality;
};

GateCheck evaluate_gate(const ShootingSpec& spec);

struct GateFailure {
  GateCheck gate;
};

/// phi''(0) at the seed, or the failed gate.
std::variant<double, GateFailure> solve_initial_phi_pp(const ShootingSpec& spec);

enum class EventKind { PhiCritical, EquatorCrossing };

struct ProfileEvent {
  double s;
  EventKind kind;
};

enum class Termination { Completed, GateFailure, StepLimit };

/// Integrated profile curve. Samples are strictly increasing in s; k1 holds
/// the rotational-plane principal curvature at each sample, from which
/// phi'' = -t' k1 and t'' = phi' k1.
struct Profile {
  ShootingSpec spec;
  std::vector<ProfileState> samples;
  std::vector<double> k1;
  std::vector<ProfileEvent> events;
  Termination termination = Termination::Completed;
  std::optional<double> failure_s;

  double s_begin() const { return samples.front().s; }
  double s_end() const { return samples.back().s; }
  double phi_pp(std::size_t i) const { return -samples[i].t_p * k1[i]; }

  /// Quintic Hermite interpolation of (phi, t) and their first derivatives.
  /// Throws std::out_of_range outside [s_begin, s_end].
  ProfileState interpolate(double s) const;

  std::vector<ProfileEvent> events_of(EventKind kind) const;
};

/// Integrates forward on [0, s_max] with an adaptive Dormand-Prince 5(4)
/// pair and mirrors the backward half (or re-integrates it when
/// spec.reintegrate_backward is set). A failed seed gate yields a profile
/// holding only the seed sample and Termination::GateFailure.
Profile integrate_profile(const ShootingSpec& spec);

/// psi(s) = pi - phi(2 s0 - s), v(s) = t(2 s0 - s). S^2 only; throws
/// std::domain_error for H^2. The copied spec has sigma flipped.
Profile reflect_profile(const Profile& P, double s0);

/// Horizontal slice {t = t0} sampled at phi in [phi_begin, phi_end]. Used to
/// exercise the classifier on the one kind shooting cannot produce.
Profile make_slice_profile(const EllipticFunction& F, const Ambient& A, double t0,
                           double phi_begin, double phi_end, int n);

/// Max over samples of |residual of the Weingarten relation| with phi''
/// re-solved from (phi, t').
double max_weingarten_residual(const Profile& P);

const char* to_string(EventKind kind);
const char* to_string(Termination t);

}  // namespace wg
