#pragma once

#include <Eigen/Core>
#include <optional>
#include <stdexcept>

#include "weingarten/elliptic_fn.hpp"

namespace wg {

/// Raised when cot/coth is evaluated at (or within 1e-9 of) a zero of S_eps,
/// i.e. when a profile reaches the rotation axis or its antipode.
class PoleError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

inline constexpr double kDomainMargin = 1e-9;

/// Base-space selector for M_eps x R: +1 is the round sphere S^2, -1 the
/// hyperbolic plane H^2.
class Ambient {
 public:
  explicit Ambient(int epsilon);

  static Ambient sphere() { return Ambient(1); }
  static Ambient hyperbolic() { return Ambient(-1); }

  int epsilon() const { return epsilon_; }
  bool is_sphere() const { return epsilon_ == 1; }

  /// Open domain of the radial coordinate phi: (0, pi) or (0, inf).
  double phi_lower() const { return 0.0; }
  double phi_upper() const;

  /// True when phi is at least kDomainMargin inside the open domain.
  bool in_domain(double phi) const;

  bool operator==(const Ambient&) const = default;

 private:
  int epsilon_;
};

double s_eps(const Ambient& A, double x);    // sin / sinh
double c_eps(const Ambient& A, double x);    // cos / cosh
double eta_eps(const Ambient& A, double x);  // cot / coth; PoleError near zeros of s_eps

/// One arc-length sample of a profile curve gamma(s) = (phi(s), t(s)).
struct ProfileState {
  double s = 0.0;
  double phi = 0.0;
  double phi_p = 0.0;
  double t = 0.0;
  double t_p = 0.0;
};

struct CurvatureSample {
  double k1 = 0.0;
  double k2 = 0.0;
  double H = 0.0;
  double Ke = 0.0;
};

/// Principal curvatures for the canonical normal, k1 = -phi''/t', k2 = t' eta.
/// Throws std::domain_error when t' = 0.
CurvatureSample curvatures(const EllipticFunction& F, const Ambient& A, const ProfileState& st,
                           double phi_pp);

/// Same sample built from k1 directly (no division by t').
CurvatureSample curvatures_from_k1(const Ambient& A, const ProfileState& st, double k1);

/// H - f(H^2 - K_e) for a curvature sample.
double curvature_residual(const EllipticFunction& F, const CurvatureSample& c);

/// N(s, theta) = (t' C cos(theta), t' C sin(theta), -eps t' S, -phi'), unit and
/// orthogonal to the surface for the metric diag(1, 1, eps, 1).
Eigen::Vector4d normal_vector(const Ambient& A, const ProfileState& st, double theta);

/// F(s, theta) = (S cos(theta), S sin(theta), C, t).
Eigen::Vector4d surface_point(const Ambient& A, const ProfileState& st, double theta);

/// G(phi, y, z) evaluated as y eta - gbar(u) with u = (y^2 eta + z) / (2y).
/// Throws std::domain_error for y = 0 and PoleError outside the domain.
double weingarten_residual(const EllipticFunction& F, const Ambient& A, double phi, double t_p,
                           double phi_pp);

/// Root z of G(phi, t_p, .) = 0: z = 2y gbar^{-1}(y eta) - y^2 eta. Returns
/// std::nullopt when y eta leaves the range of gbar.
std::optional<double> solve_phi_pp(const EllipticFunction& F, const Ambient& A, double phi,
                                   double t_p);

/// k1 = -phi''/t' = y eta - 2 gbar^{-1}(y eta), computed without dividing by
/// t'. Well defined at t' = 0 (gives 0, the slice value).
std::optional<double> solve_k1(const EllipticFunction& F, const Ambient& A, double phi,
                               double t_p);

}  // namespace wg
