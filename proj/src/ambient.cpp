#include "weingarten/ambient.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace wg {

namespace {

void require_domain(const Ambient& A, double phi) {
  if (!A.in_domain(phi)) {
    throw PoleError("phi = " + std::to_string(phi) + " is outside the open profile domain for epsilon = " +
                    std::to_string(A.epsilon()));
  }
}

}  // namespace

Ambient::Ambient(int epsilon) : epsilon_(epsilon) {
  if (epsilon != 1 && epsilon != -1) {
    throw std::invalid_argument("epsilon must be +1 or -1, got " + std::to_string(epsilon));
  }
}

double Ambient::phi_upper() const {
  return is_sphere() ? std::numbers::pi : std::numeric_limits<double>::infinity();
}

bool Ambient::in_domain(double phi) const {
  return phi > phi_lower() + kDomainMargin && phi < phi_upper() - kDomainMargin;
}

double s_eps(const Ambient& A, double x) { return A.is_sphere() ? std::sin(x) : std::sinh(x); }

double c_eps(const Ambient& A, double x) { return A.is_sphere() ? std::cos(x) : std::cosh(x); }

double eta_eps(const Ambient& A, double x) {
  if (A.is_sphere()) {
    const double k = std::round(x / std::numbers::pi);
    if (std::abs(x - k * std::numbers::pi) <= kDomainMargin) {
      throw PoleError("cot pole at phi = " + std::to_string(x));
    }
    return std::cos(x) / std::sin(x);
  }
  if (std::abs(x) <= kDomainMargin) throw PoleError("coth pole at phi = " + std::to_string(x));
  return 1.0 / std::tanh(x);
}

CurvatureSample curvatures_from_k1(const Ambient& A, const ProfileState& st, double k1) {
  CurvatureSample c;
  c.k1 = k1;
  c.k2 = st.t_p * eta_eps(A, st.phi);
  c.H = 0.5 * (c.k1 + c.k2);
  c.Ke = c.k1 * c.k2;
  return c;
}

CurvatureSample curvatures(const EllipticFunction&, const Ambient& A, const ProfileState& st,
                           double phi_pp) {
  if (st.t_p == 0.0) throw std::domain_error("curvatures: t' = 0 (slice profile)");
  return curvatures_from_k1(A, st, -phi_pp / st.t_p);
}

double curvature_residual(const EllipticFunction& F, const CurvatureSample& c) {
  // H^2 - K_e = (k1 - k2)^2 / 4 avoids a negative argument from rounding.
  const double d = 0.5 * (c.k1 - c.k2);
  return c.H - eval_f(F, d * d);
}

Eigen::Vector4d normal_vector(const Ambient& A, const ProfileState& st, double theta) {
  const double c = c_eps(A, st.phi);
  const double s = s_eps(A, st.phi);
  // Third slot carries the epsilon sign so N stays tangent to the hyperboloid.
  return {st.t_p * c * std::cos(theta), st.t_p * c * std::sin(theta), -A.epsilon() * st.t_p * s,
          -st.phi_p};
}

Eigen::Vector4d surface_point(const Ambient& A, const ProfileState& st, double theta) {
  const double s = s_eps(A, st.phi);
  return {s * std::cos(theta), s * std::sin(theta), c_eps(A, st.phi), st.t};
}

double weingarten_residual(const EllipticFunction& F, const Ambient& A, double phi, double t_p,
                           double phi_pp) {
  if (t_p == 0.0) throw std::domain_error("weingarten_residual: t' = 0");
  require_domain(A, phi);
  const double eta = eta_eps(A, phi);
  const double u = (t_p * t_p * eta + phi_pp) / (2.0 * t_p);
  return t_p * eta - g_bar(F, u);
}

std::optional<double> solve_k1(const EllipticFunction& F, const Ambient& A, double phi,
                               double t_p) {
  require_domain(A, phi);
  const double w = t_p * eta_eps(A, phi);
  const auto u = invert_g_bar(F, w);
  if (!u) return std::nullopt;
  return w - 2.0 * *u;
}

std::optional<double> solve_phi_pp(const EllipticFunction& F, const Ambient& A, double phi,
                                   double t_p) {
  if (t_p == 0.0) throw std::domain_error("solve_phi_pp: t' = 0");
  const auto k1 = solve_k1(F, A, phi, t_p);
  if (!k1) return std::nullopt;
  return -t_p * *k1;
}

}  // namespace wg
