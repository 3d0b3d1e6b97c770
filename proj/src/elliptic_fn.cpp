#include "weingarten/elliptic_fn.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <stdexcept>
#include <string>

namespace wg {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

void require_finite(double v, const char* what) {
  if (!std::isfinite(v)) {
    throw std::invalid_argument(std::string(what) + " must be finite");
  }
}

void require_nonnegative(double x) {
  if (!(x >= 0.0)) throw std::domain_error("f is defined on [0, inf); got x = " + std::to_string(x));
}

double parse_number(std::string_view token, std::string_view full) {
  double value = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (token.empty() || ec != std::errc() || ptr != last || !std::isfinite(value)) {
    throw std::invalid_argument("bad number '" + std::string(token) + "' in family spec '" +
                                std::string(full) + "'");
  }
  return value;
}

// sqrt(1 + x^2) without overflow for large |x|.
double hyp(double x) { return std::hypot(1.0, x); }

}  // namespace

EllipticFunction EllipticFunction::rational(double c) {
  require_finite(c, "rational parameter c");
  return {Family::Rational, c};
}

EllipticFunction EllipticFunction::sqrt_shift(double a) {
  require_finite(a, "sqrtshift parameter a");
  return {Family::SqrtShift, a};
}

EllipticFunction EllipticFunction::parse(std::string_view text) {
  if (text == "zero") return zero();
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw std::invalid_argument("unknown family '" + std::string(text) + "'");
  }
  const auto name = text.substr(0, colon);
  const auto rest = text.substr(colon + 1);
  const auto eq = rest.find('=');
  if (eq == std::string_view::npos) {
    throw std::invalid_argument("expected <key>=<value> after '" + std::string(name) +
                                ":', got '" + std::string(rest) + "'");
  }
  const auto key = rest.substr(0, eq);
  const auto value = rest.substr(eq + 1);
  if (name == "rational") {
    if (key != "c") throw std::invalid_argument("unknown key '" + std::string(key) + "' for rational");
    return rational(parse_number(value, text));
  }
  if (name == "sqrtshift") {
    if (key != "a") throw std::invalid_argument("unknown key '" + std::string(key) + "' for sqrtshift");
    return sqrt_shift(parse_number(value, text));
  }
  throw std::invalid_argument("unknown family '" + std::string(name) + "'");
}

std::string EllipticFunction::to_string() const {
  char buf[64];
  switch (family_) {
    case Family::Zero:
      return "zero";
    case Family::Rational:
      std::snprintf(buf, sizeof buf, "rational:c=%.17g", param_);
      return buf;
    case Family::SqrtShift:
      std::snprintf(buf, sizeof buf, "sqrtshift:a=%.17g", param_);
      return buf;
  }
  return {};
}

double eval_f(const EllipticFunction& F, double x) {
  require_nonnegative(x);
  const double p = F.parameter();
  switch (F.family()) {
    case EllipticFunction::Family::Zero:
      return 0.0;
    case EllipticFunction::Family::Rational:
      return p * x / (1.0 + x);
    case EllipticFunction::Family::SqrtShift:
      // a (1 - sqrt(1+x)) = -a x / (1 + sqrt(1+x))
      return -p * x / (1.0 + std::sqrt(1.0 + x));
  }
  return 0.0;
}

double eval_f_prime(const EllipticFunction& F, double x) {
  require_nonnegative(x);
  const double p = F.parameter();
  switch (F.family()) {
    case EllipticFunction::Family::Zero:
      return 0.0;
    case EllipticFunction::Family::Rational:
      return p / ((1.0 + x) * (1.0 + x));
    case EllipticFunction::Family::SqrtShift:
      return -p / (2.0 * std::sqrt(1.0 + x));
  }
  return 0.0;
}

EllipticityReport check_ellipticity(const EllipticFunction& F, double x_max, int grid_size) {
  if (!(x_max > 0.0) || !std::isfinite(x_max)) throw std::invalid_argument("x_max must be positive");
  if (grid_size < 2) throw std::invalid_argument("grid_size must be at least 2");

  EllipticityReport report;
  report.grid_size = grid_size;

  // Log-spaced grid: 0, then x_max * 10^{-12 .. 0}.
  auto grid_point = [&](int i) {
    if (i == 0) return 0.0;
    if (grid_size == 2) return x_max;
    const double frac = static_cast<double>(grid_size - 1 - i) / (grid_size - 2);
    return x_max * std::pow(10.0, -12.0 * frac);
  };
  double grid_sup = -1.0;
  double grid_arg = 0.0;
  for (int i = 0; i < grid_size; ++i) {
    const double x = grid_point(i);
    const double fp = eval_f_prime(F, x);
    const double v = 4.0 * x * fp * fp;
    if (v > grid_sup) {
      grid_sup = v;
      grid_arg = x;
    }
  }

  const double p = F.parameter();
  switch (F.family()) {
    case EllipticFunction::Family::Zero:
      report.analytic_bound = 0.0;
      report.sup_value = 0.0;
      report.witness_x = 0.0;
      report.admissible = true;
      break;
    case EllipticFunction::Family::Rational:
      // max of 4x c^2/(1+x)^4 sits at x = 1/3.
      report.analytic_bound = p * p * 27.0 / 64.0;
      report.sup_value = *report.analytic_bound;
      report.witness_x = 1.0 / 3.0;
      report.admissible = *report.analytic_bound < 1.0;
      break;
    case EllipticFunction::Family::SqrtShift:
      // 4x f'^2 = a^2 x/(1+x): supremum a^2, approached but never attained.
      report.analytic_bound = p * p;
      report.sup_value = grid_sup;
      report.witness_x = grid_arg;
      report.admissible = p * p <= 1.0;
      break;
  }
  return report;
}

void require_admissible(const EllipticFunction& F) {
  const auto report = check_ellipticity(F);
  if (!report.admissible) {
    throw std::invalid_argument("Weingarten relation " + F.to_string() +
                                " is not elliptic (sup 4x f'(x)^2 = " +
                                std::to_string(report.analytic_bound.value_or(report.sup_value)) + ")");
  }
}

double g(const EllipticFunction& F, double x) {
  const double p = F.parameter();
  switch (F.family()) {
    case EllipticFunction::Family::Zero:
      return x;
    case EllipticFunction::Family::Rational:
      return x - p * x * x / (1.0 + x * x);
    case EllipticFunction::Family::SqrtShift: {
      // x - a + a q; x + a q cancels when a x < 0.
      const double q = hyp(x);
      if (p * x < 0.0) return ((1.0 - p * p) * x * x - p * p) / (x - p * q) - p;
      return x + p * q - p;
    }
  }
  return x;
}

double g_bar(const EllipticFunction& F, double x) { return -g(F, -x); }

double g_prime(const EllipticFunction& F, double x) {
  const double p = F.parameter();
  switch (F.family()) {
    case EllipticFunction::Family::Zero:
      return 1.0;
    case EllipticFunction::Family::Rational: {
      const double d = 1.0 + x * x;
      return 1.0 - 2.0 * p * x / (d * d);
    }
    case EllipticFunction::Family::SqrtShift: {
      // 1 + a x / q; q + a x cancels when a x < 0.
      const double q = hyp(x);
      if (p * x < 0.0) return (1.0 + (1.0 - p * p) * x * x) / (q - p * x) / q;
      return 1.0 + p * x / q;
    }
  }
  return 1.0;
}

double g_bar_prime(const EllipticFunction& F, double x) { return g_prime(F, -x); }

GLimits compute_limits(const EllipticFunction& F) {
  const double p = F.parameter();
  switch (F.family()) {
    case EllipticFunction::Family::Zero:
    case EllipticFunction::Family::Rational:
      return {-kInf, kInf};
    case EllipticFunction::Family::SqrtShift:
      // g(r) ~ (1 - |a|) r - a + O(1/r) on the side where a r < 0.
      return {p == 1.0 ? -1.0 : -kInf, p == -1.0 ? 1.0 : kInf};
  }
  return {-kInf, kInf};
}

GLimits estimate_limits_numerically(const EllipticFunction& F) {
  constexpr int kCap = 200;
  constexpr double kBlowUp = 1e12;
  auto limit = [&](double direction) {
    double prev = g(F, direction);
    for (int k = 1; k <= kCap; ++k) {
      const double cur = g(F, direction * std::ldexp(1.0, k));
      if (std::abs(cur) > kBlowUp) return direction * kInf;
      if (std::abs(cur - prev) <= 1e-12 * std::max(1.0, std::abs(cur))) return cur;
      prev = cur;
    }
    return prev;
  };
  return {limit(-1.0), limit(1.0)};
}

std::optional<double> invert_g_bar(const EllipticFunction& F, double w) {
  if (!std::isfinite(w)) return std::nullopt;
  const GLimits lim = compute_limits(F);
  if (!(w > -lim.ell_plus && w < -lim.ell_minus)) return std::nullopt;

  const double tol = 1e-12 * std::max(1.0, std::abs(w));
  auto h = [&](double u) { return g_bar(F, u) - w; };

  double u0 = w;
  double h0 = h(u0);
  if (std::abs(h0) <= tol) return u0;

  constexpr int kMaxDoublings = 200;
  double lo = u0, hi = u0, h_lo = h0, h_hi = h0;
  double step = std::max(1.0, std::abs(w));
  const double dir = h0 < 0.0 ? 1.0 : -1.0;
  bool bracketed = false;
  for (int k = 0; k < kMaxDoublings; ++k) {
    const double u = u0 + dir * step;
    const double hu = h(u);
    if ((hu < 0.0) != (h0 < 0.0) || hu == 0.0) {
      if (dir > 0) { hi = u; h_hi = hu; } else { lo = u; h_lo = hu; }
      bracketed = true;
      break;
    }
    if (dir > 0) { lo = u; h_lo = hu; } else { hi = u; h_hi = hu; }
    step *= 2.0;
  }
  if (!bracketed) return std::nullopt;

  // Safeguarded Newton on [lo, hi]: h_lo < 0 <= h_hi.
  double u = std::abs(h_lo) < std::abs(h_hi) ? lo : hi;
  for (int it = 0; it < 400; ++it) {
    const double hu = h(u);
    if (std::abs(hu) <= tol) return u;
    if (hu < 0.0) { lo = u; h_lo = hu; } else { hi = u; h_hi = hu; }
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;  // adjacent doubles
    const double d = g_bar_prime(F, u);
    double next = u - hu / d;
    if (!(d > 0.0) || !(next > lo && next < hi)) next = mid;
    u = next;
  }
  return std::abs(h_lo) < std::abs(h_hi) ? lo : hi;
}

}  // namespace wg
