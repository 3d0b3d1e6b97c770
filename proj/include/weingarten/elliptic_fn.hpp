#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace wg {

/// Weingarten relation H = f(H^2 - K_e) with f(0) = 0, drawn from a small set
/// of closed-form families.
///
///   Zero           f(x) = 0
///   Rational(c)    f(x) = c x / (1 + x)
///   SqrtShift(a)   f(x) = a (1 - sqrt(1 + x))
///
/// Values are immutable. Construction does not check ellipticity; call
/// check_ellipticity (or require_admissible) before feeding a function to the
/// geometry and integrator layers.
class EllipticFunction {
 public:
  enum class Family { Zero, Rational, SqrtShift };

  static EllipticFunction zero() { return {Family::Zero, 0.0}; }
  static EllipticFunction rational(double c);
  static EllipticFunction sqrt_shift(double a);

  /// Parses `zero`, `rational:c=<float>` or `sqrtshift:a=<float>`.
  /// Throws std::invalid_argument naming the offending token.
  static EllipticFunction parse(std::string_view text);

  Family family() const { return family_; }
  double parameter() const { return param_; }

  /// Inverse of parse; numbers use 17 significant digits.
  std::string to_string() const;

  bool operator==(const EllipticFunction&) const = default;

 private:
  EllipticFunction(Family family, double param) : family_(family), param_(param) {}

  Family family_;
  double param_;
};

// Throw std::domain_error for x < 0.
double eval_f(const EllipticFunction& F, double x);
double eval_f_prime(const EllipticFunction& F, double x);

struct EllipticityReport {
  bool admissible = false;
  double sup_value = 0.0;
  double witness_x = 0.0;
  int grid_size = 0;
  std::optional<double> analytic_bound;
};

inline constexpr double kDefaultEllipticityXMax = 1e6;
inline constexpr int kDefaultEllipticityGrid = 4096;

/// Checks sup_{x>=0} 4x f'(x)^2 < 1. The family's closed-form supremum decides
/// admissibility; a log-spaced grid on [0, x_max] is scanned as a cross-check
/// and fills sup_value.
EllipticityReport check_ellipticity(const EllipticFunction& F,
                                    double x_max = kDefaultEllipticityXMax,
                                    int grid_size = kDefaultEllipticityGrid);

/// Throws std::invalid_argument unless check_ellipticity reports admissible.
void require_admissible(const EllipticFunction& F);

// g(x) = x - f(x^2) and gbar(x) = x + f(x^2), defined on all of R. Both are
// strictly increasing through the origin for admissible F, and
// gbar(u) = -g(-u).
double g(const EllipticFunction& F, double x);
double g_bar(const EllipticFunction& F, double x);
double g_prime(const EllipticFunction& F, double x);
double g_bar_prime(const EllipticFunction& F, double x);

/// ell_minus = lim_{r->-inf} g(r) in [-inf, 0), ell_plus = lim_{r->+inf} g(r)
/// in (0, +inf]. Infinite limits are stored as +-infinity.
struct GLimits {
  double ell_minus;
  double ell_plus;
};

GLimits compute_limits(const EllipticFunction& F);

/// Limit estimate from g(-+2^k), k <= 200, for families without a closed form.
/// A limit is declared infinite once |g| exceeds 1e12.
GLimits estimate_limits_numerically(const EllipticFunction& F);

/// Unique u with gbar(u) = w when -ell_plus < w < -ell_minus, std::nullopt
/// otherwise. The residual satisfies |gbar(u) - w| <= 1e-12 max(1, |w|)
/// unless the bracket collapses to adjacent doubles first.
std::optional<double> invert_g_bar(const EllipticFunction& F, double w);

}  // namespace wg
