#pragma once

#include <limits>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>

#include "weingarten/profile.hpp"

namespace wg {

enum class SurfaceKind { Slice, Cylinder, Catenoidal, Unduloidal };

const char* to_string(SurfaceKind kind);

struct DiagnosticCheck {
  bool passed = false;
  double measured = 0.0;
  double threshold = 0.0;
};

struct ClassificationReport {
  SurfaceKind kind = SurfaceKind::Slice;
  std::optional<double> phi_min;
  std::optional<double> phi_max;
  std::optional<double> period_T;
  std::optional<double> vertical_period;
  std::optional<double> t_infinity;
  std::optional<double> s1;
  std::optional<double> s2;
  std::optional<double> s3;
  std::optional<double> decay_rate_b;
  std::map<std::string, DiagnosticCheck> diagnostics;
};

/// A profile no surface type explains. Always an integration fault: the
/// rotational minimal-type Weingarten surfaces are exhausted by the four kinds.
class InconsistentProfile : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class InsufficientEvents : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr double kCylinderTol = 1e-8;
inline constexpr double kSymmetryTol = 1e-7;
inline constexpr double kTailFitResidualTol = 1e-3;
// Relative gap below which the catenoid height bound can only hold with equality.
inline constexpr double kHeightResolution = 64.0 * std::numeric_limits<double>::epsilon();

ClassificationReport classify(const Profile& P);

struct PeriodEstimate {
  double T = 0.0;
  double T_tilde = 0.0;
  double s1 = 0.0;  // minimum
  double s2 = 0.0;  // next maximum
  double cross_check = 0.0;  // |spacing of same-type extrema - T|
};

/// T = 2(s2 - s1) and T~ = 2(t(s2) - t(s1)) from polished events, with s1 the
/// minimum nearest s = 0. Throws InsufficientEvents with fewer than three
/// phi' zeros.
PeriodEstimate estimate_period(const Profile& P);

struct TInfinityEstimate {
  double t_inf = 0.0;
  double decay_rate_b = 0.0;
  double fit_residual = 0.0;  // RMS of the log|t'| line fit
  bool fit_ok = false;        // false: t_inf is only the lower bound |t(s_end)|
};

/// Least-squares fit of log|t'| = log c - b s over the last quarter of the
/// forward half, closed with the tail integral |t'(s_end)| / b.
TInfinityEstimate estimate_t_infinity(const Profile& P);

/// max over samples of |phi(s) - phi(2 s0 - s)| + |t(s) + t(2 s0 - s) - 2 t(s0)|,
/// evaluating the mirror abscissa by interpolation.
double check_symmetry(const Profile& P, double s0);

}  // namespace wg
