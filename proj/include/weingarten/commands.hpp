#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "weingarten/io.hpp"

namespace wg {

// Process exit codes shared by the subcommands.
inline constexpr int kExitOk = 0;
inline constexpr int kExitUsage = 1;
inline constexpr int kExitInadmissible = 2;
inline constexpr int kExitGateFailure = 3;
inline constexpr int kExitIo = 4;

/// 0 admissible, 2 inadmissible, 1 unparseable spec. The report goes to `out`
/// unless parsing failed; the parse message goes to `err`.
int cmd_check_f(const std::string& family_spec, std::ostream& out, std::ostream& err);

/// Writes <output_dir>/profile.csv and <output_dir>/report.json. On a failed
/// existence gate writes <output_dir>/gate.json instead and returns 3.
int cmd_trace(const RunConfig& config, std::ostream& err);

/// Prints the classification report JSON to `out`.
int cmd_classify(const RunConfig& config, std::ostream& out, std::ostream& err);

/// Writes <output_dir>/surface.obj.
int cmd_mesh(const RunConfig& config, bool poincare, std::ostream& err);

struct SweepRow {
  double phi0 = 0.0;
  std::string kind;  // SurfaceKind name, GATE_FAIL, INCONSISTENT or ERROR
  std::optional<double> T;
  std::optional<double> T_tilde;
  std::optional<double> t_infinity;
  std::optional<double> decay_rate_b;
  double gate_lhs = 0.0;
  double gate_rhs = 0.0;
  std::string message;
};

/// One trace + classify per phi0, rows evaluated concurrently and returned in
/// input order.
std::vector<SweepRow> run_sweep(const RunConfig& config, const std::vector<double>& phi0s);

/// phi0 grid of a sweep range, endpoints included.
std::vector<double> sweep_grid(const SweepRange& range);

/// `phi0,kind,T,T_tilde,t_infinity,decay_rate_b,gate_lhs,gate_rhs`
void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows);

/// Writes <output_dir>/sweep.csv. Returns 0 when at least one row succeeded,
/// 1 without a sweep range, 3 when every row failed.
int cmd_sweep(const RunConfig& config, std::ostream& err);

/// Builds the shooting spec a RunConfig describes.
ShootingSpec shooting_spec_from(const RunConfig& config, double phi0);

}  // namespace wg
