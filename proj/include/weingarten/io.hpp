#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include <nlohmann/json.hpp>

#include "weingarten/classifier.hpp"
#include "weingarten/elliptic_fn.hpp"
#include "weingarten/profile.hpp"

namespace wg {

struct SweepRange {
  double phi0_start = 0.0;
  double phi0_end = 0.0;
  int count = 0;

  bool operator==(const SweepRange&) const = default;
};

/// Flat run configuration shared by the CLI subcommands.
struct RunConfig {
  std::string family_spec = "zero";
  int epsilon = 1;
  double phi0 = 0.7853981633974483;
  int sigma = 1;
  double s_max = 0.0;  // <= 0 selects the default window
  double rel_tol = 1e-10;
  double abs_tol = 1e-12;
  std::string output_dir = ".";
  int mesh_theta_segments = 32;
  std::optional<SweepRange> sweep_range;

  bool operator==(const RunConfig&) const = default;
};

/// Default config with output_dir taken from WG_OUTPUT_DIR when set.
RunConfig default_run_config();

/// Parses `key = value` lines ('#' starts a comment). Keys: family, epsilon,
/// phi0, sigma, s_max, rel_tol, abs_tol, output_dir, mesh_theta_segments,
/// sweep_start, sweep_end, sweep_count. Angles accept `pi`, `pi/4`, `3pi/8`.
/// Throws std::invalid_argument on unknown keys or malformed values.
RunConfig parse_run_config(std::string_view text, RunConfig base = default_run_config());

/// Sets one field from its textual value; shared by the file parser and the
/// CLI override flags.
void set_config_field(RunConfig& config, std::string_view key, std::string_view value);

std::string serialize_run_config(const RunConfig& config);

/// Throws std::invalid_argument for non-finite numbers, bad epsilon/sigma,
/// fewer than 8 mesh segments or a sweep count below 2.
void validate(const RunConfig& config);

/// Reads a real number or a multiple of pi (`pi`, `-pi/2`, `3pi/8`, `0.5*pi`).
double parse_real(std::string_view text);

/// "%.17g"
std::string format_double(double v);

/// Finite values become JSON numbers, +-inf the strings "inf"/"-inf", NaN null.
nlohmann::json json_number(double v);

nlohmann::json to_json(const EllipticityReport& report);
nlohmann::json to_json(const GateCheck& gate);
nlohmann::json to_json(const ShootingSpec& spec);
nlohmann::json to_json(const ClassificationReport& report);

/// spec, events, termination (and failure_s) of a profile.
nlohmann::json profile_envelope(const Profile& P);

/// `s,phi,phi_p,t,t_p,k1,k2,H,Ke`, curvatures re-solved at every sample.
void write_profile_csv(std::ostream& out, const Profile& P);

struct MeshOptions {
  int theta_segments = 32;
  bool poincare = false;  // H^2 only: (x1, x2)/(1 + x3) disk chart, 3-D vertices
};

/// Wavefront OBJ of the surface of revolution. Vertex (i, j) is F(s_i,
/// theta_j); quads between consecutive samples are split into two triangles
/// and wrap around in theta.
void write_obj(std::ostream& out, const Profile& P, const MeshOptions& options);

}  // namespace wg
