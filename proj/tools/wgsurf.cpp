// wgsurf: trace, classify and mesh rotational Weingarten surfaces of minimal
// type in S^2 x R and H^2 x R.

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "weingarten/commands.hpp"

namespace {

struct Overrides {
  std::string config_path;
  std::string family, epsilon, phi0, sigma, s_max, rel_tol, abs_tol, output_dir, segments, sweep;
};

void add_run_options(CLI::App* cmd, Overrides& o, bool with_sweep) {
  cmd->add_option("--config", o.config_path, "key=value configuration file");
  cmd->add_option("--family", o.family, "zero | rational:c=<x> | sqrtshift:a=<x>");
  cmd->add_option("--epsilon", o.epsilon, "+1 for S^2, -1 for H^2");
  cmd->add_option("--phi0", o.phi0, "minimum radius phi0 (accepts pi/4 style)");
  cmd->add_option("--sigma", o.sigma, "sign of t'");
  cmd->add_option("--s-max", o.s_max, "half window; 0 picks the default");
  cmd->add_option("--rel-tol", o.rel_tol, "step controller relative tolerance");
  cmd->add_option("--abs-tol", o.abs_tol, "step controller absolute tolerance");
  cmd->add_option("--output-dir", o.output_dir, "output directory (default $WG_OUTPUT_DIR or .)");
  cmd->add_option("--segments", o.segments, "mesh theta segments (>= 8)");
  if (with_sweep) cmd->add_option("--sweep", o.sweep, "start,end,count");
}

wg::RunConfig build_config(const Overrides& o) {
  wg::RunConfig c = wg::default_run_config();
  if (!o.config_path.empty()) {
    std::ifstream in(o.config_path);
    if (!in) throw std::invalid_argument("cannot read config " + o.config_path);
    std::stringstream buf;
    buf << in.rdbuf();
    c = wg::parse_run_config(buf.str(), c);
  }
  auto set = [&c](const char* key, const std::string& v) {
    if (!v.empty()) wg::set_config_field(c, key, v);
  };
  set("family", o.family);
  set("epsilon", o.epsilon);
  set("phi0", o.phi0);
  set("sigma", o.sigma);
  set("s_max", o.s_max);
  set("rel_tol", o.rel_tol);
  set("abs_tol", o.abs_tol);
  set("output_dir", o.output_dir);
  set("mesh_theta_segments", o.segments);
  if (!o.sweep.empty()) {
    const auto a = o.sweep.find(',');
    const auto b = o.sweep.find(',', a == std::string::npos ? a : a + 1);
    if (a == std::string::npos || b == std::string::npos) {
      throw std::invalid_argument("--sweep expects start,end,count");
    }
    set("sweep_start", o.sweep.substr(0, a));
    set("sweep_end", o.sweep.substr(a + 1, b - a - 1));
    set("sweep_count", o.sweep.substr(b + 1));
  }
  wg::validate(c);
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Trace, classify and mesh surfaces of revolution with H = f(H^2 - K_e) in S^2 x R or H^2 x R"};
  app.require_subcommand(1);

  std::string family_spec;
  auto* check = app.add_subcommand("check-f", "check ellipticity of a Weingarten relation");
  check->add_option("family_spec", family_spec, "zero | rational:c=<x> | sqrtshift:a=<x>")->required();

  Overrides trace_o, classify_o, mesh_o, sweep_o;
  bool poincare = false;
  auto* trace = app.add_subcommand("trace", "integrate a profile, write profile.csv and report.json");
  add_run_options(trace, trace_o, false);
  auto* classify = app.add_subcommand("classify", "integrate and print the classification report");
  add_run_options(classify, classify_o, false);
  auto* mesh = app.add_subcommand("mesh", "integrate and write surface.obj");
  add_run_options(mesh, mesh_o, false);
  mesh->add_flag("--poincare", poincare, "H^2 only: Poincare disk chart");
  auto* sweep = app.add_subcommand("sweep", "trace + classify over a phi0 grid, write sweep.csv");
  add_run_options(sweep, sweep_o, true);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : wg::kExitUsage;
  }

  if (*check) return wg::cmd_check_f(family_spec, std::cout, std::cerr);

  try {
    if (*trace) return wg::cmd_trace(build_config(trace_o), std::cerr);
    if (*classify) return wg::cmd_classify(build_config(classify_o), std::cout, std::cerr);
    if (*mesh) return wg::cmd_mesh(build_config(mesh_o), poincare, std::cerr);
    if (*sweep) return wg::cmd_sweep(build_config(sweep_o), std::cerr);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return wg::kExitUsage;
  }
  return wg::kExitUsage;
}
