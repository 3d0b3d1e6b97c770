#include "weingarten/io.hpp"

#include <Eigen/Geometry>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <numbers>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace wg {

namespace {

std::string_view trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

double parse_plain(std::string_view text, std::string_view full) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), v);
  if (text.empty() || ec != std::errc() || ptr != text.data() + text.size()) {
    throw std::invalid_argument("malformed number '" + std::string(full) + "'");
  }
  return v;
}

int parse_int(std::string_view text) {
  int v = 0;
  const auto t = trim(text);
  const auto [ptr, ec] = std::from_chars(t.data(), t.data() + t.size(), v);
  if (t.empty() || ec != std::errc() || ptr != t.data() + t.size()) {
    throw std::invalid_argument("malformed integer '" + std::string(text) + "'");
  }
  return v;
}

SweepRange& sweep_of(RunConfig& c) {
  if (!c.sweep_range) c.sweep_range = SweepRange{};
  return *c.sweep_range;
}

}  // namespace

RunConfig default_run_config() {
  RunConfig c;
  if (const char* dir = std::getenv("WG_OUTPUT_DIR"); dir != nullptr && *dir != '\0') {
    c.output_dir = dir;
  }
  return c;
}

double parse_real(std::string_view text) {
  const auto t = trim(text);
  const auto pos = t.find("pi");
  if (pos == std::string_view::npos) return parse_plain(t, text);

  // [k[*]]pi[/n]
  double k = 1.0;
  auto head = t.substr(0, pos);
  if (!head.empty() && head.back() == '*') head.remove_suffix(1);
  if (head == "-") {
    k = -1.0;
  } else if (!head.empty()) {
    k = parse_plain(head, text);
  }
  double n = 1.0;
  auto tail = t.substr(pos + 2);
  if (!tail.empty()) {
    if (tail.front() != '/') throw std::invalid_argument("malformed angle '" + std::string(text) + "'");
    n = parse_plain(tail.substr(1), text);
  }
  return k * std::numbers::pi / n;
}

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void set_config_field(RunConfig& c, std::string_view key, std::string_view value) {
  const auto v = trim(value);
  if (key == "family") {
    EllipticFunction::parse(v);  // reject early
    c.family_spec = std::string(v);
  } else if (key == "epsilon") {
    c.epsilon = parse_int(v);
  } else if (key == "phi0") {
    c.phi0 = parse_real(v);
  } else if (key == "sigma") {
    c.sigma = parse_int(v);
  } else if (key == "s_max") {
    c.s_max = parse_real(v);
  } else if (key == "rel_tol") {
    c.rel_tol = parse_real(v);
  } else if (key == "abs_tol") {
    c.abs_tol = parse_real(v);
  } else if (key == "output_dir") {
    c.output_dir = std::string(v);
  } else if (key == "mesh_theta_segments") {
    c.mesh_theta_segments = parse_int(v);
  } else if (key == "sweep_start") {
    sweep_of(c).phi0_start = parse_real(v);
  } else if (key == "sweep_end") {
    sweep_of(c).phi0_end = parse_real(v);
  } else if (key == "sweep_count") {
    sweep_of(c).count = parse_int(v);
  } else {
    throw std::invalid_argument("unknown config key '" + std::string(key) + "'");
  }
}

RunConfig parse_run_config(std::string_view text, RunConfig base) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    ++line_no;
    const auto nl = text.find('\n');
    auto line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) {
      throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key=value");
    }
    // family values contain '=' themselves, so split on the first one only.
    set_config_field(base, trim(line.substr(0, eq)), line.substr(eq + 1));
  }
  return base;
}

std::string serialize_run_config(const RunConfig& c) {
  std::ostringstream out;
  out << "family = " << c.family_spec << '\n'
      << "epsilon = " << c.epsilon << '\n'
      << "phi0 = " << format_double(c.phi0) << '\n'
      << "sigma = " << c.sigma << '\n'
      << "s_max = " << format_double(c.s_max) << '\n'
      << "rel_tol = " << format_double(c.rel_tol) << '\n'
      << "abs_tol = " << format_double(c.abs_tol) << '\n'
      << "output_dir = " << c.output_dir << '\n'
      << "mesh_theta_segments = " << c.mesh_theta_segments << '\n';
  if (c.sweep_range) {
    out << "sweep_start = " << format_double(c.sweep_range->phi0_start) << '\n'
        << "sweep_end = " << format_double(c.sweep_range->phi0_end) << '\n'
        << "sweep_count = " << c.sweep_range->count << '\n';
  }
  return out.str();
}

void validate(const RunConfig& c) {
  EllipticFunction::parse(c.family_spec);
  if (c.epsilon != 1 && c.epsilon != -1) throw std::invalid_argument("epsilon must be +1 or -1");
  if (c.sigma != 1 && c.sigma != -1) throw std::invalid_argument("sigma must be +1 or -1");
  for (double v : {c.phi0, c.s_max, c.rel_tol, c.abs_tol}) {
    if (!std::isfinite(v)) throw std::invalid_argument("config numbers must be finite");
  }
  if (c.mesh_theta_segments < 8) throw std::invalid_argument("mesh_theta_segments must be >= 8");
  if (c.sweep_range) {
    const auto& r = *c.sweep_range;
    if (!std::isfinite(r.phi0_start) || !std::isfinite(r.phi0_end)) {
      throw std::invalid_argument("sweep bounds must be finite");
    }
    if (r.count < 2) throw std::invalid_argument("sweep_count must be >= 2");
  }
}

nlohmann::json json_number(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

namespace {

nlohmann::json json_optional(const std::optional<double>& v) {
  return v ? json_number(*v) : nlohmann::json(nullptr);
}

}  // namespace

nlohmann::json to_json(const EllipticityReport& r) {
  return {{"admissible", r.admissible},
          {"sup_value", json_number(r.sup_value)},
          {"witness_x", json_number(r.witness_x)},
          {"grid_size", r.grid_size},
          {"analytic_bound", json_optional(r.analytic_bound)}};
}

nlohmann::json to_json(const GateCheck& gate) {
  return {{"holds", gate.holds},
          {"lhs", json_number(gate.lhs)},
          {"rhs", json_number(gate.rhs)},
          {"inequality", gate.inequality}};
}

nlohmann::json to_json(const ShootingSpec& spec) {
  return {{"family", spec.F.to_string()},
          {"epsilon", spec.A.epsilon()},
          {"phi0", json_number(spec.phi0)},
          {"sigma", spec.sigma},
          {"s_max", json_number(spec.s_max)},
          {"rel_tol", json_number(spec.rel_tol)},
          {"abs_tol", json_number(spec.abs_tol)},
          {"max_steps", spec.max_steps},
          {"h_max", json_number(spec.h_max)}};
}

nlohmann::json to_json(const ClassificationReport& r) {
  nlohmann::json diag = nlohmann::json::object();
  for (const auto& [name, check] : r.diagnostics) {
    diag[name] = {{"passed", check.passed},
                  {"measured", json_number(check.measured)},
                  {"threshold", json_number(check.threshold)}};
  }
  return {{"kind", to_string(r.kind)},
          {"phi_min", json_optional(r.phi_min)},
          {"phi_max", json_optional(r.phi_max)},
          {"period_T", json_optional(r.period_T)},
          {"vertical_period", json_optional(r.vertical_period)},
          {"t_infinity", json_optional(r.t_infinity)},
          {"s1", json_optional(r.s1)},
          {"s2", json_optional(r.s2)},
          {"s3", json_optional(r.s3)},
          {"decay_rate_b", json_optional(r.decay_rate_b)},
          {"diagnostics", diag}};
}

nlohmann::json profile_envelope(const Profile& P) {
  nlohmann::json events = nlohmann::json::array();
  for (const auto& e : P.events) events.push_back({{"s", json_number(e.s)}, {"kind", to_string(e.kind)}});
  return {{"spec", to_json(P.spec)},
          {"termination", to_string(P.termination)},
          {"failure_s", P.failure_s ? json_number(*P.failure_s) : nlohmann::json(nullptr)},
          {"sample_count", P.samples.size()},
          {"events", events}};
}

void write_profile_csv(std::ostream& out, const Profile& P) {
  out << "s,phi,phi_p,t,t_p,k1,k2,H,Ke\n";
  for (std::size_t i = 0; i < P.samples.size(); ++i) {
    const ProfileState& st = P.samples[i];
    const auto k1 = solve_k1(P.spec.F, P.spec.A, st.phi, st.t_p);
    const auto c = curvatures_from_k1(P.spec.A, st, k1.value_or(P.k1[i]));
    out << format_double(st.s) << ',' << format_double(st.phi) << ',' << format_double(st.phi_p)
        << ',' << format_double(st.t) << ',' << format_double(st.t_p) << ','
        << format_double(c.k1) << ',' << format_double(c.k2) << ',' << format_double(c.H) << ','
        << format_double(c.Ke) << '\n';
  }
}

void write_obj(std::ostream& out, const Profile& P, const MeshOptions& opt) {
  const Ambient& A = P.spec.A;
  const int m = opt.theta_segments;
  if (m < 8) throw std::invalid_argument("theta_segments must be >= 8");
  if (opt.poincare && A.is_sphere()) throw std::invalid_argument("--poincare applies to H^2 only");

  out << "# rotational Weingarten surface, family " << P.spec.F.to_string() << ", epsilon "
      << A.epsilon() << ", phi0 " << format_double(P.spec.phi0) << ", sigma " << P.spec.sigma
      << '\n';
  if (opt.poincare) {
    out << "# model: H^2 x R, Poincare disk chart (x1/(1+x3), x2/(1+x3)) x t\n";
  } else if (A.is_sphere()) {
    out << "# model: S^2 x R, S^2 as the unit sphere in R^3\n";
    out << "# v and vn records carry four values (x1, x2, x3, t); the fourth is the R factor\n";
  } else {
    out << "# model: H^2 x R, H^2 as the hyperboloid x3^2 - x1^2 - x2^2 = 1 in Minkowski space\n";
    out << "# v and vn records carry four values (x1, x2, x3, t); the fourth is the R factor\n";
  }
  out << "# samples " << P.samples.size() << ", theta segments " << m << '\n';

  auto theta_of = [m](int j) { return 2.0 * std::numbers::pi * j / m; };

  for (const auto& st : P.samples) {
    for (int j = 0; j < m; ++j) {
      const Eigen::Vector4d x = surface_point(A, st, theta_of(j));
      if (opt.poincare) {
        const double d = 1.0 + x[2];
        out << "v " << format_double(x[0] / d) << ' ' << format_double(x[1] / d) << ' '
            << format_double(x[3]) << '\n';
      } else {
        out << "v " << format_double(x[0]) << ' ' << format_double(x[1]) << ' '
            << format_double(x[2]) << ' ' << format_double(x[3]) << '\n';
      }
    }
  }
  for (const auto& st : P.samples) {
    for (int j = 0; j < m; ++j) {
      const double th = theta_of(j);
      if (opt.poincare) {
        // Normal of the projected surface from its two coordinate tangents.
        const Eigen::Vector4d x = surface_point(A, st, th);
        const double S = s_eps(A, st.phi), C = c_eps(A, st.phi);
        const Eigen::Vector4d ds(C * st.phi_p * std::cos(th), C * st.phi_p * std::sin(th),
                                 S * st.phi_p, st.t_p);
        const Eigen::Vector4d dth(-S * std::sin(th), S * std::cos(th), 0.0, 0.0);
        const double d = 1.0 + x[2];
        auto push = [&](const Eigen::Vector4d& v) {
          return Eigen::Vector3d(v[0] / d - x[0] * v[2] / (d * d), v[1] / d - x[1] * v[2] / (d * d),
                                 v[3]);
        };
        const Eigen::Vector3d n = push(ds).cross(push(dth)).normalized();
        out << "vn " << format_double(n[0]) << ' ' << format_double(n[1]) << ' '
            << format_double(n[2]) << '\n';
      } else {
        const Eigen::Vector4d n = normal_vector(A, st, th);
        out << "vn " << format_double(n[0]) << ' ' << format_double(n[1]) << ' '
            << format_double(n[2]) << ' ' << format_double(n[3]) << '\n';
      }
    }
  }
  const std::size_t rows = P.samples.size();
  for (std::size_t i = 0; i + 1 < rows; ++i) {
    for (int j = 0; j < m; ++j) {
      const std::size_t jn = static_cast<std::size_t>((j + 1) % m);
      const std::size_t a = i * m + static_cast<std::size_t>(j) + 1;
      const std::size_t b = i * m + jn + 1;
      const std::size_t c = (i + 1) * m + jn + 1;
      const std::size_t e = (i + 1) * m + static_cast<std::size_t>(j) + 1;
      out << "f " << a << "//" << a << ' ' << b << "//" << b << ' ' << c << "//" << c << '\n';
      out << "f " << a << "//" << a << ' ' << c << "//" << c << ' ' << e << "//" << e << '\n';
    }
  }
}

}  // namespace wg
