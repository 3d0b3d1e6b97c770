#include "weingarten/commands.hpp"

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <ostream>
#include <sstream>
#include <thread>

namespace wg {

namespace {

namespace fs = std::filesystem;

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

void write_file(const fs::path& path, const std::string& content) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << content;
  out.flush();
  if (!out) throw IoError("write failed for " + path.string());
}

// Shared error mapping for the file-producing subcommands.
template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const IoError& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
}

std::optional<int> admissibility_exit(const RunConfig& config, std::ostream& err) {
  const auto F = EllipticFunction::parse(config.family_spec);
  if (!check_ellipticity(F).admissible) {
    err << "error: " << config.family_spec << " is not elliptic\n";
    return kExitInadmissible;
  }
  return std::nullopt;
}

nlohmann::json gate_document(const ShootingSpec& spec, const GateCheck& gate) {
  return {{"spec", to_json(spec)}, {"gate", to_json(gate)}};
}

}  // namespace

ShootingSpec shooting_spec_from(const RunConfig& config, double phi0) {
  validate(config);
  ShootingSpec spec = make_shooting_spec(EllipticFunction::parse(config.family_spec),
                                         Ambient(config.epsilon), phi0, config.sigma, config.s_max);
  spec.rel_tol = config.rel_tol;
  spec.abs_tol = config.abs_tol;
  return spec;
}

int cmd_check_f(const std::string& family_spec, std::ostream& out, std::ostream& err) {
  EllipticFunction F = EllipticFunction::zero();
  try {
    F = EllipticFunction::parse(family_spec);
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  const EllipticityReport report = check_ellipticity(F);
  out << to_json(report).dump(2) << '\n';
  return report.admissible ? kExitOk : kExitInadmissible;
}

int cmd_trace(const RunConfig& config, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    if (auto code = admissibility_exit(config, err)) return *code;
    const fs::path dir(config.output_dir);
    const ShootingSpec spec = shooting_spec_from(config, config.phi0);
    const GateCheck gate = evaluate_gate(spec);
    if (!gate.holds) {
      write_file(dir / "gate.json", gate_document(spec, gate).dump(2) + "\n");
      err << "existence gate failed: " << gate.inequality << '\n';
      return kExitGateFailure;
    }

    const Profile P = integrate_profile(spec);
    nlohmann::json report = profile_envelope(P);
    report["gate"] = to_json(gate);
    int code = kExitOk;
    if (P.termination == Termination::GateFailure) {
      write_file(dir / "gate.json", gate_document(spec, gate).dump(2) + "\n");
      code = kExitGateFailure;
    } else if (P.termination == Termination::Completed) {
      try {
        report["classification"] = to_json(classify(P));
      } catch (const InconsistentProfile& e) {
        report["classification"] = nullptr;
        report["classification_error"] = e.what();
        err << "error: " << e.what() << '\n';
        code = kExitUsage;
      }
    } else {
      report["classification"] = nullptr;
      code = kExitUsage;
    }

    std::ostringstream csv;
    write_profile_csv(csv, P);
    write_file(dir / "profile.csv", csv.str());
    write_file(dir / "report.json", report.dump(2) + "\n");
    return code;
  });
}

int cmd_classify(const RunConfig& config, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    if (auto code = admissibility_exit(config, err)) return *code;
    const ShootingSpec spec = shooting_spec_from(config, config.phi0);
    const GateCheck gate = evaluate_gate(spec);
    if (!gate.holds) {
      out << gate_document(spec, gate).dump(2) << '\n';
      return kExitGateFailure;
    }
    const Profile P = integrate_profile(spec);
    if (P.termination == Termination::GateFailure) {
      out << gate_document(spec, gate).dump(2) << '\n';
      return kExitGateFailure;
    }
    out << to_json(classify(P)).dump(2) << '\n';
    return kExitOk;
  });
}

int cmd_mesh(const RunConfig& config, bool poincare, std::ostream& err) {
  return guarded(err, [&] {
    validate(config);
    if (auto code = admissibility_exit(config, err)) return *code;
    const ShootingSpec spec = shooting_spec_from(config, config.phi0);
    const GateCheck gate = evaluate_gate(spec);
    if (!gate.holds) {
      err << "existence gate failed: " << gate.inequality << '\n';
      return kExitGateFailure;
    }
    const Profile P = integrate_profile(spec);
    if (P.termination != Termination::Completed) {
      err << "integration ended with " << to_string(P.termination) << '\n';
      return P.termination == Termination::GateFailure ? kExitGateFailure : kExitUsage;
    }
    std::ostringstream obj;
    write_obj(obj, P, {config.mesh_theta_segments, poincare});
    write_file(fs::path(config.output_dir) / "surface.obj", obj.str());
    return kExitOk;
  });
}

std::vector<double> sweep_grid(const SweepRange& range) {
  if (range.count < 2) throw std::invalid_argument("sweep_count must be >= 2");
  std::vector<double> out;
  for (int i = 0; i < range.count; ++i) {
    out.push_back(range.phi0_start + (range.phi0_end - range.phi0_start) * i / (range.count - 1));
  }
  return out;
}

namespace {

SweepRow sweep_one(const RunConfig& config, double phi0) {
  SweepRow row;
  row.phi0 = phi0;
  try {
    const ShootingSpec spec = shooting_spec_from(config, phi0);
    const GateCheck gate = evaluate_gate(spec);
    row.gate_lhs = gate.lhs;
    row.gate_rhs = gate.rhs;
    if (!gate.holds) {
      row.kind = "GATE_FAIL";
      return row;
    }
    const Profile P = integrate_profile(spec);
    if (P.termination == Termination::GateFailure) {
      row.kind = "GATE_FAIL";
      return row;
    }
    const ClassificationReport r = classify(P);
    row.kind = to_string(r.kind);
    row.T = r.period_T;
    row.T_tilde = r.vertical_period;
    row.t_infinity = r.t_infinity;
    row.decay_rate_b = r.decay_rate_b;
  } catch (const InconsistentProfile& e) {
    row.kind = "INCONSISTENT";
    row.message = e.what();
  } catch (const std::exception& e) {
    row.kind = "ERROR";
    row.message = e.what();
  }
  return row;
}

}  // namespace

std::vector<SweepRow> run_sweep(const RunConfig& config, const std::vector<double>& phi0s) {
  std::vector<SweepRow> rows(phi0s.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < phi0s.size(); i = next++) rows[i] = sweep_one(config, phi0s[i]);
  };
  const unsigned n = std::clamp<unsigned>(std::thread::hardware_concurrency(), 1u,
                                          static_cast<unsigned>(std::max<std::size_t>(phi0s.size(), 1)));
  std::vector<std::thread> pool;
  for (unsigned i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return rows;
}

void write_sweep_csv(std::ostream& out, const std::vector<SweepRow>& rows) {
  auto opt = [](const std::optional<double>& v) { return v ? format_double(*v) : std::string(); };
  auto num = [](double v) {
    if (std::isinf(v)) return std::string(v > 0 ? "inf" : "-inf");
    return format_double(v);
  };
  out << "phi0,kind,T,T_tilde,t_infinity,decay_rate_b,gate_lhs,gate_rhs\n";
  for (const auto& r : rows) {
    out << format_double(r.phi0) << ',' << r.kind << ',' << opt(r.T) << ',' << opt(r.T_tilde) << ','
        << opt(r.t_infinity) << ',' << opt(r.decay_rate_b) << ',' << num(r.gate_lhs) << ','
        << num(r.gate_rhs) << '\n';
  }
}

int cmd_sweep(const RunConfig& config, std::ostream& err) {
  if (!config.sweep_range) {
    err << "error: sweep needs a sweep range (sweep_start, sweep_end, sweep_count)\n";
    return kExitUsage;
  }
  return guarded(err, [&] {
    validate(config);
    if (auto code = admissibility_exit(config, err)) return *code;
    const auto rows = run_sweep(config, sweep_grid(*config.sweep_range));
    std::ostringstream csv;
    write_sweep_csv(csv, rows);
    write_file(fs::path(config.output_dir) / "sweep.csv", csv.str());
    for (const auto& r : rows) {
      if (!r.message.empty()) err << "phi0 " << format_double(r.phi0) << ": " << r.message << '\n';
    }
    const bool any_ok = std::any_of(rows.begin(), rows.end(), [](const SweepRow& r) {
      return r.kind != "GATE_FAIL" && r.kind != "INCONSISTENT" && r.kind != "ERROR";
    });
    return any_ok ? kExitOk : kExitGateFailure;
  });
}

}  // namespace wg
