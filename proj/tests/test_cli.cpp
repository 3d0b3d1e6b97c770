#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out;
};

fs::path scratch(const std::string& name) {
  const fs::path dir = fs::temp_directory_path() / ("wgsurf-cli-" + std::to_string(::getpid())) / name;
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

Run wgsurf(const std::string& args, const fs::path& dir) {
  const fs::path out = dir / "stdout.txt";
  const std::string cmd = std::string("\"") + WGSURF_PATH + "\" " + args + " > \"" + out.string() +
                          "\" 2> \"" + (dir / "stderr.txt").string() + "\"";
  const int status = std::system(cmd.c_str());
  REQUIRE(WIFEXITED(status));
  return {WEXITSTATUS(status), slurp(out)};
}

}  // namespace

TEST_CASE("check-f exit codes") {
  const auto dir = scratch("check");
  auto r = wgsurf("check-f rational:c=1", dir);
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["admissible"] == true);
  CHECK(j["analytic_bound"].get<double>() == 0.421875);

  CHECK(wgsurf("check-f rational:c=2", dir).code == 2);
  CHECK(wgsurf("check-f sqrtshift:a=1", dir).code == 0);
  CHECK(wgsurf("check-f bogus", dir).code == 1);
  CHECK(wgsurf("check-f", dir).code != 0);
  CHECK(wgsurf("frobnicate", dir).code != 0);
}

TEST_CASE("trace writes csv and json") {
  const auto dir = scratch("trace");
  const auto r = wgsurf("trace --family zero --epsilon -1 --phi0 1 --output-dir " + dir.string(), dir);
  CHECK(r.code == 0);
  REQUIRE(fs::exists(dir / "profile.csv"));
  REQUIRE(fs::exists(dir / "report.json"));
  CHECK(slurp(dir / "profile.csv").rfind("s,phi,phi_p,t,t_p,k1,k2,H,Ke\n", 0) == 0);
  const auto j = nlohmann::json::parse(slurp(dir / "report.json"));
  CHECK(j["classification"]["kind"] == "Catenoidal");
  CHECK(j["gate"]["holds"] == true);
  CHECK(j["termination"] == "Completed");
}

TEST_CASE("gate failure is exit 3 with gate.json") {
  const auto dir = scratch("gate");
  const auto r = wgsurf("trace --family sqrtshift:a=1 --phi0 pi/8 --output-dir " + dir.string(), dir);
  CHECK(r.code == 3);
  REQUIRE(fs::exists(dir / "gate.json"));
  CHECK_FALSE(fs::exists(dir / "profile.csv"));
  const auto j = nlohmann::json::parse(slurp(dir / "gate.json"));
  CHECK(j["gate"]["holds"] == false);
  CHECK(j["gate"]["rhs"].get<double>() == 1.0);

  CHECK(wgsurf("classify --family sqrtshift:a=1 --epsilon -1 --phi0 1", dir).code == 3);
}

TEST_CASE("inadmissible relation is exit 2 for every subcommand") {
  const auto dir = scratch("inadmissible");
  for (const char* sub : {"trace", "classify", "mesh"}) {
    CHECK(wgsurf(std::string(sub) + " --family rational:c=3 --output-dir " + dir.string(), dir).code == 2);
  }
}

TEST_CASE("usage errors are exit 1") {
  const auto dir = scratch("usage");
  CHECK(wgsurf("trace --epsilon 2", dir).code == 1);
  CHECK(wgsurf("trace --phi0 2.5 --epsilon 1", dir).code == 1);  // not a minimum on S^2
  CHECK(wgsurf("sweep --family zero --output-dir " + dir.string(), dir).code == 1);
  CHECK(wgsurf("trace --config " + (dir / "missing.cfg").string(), dir).code != 0);
}

TEST_CASE("classify prints the report") {
  const auto dir = scratch("classify");
  const auto r = wgsurf("classify --family zero --phi0 pi/4", dir);
  CHECK(r.code == 0);
  const auto j = nlohmann::json::parse(r.out);
  CHECK(j["kind"] == "Unduloidal");
  CHECK(std::abs(j["period_T"].get<double>() - 6.283185307179586) <= 1e-8);
}

TEST_CASE("config file with flag overrides") {
  const auto dir = scratch("config");
  {
    std::ofstream cfg(dir / "run.cfg");
    cfg << "family = rational:c=1\nepsilon = 1\nphi0 = pi/3\noutput_dir = " << dir.string() << "\n";
  }
  const auto r = wgsurf("classify --config " + (dir / "run.cfg").string() + " --phi0 pi/2", dir);
  CHECK(r.code == 0);
  CHECK(nlohmann::json::parse(r.out)["kind"] == "Cylinder");
}

TEST_CASE("mesh and sweep outputs") {
  const auto dir = scratch("mesh");
  CHECK(wgsurf("mesh --family zero --epsilon -1 --phi0 1 --s-max 3 --segments 8 --output-dir " + dir.string(), dir).code == 0);
  REQUIRE(fs::exists(dir / "surface.obj"));
  const auto obj = slurp(dir / "surface.obj");
  CHECK(obj.find("\nv ") != std::string::npos);
  CHECK(obj.find("\nf ") != std::string::npos);

  const auto pdir = scratch("poincare");
  CHECK(wgsurf("mesh --poincare --family zero --epsilon -1 --phi0 1 --s-max 3 --output-dir " + pdir.string(), pdir).code == 0);
  CHECK(wgsurf("mesh --poincare --family zero --epsilon 1 --phi0 1 --output-dir " + pdir.string(), pdir).code == 1);

  const auto sdir = scratch("sweep");
  CHECK(wgsurf("sweep --family sqrtshift:a=1 --sweep pi/8,3pi/8,5 --output-dir " + sdir.string(), sdir).code == 0);
  const auto csv = slurp(sdir / "sweep.csv");
  CHECK(csv.rfind("phi0,kind,T,T_tilde,t_infinity,decay_rate_b,gate_lhs,gate_rhs\n", 0) == 0);
  CHECK(csv.find("GATE_FAIL") != std::string::npos);
  CHECK(csv.find("Unduloidal") != std::string::npos);

  // every row fails the gate
  CHECK(wgsurf("sweep --family sqrtshift:a=1 --epsilon -1 --sweep 0.5,2,3 --output-dir " + sdir.string(), sdir).code == 3);
}
