#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

#include "doctest.h"
#include "json.hpp"

namespace fs = std::filesystem;

namespace {

struct Sandbox {
  fs::path dir;
  Sandbox() {
    dir = fs::temp_directory_path() / ("tmlab_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Sandbox() {
    std::error_code ec;
    fs::remove_all(dir, ec);
  }
  std::string path(const std::string& name) const { return (dir / name).string(); }
};

int runCli(const std::string& args) {
  std::string cmd = std::string("\"") + TMLAB_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  int st = std::system(cmd.c_str());
  return WIFEXITED(st) ? WEXITSTATUS(st) : -1;
}

std::vector<std::string> lines(const std::string& file) {
  std::ifstream f(file);
  std::vector<std::string> out;
  for (std::string l; std::getline(f, l);) {
    if (!l.empty() && l.back() == '\r') l.pop_back();
    out.push_back(l);
  }
  return out;
}

nlohmann::json readJson(const std::string& file) {
  std::ifstream f(file);
  return nlohmann::json::parse(f);
}

}  // namespace

TEST_CASE("cli complexity table and manifest") {
  Sandbox sb;
  auto out = sb.path("p.csv");
  REQUIRE(runCli("complexity --max-n 64 --out " + out) == 0);
  auto rows = lines(out);
  REQUIRE(rows.size() == 65);
  CHECK(rows[0] == "n,p,formula,match");
  CHECK(rows[3] == "3,6,6,1");
  for (std::size_t i = 1; i < rows.size(); ++i) CHECK(rows[i].back() == '1');
  auto m = readJson(out + ".manifest.json");
  CHECK(m["subcommand"] == "complexity");
  CHECK(m["parameters"]["max-n"] == "64");
  CHECK(m["version"].is_string());
  CHECK(m["language_hash"].get<std::string>().size() == 16);
  CHECK(m.contains("wall_time_s"));
  CHECK(m.contains("tolerances"));
}

TEST_CASE("cli usage errors") {
  Sandbox sb;
  CHECK(runCli("") == 1);
  CHECK(runCli("complexity --no-such-flag") == 1);
  CHECK(runCli("pressure --gamma-grid 3:1:0.5 --out " + sb.path("x.csv")) == 1);
  CHECK(runCli("accidents --point garbage --out " + sb.path("x.csv")) == 1);
  CHECK(runCli("pi-code --word 1") == 1);
  CHECK(runCli("--help") == 0);
}

TEST_CASE("cli config merge: flags win") {
  Sandbox sb;
  auto cfg = sb.path("cfg.json");
  std::ofstream(cfg) << R"({"max-n": 10, "seed": 3})";
  auto out = sb.path("c.csv");
  REQUIRE(runCli("complexity --config " + cfg + " --out " + out) == 0);
  CHECK(lines(out).size() == 11);
  REQUIRE(runCli("complexity --config " + cfg + " --max-n 5 --out " + out) == 0);
  CHECK(lines(out).size() == 6);
  CHECK(readJson(out + ".manifest.json")["parameters"]["seed"] == "3");
  std::ofstream(cfg) << "[1,2]";
  CHECK(runCli("complexity --config " + cfg) == 1);
}

TEST_CASE("cli transition bracket") {
  Sandbox sb;
  auto out = sb.path("t.json");
  REQUIRE(runCli("transition --a 0.5 --gamma-max 400 --nmax 64 --out " + out) == 0);
  auto j = readJson(out);
  REQUIRE(j["found"] == true);
  double lo = j["gamma_1_lo"], hi = j["gamma_1_hi"];
  CHECK(lo < hi);
  CHECK(hi - lo <= 1e-4);
  CHECK(lo > 1.4);
  CHECK(hi < 1.5);
  CHECK(hi <= j["gamma_0"].get<double>());
}

TEST_CASE("cli pressure curve for V_u") {
  Sandbox sb;
  auto out = sb.path("v.csv");
  REQUIRE(runCli("pressure --potential vu --alpha -1 --gamma-grid 0:20:0.5 --out " + out) == 0);
  auto rows = lines(out);
  REQUIRE(rows.size() == 42);
  CHECK(rows[0].rfind("gamma,z_star,z_c,pressure", 0) == 0);
  // P = max(log 2 - gamma, 0): positive at 0 and 0.5, zero from 1 on.
  auto pressureOf = [&](std::size_t i) {
    std::stringstream ss(rows[i]);
    std::string cell;
    for (int c = 0; c < 4; ++c) std::getline(ss, cell, ',');
    return std::stod(cell);
  };
  CHECK(pressureOf(1) == doctest::Approx(std::log(2.0)));
  CHECK(pressureOf(2) == doctest::Approx(std::log(2.0) - 0.5));
  CHECK(pressureOf(3) == 0.0);
  auto m = readJson(out + ".manifest.json");
  CHECK(m["results"]["transition"].is_array());
}

TEST_CASE("cli validation failure exits 2") {
  Sandbox sb;
  // Depth 12 is too coarse for the eigenvalue tolerance.
  CHECK(runCli("interval-map --depth 12 --out " + sb.path("m.csv")) == 2);
  CHECK(readJson(sb.path("m.csv") + ".manifest.json")["validation"] != "ok");
}

TEST_CASE("cli point syntax") {
  Sandbox sb;
  auto out = sb.path("r.csv");
  CHECK(runCli("renorm --potential uc --c 1 --point \"1[rho1+5]\" --out " + out) == 0);
  CHECK(runCli("accidents --point \"0110(01)\" --horizon 40 --out " + out) == 0);
  CHECK(lines(out)[0] == "time,b,d_before,d_after,bispecial,gap_form,not_special,b_bound");
  CHECK(runCli("vu-check --samples 100 --out " + out) == 0);
  CHECK(lines(out)[2] == "1,1,0,1");
  CHECK(lines(out)[4] == "3,2,-1,2");
}
