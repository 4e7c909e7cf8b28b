#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "xipsi/cli.hpp"
#include "xipsi/families.hpp"
#include "xipsi/gridcop.hpp"

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int code = xipsi::cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / "xipsi_cli_test";
  fs::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("measures from descriptors") {
  auto r = run({"measures", R"({"family":"frechet","w_pi":0.5,"w_m":0.5})"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["xi"].get<double>() == doctest::Approx(0.25));
  CHECK(j["psi"].get<double>() == doctest::Approx(0.5));
  CHECK(j["method"] == "exact");
  CHECK(j.contains("tau"));
  CHECK(j.contains("n"));

  r = run({"measures", R"({"family":"checkerboard","delta":[[0,0.5],[0.5,0]]})"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["xi"].get<double>() == 0.5);
  CHECK(j["psi"].get<double>() == -0.5);

  r = run({"measures", R"({"family":"clayton","theta":2})", "--n", "50"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["n"] == 50);

  r = run({"measures", R"({"family":"strip_path","mu":1.265})", "--tol", "1e-5"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["method"] == "quadrature");
}

TEST_CASE("measures from a grid file") {
  const auto path = scratch("pi.csv");
  {
    std::ofstream os(path);
    xipsi::gridcop::write_csv(os, xipsi::gridcop::grid_from_partial([](double, double v) { return v; }, 100));
  }
  const auto r = run({"measures", path.string()});
  REQUIRE(r.code == 0);
  const auto j = json::parse(r.out);
  CHECK(std::abs(j["xi"].get<double>()) < 1e-3);
  CHECK(std::abs(j["psi"].get<double>()) < 1e-3);
  CHECK(std::abs(j["tau"].get<double>()) < 0.05);
  CHECK(j["method"] == "grid");
  CHECK(j["n"] == 100);
}

TEST_CASE("exit codes") {
  CHECK(run({"measures", "{not json"}).code == 2);
  CHECK(run({"measures", R"({"family":"unknown"})"}).code == 2);
  CHECK(run({"measures", R"({"family":"cdown","mu":3})"}).code == 2);
  CHECK(run({"measures", R"({"family":"checkerboard","delta":[[0.5,0.5],[0,0]]})"}).code == 3);
  CHECK(run({"measures", "/nonexistent/file.json"}).code == 2);
  CHECK(run({"bogus"}).code == 2);
  CHECK(run({}).code == 2);
  CHECK(run({"measures", R"({"family":"frechet"})", "--n", "8"}).code == 2);
  const auto infeasible = scratch("bad.csv");
  {
    std::ofstream os(infeasible);
    os << "# gridcop n=4\n1,1,1,1\n1,1,1,1\n1,1,1,1\n1,1,1,1\n";
  }
  CHECK(run({"measures", infeasible.string()}).code == 3);
  CHECK(run({"--help"}).code == 0);
}

TEST_CASE("boundary export") {
  const auto path = scratch("upper.csv");
  auto r = run({"boundary", "upper", "--samples", "3", "--out", path.string()});
  REQUIRE(r.code == 0);
  std::ifstream in(path);
  std::stringstream ss;
  ss << in.rdbuf();
  CHECK(ss.str() == "param,xi,psi\n0,0,0\n0.5,0.25,0.5\n1,1,1\n");

  r = run({"boundary", "jensen", "--samples", "2"});
  REQUIRE(r.code == 0);
  CHECK(r.out.find("2,0.317766166719343,-0.5") != std::string::npos);
  CHECK(run({"boundary", "nope"}).code == 2);
}

TEST_CASE("region check") {
  auto r = run({"region-check", "0.25", "0.5"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["in_upper"] == true);
  CHECK(j["upper_margin"].get<double>() == 0.0);
  r = run({"region-check", "0.1", "0.5"});
  CHECK(json::parse(r.out)["in_upper"] == false);
  r = run({"region-check", "--", "0.5", "-0.5"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(j["in_lower_bound"] == true);
  CHECK(j["lower_margin"].get<double>() == doctest::Approx(0.182).epsilon(2e-3));
  CHECK(run({"region-check", "2", "0"}).code == 2);
}

TEST_CASE("optimize writes its artefacts") {
  const auto prefix = scratch("qp").string();
  auto r = run({"optimize", "--mu", "0", "--n", "32", "--out", prefix});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(std::abs(j["xi"].get<double>()) < 1e-2);
  CHECK(std::abs(j["psi"].get<double>()) < 1e-2);
  for (const char* suffix : {"_h.csv", "_log.csv", "_density.pgm", "_density.json", "_density.csv", "_summary.json"})
    CHECK(fs::exists(prefix + suffix));
  std::ifstream pgm(prefix + "_density.pgm");
  std::string magic;
  int w = 0, h = 0, mx = 0;
  pgm >> magic >> w >> h >> mx;
  CHECK(magic == "P2");
  CHECK(w == 32);
  CHECK(h == 32);
  CHECK(mx == 255);

  r = run({"optimize", "--mu", "1", "--n", "64"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  const auto cd = xipsi::families::cdown_measures(1.0);
  CHECK(j["xi"].get<double>() + j["psi"].get<double>() >= cd.xi + cd.psi - 10.0 / 64);

  CHECK(run({"optimize", "--n", "32"}).code == 2);
  CHECK(run({"optimize", "--mu", "-1", "--n", "32"}).code == 2);
}

TEST_CASE("config file precedence") {
  const auto cfg = scratch("cfg.json");
  {
    std::ofstream os(cfg);
    os << R"({"grid_n": 40, "mu": 0.5})";
  }
  auto r = run({"optimize", "--config", cfg.string()});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["n"] == 40);
  CHECK(j["mu"] == 0.5);
  r = run({"optimize", "--config", cfg.string(), "--n", "24"});
  REQUIRE(r.code == 0);
  CHECK(json::parse(r.out)["n"] == 24);

  const auto bad = scratch("bad_cfg.json");
  {
    std::ofstream os(bad);
    os << R"({"gridn": 40})";
  }
  CHECK(run({"optimize", "--config", bad.string()}).code == 2);
}

TEST_CASE("twoparam") {
  auto r = run({"twoparam", "--alpha", "0.2", "--beta", "0.3"});
  REQUIRE(r.code == 0);
  auto j = json::parse(r.out);
  CHECK(j["slope"].get<double>() == doctest::Approx(0.7 / 0.6));
  r = run({"twoparam", "--mu", "1.265"});
  REQUIRE(r.code == 0);
  j = json::parse(r.out);
  CHECK(std::abs(j["xi"].get<double>() - 0.135) < 5e-3);
  CHECK(std::abs(j["psi"].get<double>() + 0.328) < 5e-3);
  const auto prefix = scratch("strip").string();
  r = run({"twoparam", "--mu", "2", "--n", "20", "--out", prefix, "--format", "csv"});
  REQUIRE(r.code == 0);
  CHECK(fs::exists(prefix + "_density.csv"));
  CHECK(run({"twoparam", "--alpha", "0.2"}).code == 2);
  CHECK(run({"twoparam", "--alpha", "0.6", "--beta", "0.1"}).code == 2);
}

TEST_CASE("deterministic output across thread counts") {
  const auto a = run({"optimize", "--mu", "1.5", "--n", "24", "--threads", "1"});
  const auto b = run({"optimize", "--mu", "1.5", "--n", "24", "--threads", "4"});
  CHECK(a.out == b.out);
}
