#include "doctest.h"

#include <cstdio>
#include <filesystem>
#include <fstream>

#include "config.hpp"
#include "tangle/io.hpp"

using namespace tangle;
using namespace tangle::cli;

namespace {

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE(in.good());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST_CASE("parse the reference escape-map configuration") {
  const std::string text =
      "command=escape-map\n"
      "a=0.2\n"
      "b=0.005\n"
      "c=3\n"
      "d=2\n"
      "gamma=1.41421356\n"
      "n=15\n";
  const RunConfig cfg = parse_config(text, "ref.cfg", {});
  CHECK(cfg.command == Command::kEscapeMap);
  CHECK(cfg.map.a == 0.2);
  CHECK(cfg.map.b == 0.005);
  CHECK(cfg.map.c == 3.0);
  CHECK(cfg.map.d == 2.0);
  CHECK(cfg.map.gamma == doctest::Approx(1.41421356));
  CHECK(cfg.n == 15);
  CHECK(cfg.map.forcing.is_pure_sin());
}

TEST_CASE("gamma <= 1 is a precondition violation") {
  CHECK_THROWS_AS(parse_config("command=escape-map\ngamma=0.9\n", "c", {}),
                  OptionError);
}

TEST_CASE("profile shorthand expands via the alias table") {
  const RunConfig cfg =
      parse_config("command=escape-map\nphi=sin+sin3\nc=1\n", "c", {});
  CHECK(cfg.map.forcing.sin_coeff(1) == 1.0);
  CHECK(cfg.map.forcing.sin_coeff(2) == 0.0);
  CHECK(cfg.map.forcing.sin_coeff(3) == 1.0);
  CHECK_THROWS_AS(parse_config("command=escape-map\nphi=cosine\n", "c", {}),
                  ParseError);
}

TEST_CASE("unknown keys are rejected with the file location") {
  try {
    parse_config("command=escape-map\n# fine\nbogus_key=3\n", "myfile.cfg", {});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    const std::string msg = e.what();
    CHECK(msg.find("myfile.cfg:3") != std::string::npos);
    CHECK(msg.find("bogus_key") != std::string::npos);
  }
}

TEST_CASE("malformed lines carry line numbers") {
  try {
    parse_config("command=orbit\nthis is not a pair\n", "f.cfg", {});
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(std::string(e.what()).find("f.cfg:2") != std::string::npos);
  }
}

TEST_CASE("flags override file values") {
  const RunConfig cfg = parse_config("command=escape-map\na=0.2\nn=15\n", "c",
                                     {"--a", "1.5", "n=25"});
  CHECK(cfg.map.a == 1.5);
  CHECK(cfg.n == 25);
}

TEST_CASE("command can come from a flag token") {
  const RunConfig cfg = parse_config("", "c", {"lyapunov", "--n", "100"});
  CHECK(cfg.command == Command::kLyapunov);
  CHECK(cfg.n == 100);
  CHECK_THROWS_AS(parse_config("", "c", {"no-such-command"}), ParseError);
  CHECK_THROWS_AS(parse_config("a=1\n", "c", {}), ParseError);  // no command
}

TEST_CASE("duplicate keys in the file are rejected") {
  CHECK_THROWS_AS(parse_config("command=orbit\na=1\na=2\n", "c", {}), ParseError);
}

TEST_CASE("execute: escape-map artifacts, headers, and exit code") {
  namespace fs = std::filesystem;
  const std::string base = (fs::temp_directory_path() / "tangle_test_em").string();
  const std::string cfgfile = base + ".in";
  atomic_write(cfgfile,
               "command=escape-map\na=0.2\nb=0.005\nc=3\nd=2\n"
               "gamma=1.4142135623730951\nn=15\ntheta_res=120\nz_res=120\n");

  const std::string cmd =
      std::string(TANGLE_CLI_PATH) + " --config " + cfgfile + " out=" + base;
  CHECK(std::system(cmd.c_str()) == 0);

  const std::string csv = slurp(base + ".csv");
  CHECK(csv.rfind("# tangle", 0) == 0);
  CHECK(csv.find("config=") != std::string::npos);
  CHECK(csv.find("theta,z,escape_iter") != std::string::npos);
  const std::string echo = slurp(base + ".config");
  CHECK(echo.find("command = escape-map") != std::string::npos);
  const std::string json = slurp(base + ".json");
  CHECK(json.find("full-escape") != std::string::npos);
}

TEST_CASE("execute: byte-identical artifacts across thread counts") {
  namespace fs = std::filesystem;
  const std::string b1 = (fs::temp_directory_path() / "tangle_thr1" / "run").string();
  const std::string b4 = (fs::temp_directory_path() / "tangle_thr4" / "run").string();
  const std::string args =
      " escape-map a=1.5 b=0.005 c=3 d=2 gamma=1.4142135623730951 n=30"
      " theta_res=90 z_res=90";
  CHECK(std::system((std::string(TANGLE_CLI_PATH) + args + " threads=1 out=" + b1).c_str()) == 0);
  CHECK(std::system((std::string(TANGLE_CLI_PATH) + args + " threads=4 out=" + b4).c_str()) == 0);
  CHECK(slurp(b1 + ".csv") == slurp(b4 + ".csv"));
  CHECK(slurp(b1 + ".json") == slurp(b4 + ".json"));
}

TEST_CASE("execute: parse and precondition exit codes") {
  const int parse_rc =
      std::system((std::string(TANGLE_CLI_PATH) + " escape-map bogus=1 2>/dev/null").c_str());
  CHECK(WEXITSTATUS(parse_rc) == kExitParseError);
  const int pre_rc =
      std::system((std::string(TANGLE_CLI_PATH) + " escape-map gamma=0.9 2>/dev/null").c_str());
  CHECK(WEXITSTATUS(pre_rc) == kExitPrecondition);
}

TEST_CASE("execute: fixed-points finds the Fig. 9 sink") {
  namespace fs = std::filesystem;
  const std::string base = (fs::temp_directory_path() / "tangle_fp9").string();
  const std::string cmd = std::string(TANGLE_CLI_PATH) +
                          " fixed-points a=2 b=0.005 c=3 d=2"
                          " gamma=1.4142135623730951 m_min=0 m_max=0 out=" +
                          base;
  CHECK(std::system(cmd.c_str()) == 0);
  const std::string json = slurp(base + ".json");
  CHECK(json.find("\"kind\": \"sink\"") != std::string::npos);
  CHECK(json.find("\"kind\": \"saddle\"") != std::string::npos);
}

TEST_CASE("execute: attractor in the full-escape regime exits 1") {
  namespace fs = std::filesystem;
  const std::string base = (fs::temp_directory_path() / "tangle_esc").string();
  const int rc = std::system((std::string(TANGLE_CLI_PATH) +
                              " attractor a=0.2 b=0.005 c=3 d=2"
                              " gamma=1.4142135623730951 burn_in=20 keep=5"
                              " seeds=100 out=" +
                              base)
                                 .c_str());
  CHECK(WEXITSTATUS(rc) == kExitAnalysisNegative);
  CHECK(slurp(base + ".json").find("all-escaped") != std::string::npos);
}

TEST_CASE("execute: certify, scan, tangency, lyapunov, orbit paths") {
  namespace fs = std::filesystem;
  const std::string base = (fs::temp_directory_path() / "tangle_smoke").string();

  // certify (theorem regime, light sampling)
  const std::string cert =
      " certify a=0.5 b=1e-4 c=3 d=200 gamma=1.4142135623730951 k=1e-9"
      " samples_theta=200 samples_z=40 vf_samples=500";
  CHECK(std::system((std::string(TANGLE_CLI_PATH) + cert + " out=" + base + "_cert").c_str()) == 0);
  CHECK(slurp(base + "_cert.json").find("certified") != std::string::npos);

  // scan (few steps)
  const std::string scan =
      " scan a_min=0 a_max=6.283185307179586 steps=4 b=1e-4 c=3 d=200"
      " gamma=1.4142135623730951 k=1e-9 samples_theta=200 samples_z=40"
      " vf_samples=500 threads=2";
  CHECK(std::system((std::string(TANGLE_CLI_PATH) + scan + " out=" + base + "_scan").c_str()) == 0);
  CHECK(slurp(base + "_scan.csv").find("a,certified,fold_margin") != std::string::npos);

  // tangency (auto bracket must be provided; use a known-good one)
  const std::string tang =
      " tangency b=0.005 c=3 d=20 gamma=1.4142135623730951"
      " a_min=6.7 a_max=7.2";
  const int rc = std::system(
      (std::string(TANGLE_CLI_PATH) + tang + " out=" + base + "_tan").c_str());
  CHECK(WEXITSTATUS(rc) == 0);
  CHECK(slurp(base + "_tan.json").find("a_star") != std::string::npos);

  // lyapunov on a converged chaotic seed
  const std::string lyap =
      " lyapunov a=1.5 b=0.005 c=3 d=2 gamma=1.4142135623730951"
      " theta0=0.96 z0=0.02 n=20000";
  CHECK(std::system((std::string(TANGLE_CLI_PATH) + lyap + " out=" + base + "_ly").c_str()) == 0);

  // orbit trace
  const std::string orb =
      " orbit a=2 b=0.005 c=3 d=2 gamma=1.4142135623730951 theta0=0.3"
      " z0=0.01 n=50";
  CHECK(std::system((std::string(TANGLE_CLI_PATH) + orb + " out=" + base + "_orb").c_str()) == 0);
  CHECK(slurp(base + "_orb.csv").find("iter,theta,z") != std::string::npos);
}

TEST_CASE("execute: melnikov and validate paths") {
  namespace fs = std::filesystem;
  const std::string base = (fs::temp_directory_path() / "tangle_mel").string();
  const std::string mel = " melnikov system=engineered-loop alpha=1.5 beta=1"
                          " omega=2 mu=1e-5 epsilon=0.05 rho=auto";
  CHECK(std::system((std::string(TANGLE_CLI_PATH) + mel + " out=" + base).c_str()) == 0);
  const std::string json = slurp(base + ".json");
  CHECK(json.find("derived_map") != std::string::npos);
  CHECK(slurp(base + ".orbit.csv").find("s,x,y,u,v,E,H") != std::string::npos);
  CHECK(slurp(base + ".map.config").find("gamma = 1.5") != std::string::npos);

  const std::string val = " validate system=engineered-loop alpha=1.5 beta=1"
                          " omega=2 mu=1e-4 epsilon=0.05 rho=auto"
                          " samples_theta=4 samples_z=2 threads=2";
  CHECK(std::system((std::string(TANGLE_CLI_PATH) + val + " out=" + base + "_val").c_str()) == 0);
  CHECK(slurp(base + "_val.json").find("agreement_rate") != std::string::npos);
}
