#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"

namespace fs = std::filesystem;

namespace {

struct Scratch {
  fs::path dir;
  Scratch() {
    dir = fs::temp_directory_path() / ("cubicrx_cli_" + std::to_string(::getpid()));
    fs::create_directories(dir);
  }
  ~Scratch() { fs::remove_all(dir); }
  std::string path(const std::string& name) const { return (dir / name).string(); }
  std::string write(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
    return path(name);
  }
};

struct Run {
  int code;
  std::string out;
};

Run run(const Scratch& s, const std::string& args) {
  const std::string out = s.path("stdout.txt");
  const std::string cmd = std::string(CUBICRX_CLI_PATH) + " " + args + " > " + out + " 2> " + s.path("stderr.txt");
  const int status = std::system(cmd.c_str());
  std::ifstream in(out);
  std::stringstream ss;
  ss << in.rdbuf();
  return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> v;
  std::istringstream is(text);
  for (std::string l; std::getline(is, l);) v.push_back(l);
  return v;
}

double field(const std::string& line, int index) {
  std::istringstream is(line);
  std::string cell;
  for (int i = 0; i <= index; ++i) std::getline(is, cell, ',');
  return std::stod(cell);
}

}  // namespace

TEST_CASE("fit from moments") {
  Scratch s;
  const auto r = run(s, "fit --moments 1.234568 1.5625 2.040816");
  CHECK(r.code == 0);
  double alpha = 0, beta = 0, gamma = 1;
  for (const auto& l : lines(r.out))
    if (l.rfind("lp3 ", 0) == 0) std::sscanf(l.c_str(), "lp3 alpha=%lf beta=%lf gamma=%lf", &alpha, &beta, &gamma);
  CHECK(alpha == doctest::Approx(2.0).epsilon(1e-4));
  CHECK(beta == doctest::Approx(0.1).epsilon(1e-4));
  CHECK(std::abs(gamma) < 1e-4);

  CHECK(run(s, "fit --moments 1.0 0.5 1.0").code == 3);
  CHECK(run(s, "fit --moments 1.0 2.0").code == 2);
  CHECK(run(s, "frobnicate").code == 2);
}

TEST_CASE("config errors exit with code 2") {
  Scratch s;
  CHECK(run(s, "ber-sweep --config " + s.write("bad.cfg", "tua_c = 100fs\n")).code == 2);
  CHECK(run(s, "ber-sweep --config " + s.path("missing.cfg")).code == 2);
  CHECK(run(s, "mc-validate --config " + s.write("few.cfg", "prd = 10\n") + " --trials 10").code == 2);
}

TEST_CASE("sweep output format") {
  Scratch s;
  const auto cfg = s.write("sweep.cfg",
                           "prd = 50\n"
                           "sweep_values = 30, 33, 36\n"
                           "variants = lp3, gauss_approx\n");
  const auto out = s.path("sweep.csv");
  REQUIRE(run(s, "ber-sweep --analytic-only --config " + cfg + " --out " + out).code == 0);
  const auto l = lines(slurp(out));
  REQUIRE(l.size() == 8);
  CHECK(l[0] == "# schema=1");
  CHECK(l[1] == "x_value,x_kind,prd,rl_ohm,variant,th_opt,ber,error");
  for (std::size_t i = 2; i < l.size(); ++i) {
    const double ber = field(l[i], 6);
    CHECK(ber > 0.0);
    CHECK(ber < 0.5);
  }
  // Sorted by x, then variant.
  CHECK(l[2].find(",gauss_approx,") != std::string::npos);
  CHECK(l[3].find(",lp3,") != std::string::npos);
  CHECK(field(l[7], 0) == 36.0);
}

TEST_CASE("identical laws give one half everywhere") {
  Scratch s;
  const auto cfg = s.write("same.cfg",
                           "sweep_values = 30, 34\n"
                           "variants = lp3, lp3_shot_thermal, gauss_approx\n"
                           "analytic_only = true\n"
                           "reuse_bit0_law = true\n");
  const auto r = run(s, "ber-sweep --config " + cfg);
  REQUIRE(r.code == 0);
  const auto l = lines(r.out);
  REQUIRE(l.size() == 8);
  for (std::size_t i = 2; i < l.size(); ++i) CHECK(field(l[i], 6) == doctest::Approx(0.5));
}

TEST_CASE("noiseless validation passes and is reproducible") {
  Scratch s;
  const auto cfg = s.write("quiet.cfg",
                           "prd = 50\n"
                           "sigma0_sq = 0W\n"
                           "sweep_values = 30, 35\n"
                           "trials = 1000\n");
  const auto out = s.path("quiet.csv");
  CHECK(run(s, "mc-validate --config " + cfg + " --out " + out).code == 0);
  const auto text = slurp(out);
  CHECK(text.rfind("# schema=1\n", 0) == 0);
  CHECK(text.find("# result=pass") != std::string::npos);

  const auto noisy = s.write("noisy.cfg", "prd = 10\nsweep_values = 33\n");
  const auto a = s.path("a.csv"), b = s.path("b.csv");
  run(s, "mc-validate --config " + noisy + " --trials 2000 --seed 9 --out " + a);
  run(s, "mc-validate --config " + noisy + " --trials 2000 --seed 9 --out " + b);
  const auto ta = slurp(a);
  CHECK(!ta.empty());
  CHECK(ta == slurp(b));
  run(s, "mc-validate --config " + noisy + " --trials 2000 --seed 10 --out " + b);
  CHECK(ta != slurp(b));
}

TEST_CASE("validation samples feed the fit command") {
  Scratch s;
  const auto cfg = s.write("table.cfg", "prd = 50\np_r = 35dBm\n");
  const auto samples = s.path("samples.csv");
  const auto report = s.path("report.csv");
  const int code = run(s, "mc-validate --config " + cfg + " --trials 250000 --seed 3 --samples-out " + samples +
                              " --out " + report)
                       .code;
  CHECK((code == 0 || code == 4));
  REQUIRE(fs::exists(samples));
  const auto r = run(s, "fit --samples " + samples + " --order 3 --bit 1");
  REQUIRE(r.code == 0);
  double ks = 1.0;
  for (const auto& l : lines(r.out))
    if (l.rfind("ks = ", 0) == 0) ks = std::stod(l.substr(5));
  CHECK(ks < 0.01);

  const auto g = run(s, "gof --samples " + samples + " --order 3 --bit 1");
  REQUIRE(g.code == 0);
  const auto gl = lines(g.out);
  REQUIRE(gl.size() == 7);
  CHECK(gl[1] == "distribution,ks,ks_rank,ad,ad_rank,chi2,chi2_rank");
  for (const auto& l : gl)
    if (l.rfind("log_pearson3,", 0) == 0) CHECK(field(l, 2) == 1.0);
}
