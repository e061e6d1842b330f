#include <cmath>
#include <sstream>

#include "cubicrx/config.hpp"
#include "cubicrx/errors.hpp"
#include "doctest.h"

using namespace cubicrx;

namespace {

SweepConfig parse(const std::string& text) {
  std::istringstream is(text);
  return parse_config(is);
}

}  // namespace

TEST_CASE("quantities with units") {
  CHECK(parse_quantity("100fs", "time") == doctest::Approx(100e-15));
  CHECK(parse_quantity("1.55 um", "length") == doctest::Approx(1.55e-6));
  CHECK(parse_quantity("50dB", "gain") == doctest::Approx(1e5));
  CHECK(parse_quantity("35dBm", "power") == doctest::Approx(std::pow(10.0, 0.5)));
  CHECK(parse_quantity("2 mW", "power") == doctest::Approx(2e-3));
  CHECK(parse_quantity("1kohm", "resistance") == doctest::Approx(1e3));
  CHECK(parse_quantity("300K", "temperature") == doctest::Approx(300.0));
  CHECK(parse_quantity("1e-3", "number") == doctest::Approx(1e-3));
  CHECK_THROWS_AS(parse_quantity("3 parsecs", "length"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("abc", "number"), ConfigError);
  CHECK_THROWS_AS(parse_quantity("10dB", "power"), ConfigError);
}

TEST_CASE("defaults and a single point") {
  const auto cfg = parse("# nothing but a comment\n\n");
  REQUIRE(cfg.x_values.size() == 1);
  CHECK(cfg.x_values[0] == doctest::Approx(35.0));
  CHECK(cfg.axis == SweepAxis::p_r_dbm);
  CHECK(cfg.mc_enabled());
}

TEST_CASE("full sweep description") {
  const auto cfg = parse(
      "tau_c = 100fs\n"
      "prd = 25\n"
      "lambda = 1550nm\n"
      "g_amp = 50dB  # linear 1e5\n"
      "p_r = 33dBm\n"
      "r_l = 100ohm, 1kohm, 10kohm\n"
      "sweep = p_r_dbm\n"
      "sweep_start = 30\n"
      "sweep_stop = 32\n"
      "sweep_step = 0.5\n"
      "orders = 1, 3\n"
      "variants = lp3, mc\n"
      "trials = 5000\n"
      "seed = 42\n"
      "analytic_only = false\n"
      "out = sweep.csv\n");
  CHECK(cfg.base.prd == 25.0);
  CHECK(cfg.base.lambda == doctest::Approx(1.55e-6));
  CHECK(cfg.base.g_amp == doctest::Approx(1e5));
  CHECK(cfg.r_l.size() == 3);
  CHECK(cfg.r_l[2] == doctest::Approx(1e4));
  REQUIRE(cfg.x_values.size() == 5);
  CHECK(cfg.x_values.back() == doctest::Approx(32.0));
  CHECK(cfg.orders == std::vector<int>{1, 3});
  CHECK(cfg.variants == std::vector<std::string>{"lp3", "mc"});
  CHECK(cfg.mc.trials == 5000);
  CHECK(cfg.mc.seed == 42);
  CHECK(cfg.out == "sweep.csv");
}

TEST_CASE("other sweep axes") {
  const auto prd = parse("sweep = prd\nsweep_values = 10, 25, 50\n");
  CHECK(prd.axis == SweepAxis::prd);
  CHECK(prd.x_values == std::vector<double>{10, 25, 50});
  const auto ase = parse("sweep = sigma0_sq_dbm\nsweep_values = -20dBm, -10dBm\n");
  CHECK(ase.x_values == std::vector<double>{-20, -10});
  CHECK(std::string(axis_name(SweepAxis::sigma0_sq_dbm)) == "sigma0_sq_dbm");
}

TEST_CASE("rejected configurations") {
  CHECK_THROWS_AS(parse("tua_c = 100fs\n"), ConfigError);
  CHECK_THROWS_WITH_AS(parse("prd = 10\nprd = 20\n"), doctest::Contains("line 2"), ConfigError);
  CHECK_THROWS_AS(parse("prd\n"), ConfigError);
  CHECK_THROWS_AS(parse("prd = \n"), ConfigError);
  CHECK_THROWS_AS(parse("prd = -1\n"), ConfigError);
  CHECK_THROWS_AS(parse("trials = 10\n"), ConfigError);
  CHECK_NOTHROW(parse("trials = 10\nanalytic_only = true\n"));
  CHECK_THROWS_AS(parse("orders = 4\n"), ConfigError);
  CHECK_THROWS_AS(parse("variants = lp3, magic\n"), ConfigError);
  CHECK_THROWS_AS(parse("r_l = 0ohm\n"), ConfigError);
  CHECK_THROWS_AS(parse("sweep_start = 30\nsweep_stop = 32\n"), ConfigError);
  CHECK_THROWS_AS(parse("sweep_start = 30\nsweep_stop = 32\nsweep_step = 0\n"), ConfigError);
  CHECK_THROWS_AS(parse("sweep_start = 32\nsweep_stop = 30\nsweep_step = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("sweep_values = 30\nsweep_step = 1\n"), ConfigError);
  CHECK_THROWS_AS(parse("sweep = frequency\n"), ConfigError);
  CHECK_THROWS_AS(parse("oversample = 4\n"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/config.cfg"), ConfigError);
}
