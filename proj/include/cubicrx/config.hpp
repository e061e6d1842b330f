#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "cubicrx/montecarlo.hpp"
#include "cubicrx/params.hpp"

namespace cubicrx {

enum class SweepAxis { p_r_dbm, sigma0_sq_dbm, prd };

const char* axis_name(SweepAxis axis);

// Run configuration shared by all commands. Read from flat `key = value`
// files; see README.md for the key list and accepted units.
struct SweepConfig {
  SystemParams base;
  std::optional<double> sigma0_sq;  // overrides the derived ASE variance [W]

  SweepAxis axis = SweepAxis::p_r_dbm;
  std::vector<double> x_values;  // dBm for the power axes, plain numbers for prd

  std::vector<int> orders{3};
  std::vector<std::string> variants{"lp3", "lp3_shot_thermal", "gauss_approx", "mc"};
  std::vector<double> r_l{1e3};  // [Ohm]

  McConfig mc;
  bool analytic_only = false;

  std::string out;
  std::string samples_out;
  bool plot_script = false;
  bool reuse_bit0_law = false;  // evaluate every point with the bit-0 law as bit 1 (diagnostic)

  bool mc_enabled() const;
  // Throws ConfigError.
  void validate() const;
};

// Throws ConfigError with the offending line number.
SweepConfig parse_config(std::istream& is);
SweepConfig load_config(const std::string& path);

// Parses "<number>[unit]" for the given quantity kind: "time", "length",
// "gain", "power", "resistance", "temperature", "inverse_power" or "number".
double parse_quantity(const std::string& text, const std::string& kind);

}  // namespace cubicrx
