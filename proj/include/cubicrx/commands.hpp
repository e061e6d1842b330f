#pragma once

#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "cubicrx/config.hpp"
#include "cubicrx/gof.hpp"
#include "cubicrx/lp3.hpp"
#include "cubicrx/montecarlo.hpp"

namespace cubicrx {

struct SweepRow {
  double x_value = 0.0;
  std::string x_kind;
  double prd = 0.0;
  double rl_ohm = 0.0;
  std::string variant;
  double th_opt = 0.0;
  double ber = 0.0;
  std::string error;  // empty on success
};

// Variant labels: lp3, lp3_shot_thermal, gauss_approx and mc refer to the
// cubic receiver; gauss_approx_order1, mc_order1 and mc_order2 to the
// power-linear and power-quadratic receivers. Per-point failures are kept as
// rows with nan values and a message.
std::vector<SweepRow> run_ber_sweep(const SweepConfig& cfg);

// x_value,x_kind,prd,rl_ohm,variant,th_opt,ber,error after a schema line.
void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows);

// Standalone matplotlib script that plots BER against the sweep axis.
std::string plot_script(const std::string& csv_path);

struct FitOutcome {
  MomentTriple input;
  Lp3Params params;
  MomentTriple reproduced;
  std::optional<double> ks;  // against the samples the moments came from
};

FitOutcome run_fit(const MomentTriple& moments);
FitOutcome run_fit(std::span<const double> samples);
void print_fit(std::ostream& os, const FitOutcome& fit);

struct MomentCheck {
  double x_value = 0.0;
  double prd = 0.0;
  int bit = 0;
  int order = 1;  // raw moment order
  double closed_form = 0.0;
  double monte_carlo = 0.0;
  double std_error = 0.0;
  double rel_diff = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct ValidationReport {
  std::string x_kind;
  std::vector<MomentCheck> moments;
  std::optional<GofReport> gof;  // cubic bit-1 samples of the first point
  std::string gof_note;
  std::vector<SampleSet> samples;  // cubic samples of the first point
  bool pass = true;
};

// Relative tolerances on the first three raw moments of the cubic receiver.
inline constexpr double kMomentTolerance[3] = {0.03, 0.05, 0.10};
// Noiseless samples are deterministic; only quadrature error remains.
inline constexpr double kNoiselessTolerance = 0.005;

ValidationReport run_mc_validate(const SweepConfig& cfg);
void write_validation_report(std::ostream& os, const ValidationReport& report);

}  // namespace cubicrx
