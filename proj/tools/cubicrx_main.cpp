#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "cubicrx/commands.hpp"
#include "cubicrx/config.hpp"
#include "cubicrx/errors.hpp"
#include "cubicrx/moments.hpp"

namespace {

enum ExitCode : int { kOk = 0, kConfig = 2, kNumerical = 3, kTolerance = 4 };

struct CommonFlags {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<std::size_t> trials;
  bool analytic_only = false;
};

void add_common(CLI::App* cmd, CommonFlags& f) {
  cmd->add_option("--config", f.config, "configuration file (key = value lines)");
  cmd->add_option("--out", f.out, "output path (default: stdout)");
  cmd->add_option("--seed", f.seed, "Monte-Carlo master seed");
  cmd->add_option("--trials", f.trials, "Monte-Carlo trials per sample set");
  cmd->add_flag("--analytic-only", f.analytic_only, "skip Monte-Carlo variants");
}

cubicrx::SweepConfig resolve(const CommonFlags& f) {
  cubicrx::SweepConfig cfg;
  if (!f.config.empty()) {
    cfg = cubicrx::load_config(f.config);
  } else {
    std::istringstream empty;
    cfg = cubicrx::parse_config(empty);
  }
  if (f.seed) cfg.mc.seed = *f.seed;
  if (f.trials) cfg.mc.trials = *f.trials;
  if (f.analytic_only) cfg.analytic_only = true;
  if (!f.out.empty()) cfg.out = f.out;
  cfg.validate();
  return cfg;
}

// Writes through `emit` to the configured path, or stdout when none is set.
template <class Emit>
void write_output(const std::string& path, Emit&& emit) {
  if (path.empty()) {
    emit(std::cout);
    return;
  }
  std::ofstream os(path);
  if (!os) throw cubicrx::ConfigError("cannot open output file " + path);
  emit(os);
  if (!os) throw cubicrx::ConfigError("failed writing " + path);
}

std::vector<double> read_sample_values(const std::string& path, int order, int bit) {
  std::ifstream in(path);
  if (!in) throw cubicrx::ConfigError("cannot open sample file " + path);
  for (auto& s : cubicrx::read_samples_csv(in))
    if (static_cast<int>(s.order) == order && s.bit == bit) return std::move(s.values);
  throw cubicrx::ConfigError("sample file has no samples for order " + std::to_string(order) + ", bit " +
                             std::to_string(bit));
}

int cmd_ber_sweep(const CommonFlags& f) {
  const auto cfg = resolve(f);
  const auto rows = cubicrx::run_ber_sweep(cfg);
  write_output(cfg.out, [&](std::ostream& os) { cubicrx::write_sweep_csv(os, rows); });
  if (cfg.plot_script && !cfg.out.empty())
    write_output(cfg.out + ".plot.py", [&](std::ostream& os) { os << cubicrx::plot_script(cfg.out); });
  std::size_t failed = 0;
  for (const auto& r : rows)
    if (!r.error.empty()) ++failed;
  if (failed) {
    std::cerr << "ber-sweep: " << failed << " of " << rows.size() << " points failed numerically\n";
    return kNumerical;
  }
  return kOk;
}

int cmd_fit(const CommonFlags& f, const std::vector<double>& moments, const std::string& samples, int order,
            int bit) {
  cubicrx::FitOutcome fit;
  if (!moments.empty()) {
    fit = cubicrx::run_fit(cubicrx::MomentTriple{moments[0], moments[1], moments[2], bit});
  } else if (!samples.empty()) {
    fit = cubicrx::run_fit(read_sample_values(samples, order, bit));
  } else {
    const auto cfg = resolve(f);
    const auto dp = cubicrx::derive(cfg.base);
    auto dp_eff = dp;
    if (cfg.sigma0_sq) dp_eff.sigma0_sq = *cfg.sigma0_sq;
    fit = cubicrx::run_fit(cubicrx::decision_moments(cfg.base, dp_eff, bit));
  }
  write_output(f.out, [&](std::ostream& os) { cubicrx::print_fit(os, fit); });
  return kOk;
}

int cmd_gof(const CommonFlags& f, const std::string& samples, int order, int bit) {
  std::vector<double> values;
  std::string out = f.out;
  if (!samples.empty()) {
    values = read_sample_values(samples, order, bit);
  } else {
    const auto cfg = resolve(f);
    out = cfg.out;
    auto dp = cubicrx::derive(cfg.base);
    if (cfg.sigma0_sq) dp.sigma0_sq = *cfg.sigma0_sq;
    values = cubicrx::generate_samples(cubicrx::receiver_order(order), bit, cfg.base, dp, cfg.mc).values;
  }
  const auto report = cubicrx::rank_distributions(values);
  write_output(out, [&](std::ostream& os) { cubicrx::write_gof_csv(os, report); });
  return kOk;
}

int cmd_mc_validate(const CommonFlags& f, const std::string& samples_out) {
  auto cfg = resolve(f);
  if (!samples_out.empty()) cfg.samples_out = samples_out;
  const auto report = cubicrx::run_mc_validate(cfg);
  write_output(cfg.out, [&](std::ostream& os) { cubicrx::write_validation_report(os, report); });
  if (!cfg.samples_out.empty())
    write_output(cfg.samples_out, [&](std::ostream& os) { cubicrx::write_samples_csv(os, report.samples); });
  return report.pass ? kOk : kTolerance;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"BER analysis of power-cubic optical receivers"};
  app.require_subcommand(1);

  CommonFlags sweep_flags, fit_flags, gof_flags, mcv_flags;
  auto* sweep = app.add_subcommand("ber-sweep", "BER against received power, ASE power or PRD");
  add_common(sweep, sweep_flags);

  auto* fit = app.add_subcommand("fit", "fit an LP3 law to three raw moments or a sample file");
  add_common(fit, fit_flags);
  std::vector<double> moments;
  std::string fit_samples;
  int fit_order = 3;
  int fit_bit = 1;
  auto* mopt = fit->add_option("--moments", moments, "raw moments mu1 mu2 mu3")->expected(3);
  fit->add_option("--samples", fit_samples, "sample CSV (trial,order,bit,value)")->excludes(mopt);
  fit->add_option("--order", fit_order, "receiver order to select from the sample file")->check(CLI::Range(1, 3));
  fit->add_option("--bit", fit_bit, "bit to select")->check(CLI::Range(0, 1));

  auto* gof = app.add_subcommand("gof", "rank candidate distributions by KS, AD and chi-squared");
  add_common(gof, gof_flags);
  std::string gof_samples;
  int gof_order = 3;
  int gof_bit = 1;
  gof->add_option("--samples", gof_samples, "sample CSV; generated from the config when absent");
  gof->add_option("--order", gof_order, "receiver order")->check(CLI::Range(1, 3));
  gof->add_option("--bit", gof_bit, "bit")->check(CLI::Range(0, 1));

  auto* mcv = app.add_subcommand("mc-validate", "compare Monte-Carlo moments with the closed forms");
  add_common(mcv, mcv_flags);
  std::string samples_out;
  mcv->add_option("--samples-out", samples_out, "write the cubic samples of the first point here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kConfig;
  }

  try {
    if (*sweep) return cmd_ber_sweep(sweep_flags);
    if (*fit) return cmd_fit(fit_flags, moments, fit_samples, fit_order, fit_bit);
    if (*gof) return cmd_gof(gof_flags, gof_samples, gof_order, gof_bit);
    if (*mcv) return cmd_mc_validate(mcv_flags, samples_out);
  } catch (const cubicrx::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kConfig;
  } catch (const cubicrx::NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::domain_error& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kNumerical;
  } catch (const std::invalid_argument& e) {
    std::cerr << "invalid input: " << e.what() << '\n';
    return kConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kNumerical;
  }
  return kOk;
}
