// Acceptance harness: one PASS/FAIL line per criterion, nonzero exit on any failure.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "cubicrx/commands.hpp"
#include "cubicrx/config.hpp"
#include "cubicrx/detection.hpp"
#include "cubicrx/gof.hpp"
#include "cubicrx/lp3.hpp"
#include "cubicrx/moments.hpp"
#include "cubicrx/montecarlo.hpp"
#include "cubicrx/params.hpp"

using namespace cubicrx;

namespace {

struct Verdict {
  bool pass = true;
  std::string detail;
};

int failures = 0;

void report(const char* name, const std::function<Verdict()>& check) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = check();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::printf("[%s] %s (%.1f s): %s\n", v.pass ? "PASS" : "FAIL", name, secs, v.detail.c_str());
  std::fflush(stdout);
  failures += !v.pass;
}

std::string fmt(const char* pattern, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, pattern, args...);
  return buf;
}

Verdict moment_oracle() {
  const double tol[3] = {0.03, 0.05, 0.10};
  const double powers[3] = {0.0, 33.0, 36.0};
  double worst[3] = {0, 0, 0};
  Verdict v;
  for (double prd : {10.0, 25.0}) {
    SystemParams sp;
    sp.prd = prd;
    const DerivedParams dp = derive(sp);
    std::vector<Probe> probes{{ReceiverOrder::cubic, 0.0}};
    for (double p : powers) probes.push_back({ReceiverOrder::cubic, dbm_to_watts(p)});
    McConfig cfg;
    cfg.trials = 1000000;
    cfg.seed = 20240601;
    const auto samples = sample_probes(sp, dp, probes, cfg);
    for (int i = 0; i < 3; ++i) {
      SystemParams at = sp;
      at.p_r = dbm_to_watts(powers[i]);
      for (int bit : {0, 1}) {
        const auto& s = samples[bit == 0 ? 0 : i + 1];
        const MomentTriple mc = estimate_moments(s, bit).moments;
        const MomentTriple cf = decision_moments(at, dp, bit);
        const double got[3] = {mc.mu1, mc.mu2, mc.mu3};
        const double want[3] = {cf.mu1, cf.mu2, cf.mu3};
        for (int k = 0; k < 3; ++k) {
          const double rel = std::fabs(got[k] / want[k] - 1.0);
          worst[k] = std::max(worst[k], rel);
          if (rel > tol[k]) {
            v.pass = false;
            v.detail += fmt("prd=%g P_r=%gdBm bit=%d mu%d off by %.2f%%; ", prd, powers[i], bit, k + 1, 100 * rel);
          }
        }
      }
    }
  }
  v.detail += fmt("worst relative error mu1 %.2f%% (3%%), mu2 %.2f%% (5%%), mu3 %.2f%% (10%%)", 100 * worst[0],
                  100 * worst[1], 100 * worst[2]);
  return v;
}

Verdict lp3_round_trip() {
  double beta_err = 0, alpha_err = 0, gamma_err = 0;
  for (double a : {0.5, 2.0, 10.0, 50.0})
    for (double b : {-0.3, -0.1, -0.01, 0.01, 0.1, 0.3})
      for (double g : {-5.0, 0.0, 5.0}) {
        const Lp3Params truth{a, b, g};
        const Lp3Params fit =
            fit_from_moments({lp3_moment(truth, 1), lp3_moment(truth, 2), lp3_moment(truth, 3), 0});
        beta_err = std::max(beta_err, std::fabs(fit.beta - b));
        alpha_err = std::max(alpha_err, std::fabs(fit.alpha / a - 1.0));
        // gamma = 0 has no relative scale; measure it on the unit scale there.
        gamma_err = std::max(gamma_err, std::fabs(fit.gamma - g) / std::max(1.0, std::fabs(g)));
      }
  const bool ok = beta_err <= 1e-9 && alpha_err <= 1e-7 && gamma_err <= 1e-7;
  return {ok, fmt("72 triples, max |dbeta| %.2e (1e-9), max rel dalpha %.2e (1e-7), max rel dgamma %.2e (1e-7)",
                  beta_err, alpha_err, gamma_err)};
}

Verdict pdf_cdf_consistency() {
  std::mt19937_64 eng(777);
  std::uniform_real_distribution<double> ua(0.5, 20.0), ub(0.02, 0.3), ug(-3.0, 3.0);
  std::bernoulli_distribution sign(0.5);
  double worst = 0;
  for (int t = 0; t < 10; ++t) {
    const Lp3Params p{ua(eng), (sign(eng) ? 1.0 : -1.0) * ub(eng), ug(eng)};
    for (int i = 1; i <= 20; ++i) {
      const double y = lp3_quantile(p, i / 21.0);
      const double z = (std::log(y) - p.gamma) / p.beta;
      // Step small against both the log-scale and the distance to the support edge.
      const double h = 1e-3 * y * std::fabs(p.beta) * std::min(z, 1.0);
      const auto f = [&](double x) { return lp3_cdf(p, x); };
      const double d = (f(y - 2 * h) - 8 * f(y - h) + 8 * f(y + h) - f(y + 2 * h)) / (12 * h);
      worst = std::max(worst, std::fabs(d / lp3_pdf(p, y) - 1.0));
    }
  }
  return {worst <= 1e-6, fmt("10 triples x 20 quantiles, max relative gap %.2e (1e-6)", worst)};
}

Verdict table2_ordering() {
  SystemParams sp;
  sp.prd = 50;
  sp.p_r = dbm_to_watts(35.0);
  const DerivedParams dp = derive(sp);
  McConfig cfg;
  cfg.trials = 250000;
  cfg.seed = 35;
  const auto set = generate_samples(ReceiverOrder::cubic, 1, sp, dp, cfg);
  const GofReport rep = rank_distributions(set.values);
  const auto& lp3 = rep.at("log_pearson3");
  const auto& normal = rep.at("normal");
  const bool ok = lp3.fitted && normal.fitted && lp3.ks < 0.01 && normal.ks > 5 * lp3.ks && lp3.ks_rank == 1 &&
                  lp3.ad_rank == 1 && lp3.chi2_rank == 1;
  return {ok, fmt("KS lp3 %.5f normal %.5f; lp3 ranks ks=%d ad=%d chi2=%d", lp3.ks, normal.ks, lp3.ks_rank,
                  lp3.ad_rank, lp3.chi2_rank)};
}

// One shared sweep feeds the BER criteria.
struct SweepResult {
  std::vector<double> x;
  std::map<std::string, std::vector<double>> ber;
};

const SweepResult& ber_sweep() {
  static const SweepResult result = [] {
    SweepConfig cfg;
    cfg.base.prd = 50;
    cfg.axis = SweepAxis::p_r_dbm;
    cfg.x_values = {30, 31, 32, 33, 34, 35, 36, 37};
    cfg.orders = {1, 2, 3};
    cfg.variants = {"lp3", "gauss_approx", "mc"};
    cfg.mc.trials = 1000000;
    cfg.mc.seed = 9;
    SweepResult r;
    r.x = cfg.x_values;
    for (const auto& row : run_ber_sweep(cfg)) {
      auto& v = r.ber[row.variant];
      if (v.empty()) v.assign(cfg.x_values.size(), NAN);
      const auto i = std::find(cfg.x_values.begin(), cfg.x_values.end(), row.x_value) - cfg.x_values.begin();
      v[i] = row.ber;
    }
    return r;
  }();
  return result;
}

Verdict ber_cross_validation() {
  const auto& s = ber_sweep();
  const auto& mc = s.ber.at("mc");
  const auto& lp3 = s.ber.at("lp3");
  Verdict v;
  int used = 0;
  double worst = 0;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    v.detail += fmt("%gdBm mc=%.3g lp3=%.3g; ", s.x[i], mc[i], lp3[i]);
    if (!(mc[i] >= 1e-4 && mc[i] <= 0.4)) continue;
    ++used;
    const double gap = std::fabs(std::log10(lp3[i]) - std::log10(mc[i]));
    worst = std::max(worst, gap);
    if (!(gap <= 0.3)) v.pass = false;
  }
  if (used < 3) v.pass = false;
  v.detail += fmt("%d points in [1e-4, 0.4], max |dlog10| %.3f (0.3)", used, worst);
  return v;
}

Verdict gaussian_failure() {
  const auto& s = ber_sweep();
  const auto& mc = s.ber.at("mc");
  int pick = -1;
  for (std::size_t i = 0; i < s.x.size(); ++i)
    if (mc[i] <= 1e-3 && mc[i] > 0) pick = static_cast<int>(i);
  if (pick < 0) return {false, "no sweep point with 0 < MC BER <= 1e-3"};
  const double m = mc[pick], g = s.ber.at("gauss_approx")[pick], l = s.ber.at("lp3")[pick];
  const double g_ratio = std::max(g / m, m / g), l_ratio = std::max(l / m, m / l);
  return {g_ratio > 2 && l_ratio <= 2,
          fmt("at %gdBm mc=%.3g gauss=%.3g (x%.2f, >2) lp3=%.3g (x%.2f, <=2)", s.x[pick], m, g, g_ratio, l, l_ratio)};
}

Verdict linear_sanity() {
  const auto& s = ber_sweep();
  const auto& mc = s.ber.at("mc_order1");
  const auto& ga = s.ber.at("gauss_approx_order1");
  Verdict v;
  int used = 0;
  double worst = 1;
  for (std::size_t i = 0; i < s.x.size(); ++i) {
    if (!(mc[i] >= 1e-3)) continue;
    ++used;
    const double ratio = std::max(ga[i] / mc[i], mc[i] / ga[i]);
    worst = std::max(worst, ratio);
    if (!(ratio <= 1.5)) v.pass = false;
  }
  if (used == 0) v.pass = false;
  v.detail = fmt("%d points with MC >= 1e-3, worst ratio %.3f (1.5)", used, worst);
  return v;
}

Verdict receiver_ordering() {
  const auto& s = ber_sweep();
  const std::size_t top = s.x.size() - 1;
  const double c = s.ber.at("mc")[top], q = s.ber.at("mc_order2")[top], l = s.ber.at("mc_order1")[top];
  return {c < q && q < l, fmt("at %gdBm cubic=%.3g quadratic=%.3g linear=%.3g", s.x[top], c, q, l)};
}

Verdict shot_thermal_limits() {
  SystemParams sp;
  sp.prd = 50;
  sp.p_r = dbm_to_watts(35.0);
  const DerivedParams dp = derive(sp);
  const NoisePhysics np = NoisePhysics::from(sp, dp);
  NoisePhysics quiet = np;
  quiet.q_e *= 1e-12;
  quiet.t_r *= 1e-12;
  Verdict v;
  double worst_limit = 0, worst_z = 0;
  for (int bit : {0, 1}) {
    const Lp3Params law = fit_from_moments(decision_moments(sp, dp, bit));
    for (int i = 1; i <= 10; ++i) {
      const double x = lp3_quantile(law, (i - 0.5) / 10.0);
      worst_limit = std::max(worst_limit, std::fabs(cdf_shot_thermal(law, x, quiet) - lp3_cdf(law, x)));
    }
    std::mt19937_64 eng(100 + bit);
    std::gamma_distribution<double> gz(law.alpha, 1.0);
    std::normal_distribution<double> gn(0.0, 1.0);
    const double qs[5] = {0.05, 0.25, 0.5, 0.75, 0.95};
    double xs[5];
    long hits[5] = {0, 0, 0, 0, 0};
    for (int k = 0; k < 5; ++k) xs[k] = lp3_quantile(law, qs[k]);
    constexpr long n = 10000000;
    for (long j = 0; j < n; ++j) {
      const double y = std::exp(law.gamma + law.beta * gz(eng));
      const double d = y + std::sqrt(np.total_variance(y)) * gn(eng);
      for (int k = 0; k < 5; ++k) hits[k] += d <= xs[k];
    }
    for (int k = 0; k < 5; ++k) {
      const double f_mc = static_cast<double>(hits[k]) / n;
      const double se = std::sqrt(f_mc * (1 - f_mc) / n);
      worst_z = std::max(worst_z, std::fabs(cdf_shot_thermal(law, xs[k], np) - f_mc) / se);
    }
  }
  v.pass = worst_limit <= 1e-6 && worst_z <= 3.0;
  v.detail = fmt("degenerate-limit max gap %.2e (1e-6); oracle max |z| %.2f (3) over 2 bits x 5 quantiles", worst_limit,
                 worst_z);
  return v;
}

Verdict degenerate_noise() {
  double worst = 0;
  bool zero_ok = true;
  for (double prd : {10.0, 25.0, 50.0})
    for (double dbm : {0.0, 30.0, 36.0}) {
      SystemParams sp;
      sp.prd = prd;
      sp.p_r = dbm_to_watts(dbm);
      DerivedParams dp = derive(sp);
      dp.sigma0_sq = 0.0;
      for (std::uint64_t trial : {0u, 1u}) {
        const double y1 = sample_decision(ReceiverOrder::cubic, 1, sp, dp, 16, 32, 5, trial);
        worst = std::max(worst, std::fabs(y1 / mean_decision(sp, dp, 1) - 1.0));
        zero_ok = zero_ok && sample_decision(ReceiverOrder::cubic, 0, sp, dp, 16, 32, 5, trial) == 0.0;
      }
    }
  return {worst <= 0.005 && zero_ok,
          fmt("cubic bit 1 max relative gap %.2e (0.5%%), bit 0 identically zero: %s", worst, zero_ok ? "yes" : "no")};
}

}  // namespace

int main() {
  report("moment oracle (PRD 10/25, 1e6 trials)", moment_oracle);
  report("LP3 round trip", lp3_round_trip);
  report("pdf/cdf consistency", pdf_cdf_consistency);
  report("goodness-of-fit ordering (35 dBm, PRD 50, 2.5e5 samples)", table2_ordering);
  report("BER cross-validation LP3 vs MC (PRD 50, 1e6 trials)", ber_cross_validation);
  report("Gaussian approximation failure", gaussian_failure);
  report("power-linear Gaussian sanity", linear_sanity);
  report("receiver ordering", receiver_ordering);
  report("shot/thermal limits", shot_thermal_limits);
  report("degenerate-noise determinism", degenerate_noise);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
