#include "cubicrx/commands.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <thread>
#include <tuple>

#include "cubicrx/detection.hpp"
#include "cubicrx/errors.hpp"
#include "cubicrx/moments.hpp"

namespace cubicrx {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

struct Point {
  double x = 0.0;
  SystemParams sp;
  DerivedParams dp;
};

Point make_point(const SweepConfig& cfg, double x) {
  Point p{x, cfg.base, {}};
  switch (cfg.axis) {
    case SweepAxis::p_r_dbm:
      p.sp.p_r = dbm_to_watts(x);
      break;
    case SweepAxis::prd:
      p.sp.prd = x;
      break;
    case SweepAxis::sigma0_sq_dbm:
      break;
  }
  p.dp = derive(p.sp);
  if (cfg.sigma0_sq) p.dp.sigma0_sq = *cfg.sigma0_sq;
  if (cfg.axis == SweepAxis::sigma0_sq_dbm) p.dp.sigma0_sq = dbm_to_watts(x);
  return p;
}

// Points that differ only in received power share one set of noise draws.
std::vector<std::vector<std::size_t>> noise_groups(const std::vector<Point>& points) {
  std::map<std::pair<double, double>, std::vector<std::size_t>> groups;
  for (std::size_t i = 0; i < points.size(); ++i) groups[{points[i].sp.prd, points[i].dp.sigma0_sq}].push_back(i);
  std::vector<std::vector<std::size_t>> out;
  for (auto& [key, idx] : groups) out.push_back(std::move(idx));
  return out;
}

template <class F>
void parallel_for(std::size_t n, unsigned threads, F&& f) {
  unsigned workers = threads ? threads : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, n));
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) f(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < n; i = next++) f(i);
    });
  for (auto& t : pool) t.join();
}

std::string sanitize(std::string msg) {
  for (char& c : msg)
    if (c == ',' || c == '\n' || c == '\r' || c == '"') c = ';';
  return msg;
}

std::string fmt(double v, const char* pattern = "%.10g") {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[48];
  std::snprintf(buf, sizeof buf, pattern, v);
  return buf;
}

bool has(const std::vector<std::string>& v, const std::string& s) { return std::find(v.begin(), v.end(), s) != v.end(); }
bool has(const std::vector<int>& v, int x) { return std::find(v.begin(), v.end(), x) != v.end(); }

// Outcome of one variant at one point; rl < 0 marks a load-independent result.
struct Outcome {
  std::string variant;
  double rl = -1.0;
  double th = kNaN;
  double ber = kNaN;
  std::string error;
};

template <class F>
Outcome evaluate(std::string variant, double rl, F&& compute) {
  Outcome o;
  o.variant = std::move(variant);
  o.rl = rl;
  try {
    const ThresholdResult r = compute();
    o.th = r.threshold;
    o.ber = r.pe;
  } catch (const std::exception& e) {
    o.error = sanitize(e.what());
  }
  return o;
}

std::vector<Outcome> analytic_outcomes(const SweepConfig& cfg, const Point& p) {
  std::vector<Outcome> out;
  const bool cubic = has(cfg.orders, 3);
  const bool reuse = cfg.reuse_bit0_law;

  if (cubic && (has(cfg.variants, "lp3") || has(cfg.variants, "lp3_shot_thermal") || has(cfg.variants, "gauss_approx"))) {
    const MomentTriple m0 = decision_moments(p.sp, p.dp, 0);
    const MomentTriple m1 = reuse ? m0 : decision_moments(p.sp, p.dp, 1);
    const auto laws = [&] {
      const Lp3Params l0 = fit_from_moments(m0);
      return std::pair{l0, reuse ? l0 : fit_from_moments(m1)};
    };
    if (has(cfg.variants, "lp3"))
      out.push_back(evaluate("lp3", -1.0, [&] {
        const auto [l0, l1] = laws();
        return optimize_threshold(BitConditionedLaw::lp3(0, l0), BitConditionedLaw::lp3(1, l1),
                                  ThresholdSearch::around_means(m0.mu1, m1.mu1));
      }));
    if (has(cfg.variants, "lp3_shot_thermal"))
      for (double rl : cfg.r_l)
        out.push_back(evaluate("lp3_shot_thermal", rl, [&] {
          const auto [l0, l1] = laws();
          SystemParams sp = p.sp;
          sp.r_l = rl;
          const NoisePhysics np = NoisePhysics::from(sp, p.dp);
          return optimize_threshold(BitConditionedLaw::lp3_with_shot_thermal(0, l0, np),
                                    BitConditionedLaw::lp3_with_shot_thermal(1, l1, np),
                                    ThresholdSearch::around_means(m0.mu1, m1.mu1));
        }));
    if (has(cfg.variants, "gauss_approx"))
      out.push_back(evaluate("gauss_approx", -1.0, [&] {
        return gaussian_approx_ber(m0.mu1, m0.mu2 - m0.mu1 * m0.mu1, m1.mu1, m1.mu2 - m1.mu1 * m1.mu1);
      }));
  }
  if (has(cfg.orders, 1) && has(cfg.variants, "gauss_approx"))
    out.push_back(evaluate("gauss_approx_order1", -1.0, [&] {
      const double m0 = linear_mean(p.sp, p.dp, 0);
      const double v0 = linear_variance(p.sp, p.dp, 0);
      const double m1 = reuse ? m0 : linear_mean(p.sp, p.dp, 1);
      const double v1 = reuse ? v0 : linear_variance(p.sp, p.dp, 1);
      return gaussian_approx_ber(m0, v0, m1, v1);
    }));
  return out;
}

const char* mc_label(int order) {
  switch (order) {
    case 1:
      return "mc_order1";
    case 2:
      return "mc_order2";
    default:
      return "mc";
  }
}

// Monte-Carlo outcomes for every point of one noise group.
void mc_outcomes(const SweepConfig& cfg, const std::vector<Point>& points, const std::vector<std::size_t>& group,
                 std::vector<std::vector<Outcome>>& out) {
  std::vector<int> orders = cfg.orders;
  std::sort(orders.begin(), orders.end());
  orders.erase(std::unique(orders.begin(), orders.end()), orders.end());

  const Point& ref = points[group.front()];
  std::vector<Probe> probes;
  for (int o : orders) {
    probes.push_back({receiver_order(o), 0.0});
    for (std::size_t i : group) probes.push_back({receiver_order(o), points[i].sp.p_r});
  }
  std::vector<std::vector<double>> samples;
  std::string failure;
  try {
    samples = sample_probes(ref.sp, ref.dp, probes, cfg.mc);
  } catch (const std::exception& e) {
    failure = sanitize(e.what());
  }

  std::size_t base = 0;
  for (int o : orders) {
    for (std::size_t k = 0; k < group.size(); ++k) {
      Outcome res;
      res.variant = mc_label(o);
      if (!failure.empty()) {
        res.error = failure;
      } else {
        const auto& s0 = samples[base];
        const auto& s1 = cfg.reuse_bit0_law ? s0 : samples[base + 1 + k];
        const EmpiricalBer b = empirical_ber(s0, s1);
        res.th = b.threshold;
        res.ber = b.pe;
      }
      out[group[k]].push_back(std::move(res));
    }
    base += group.size() + 1;
  }
}

}  // namespace

std::vector<SweepRow> run_ber_sweep(const SweepConfig& cfg) {
  cfg.validate();
  std::vector<Point> points;
  for (double x : cfg.x_values) points.push_back(make_point(cfg, x));

  std::vector<std::vector<Outcome>> outcomes(points.size());
  parallel_for(points.size(), cfg.mc.threads, [&](std::size_t i) { outcomes[i] = analytic_outcomes(cfg, points[i]); });
  if (cfg.mc_enabled())
    for (const auto& group : noise_groups(points)) mc_outcomes(cfg, points, group, outcomes);

  std::vector<SweepRow> rows;
  for (std::size_t i = 0; i < points.size(); ++i) {
    for (double rl : cfg.r_l) {
      for (const auto& o : outcomes[i]) {
        if (o.rl >= 0 && o.rl != rl) continue;
        rows.push_back({points[i].x, axis_name(cfg.axis), points[i].sp.prd, rl, o.variant, o.th, o.ber, o.error});
      }
    }
  }
  std::stable_sort(rows.begin(), rows.end(), [](const SweepRow& a, const SweepRow& b) {
    return std::tie(a.x_value, a.variant, a.rl_ohm) < std::tie(b.x_value, b.variant, b.rl_ohm);
  });
  return rows;
}

void write_sweep_csv(std::ostream& os, std::span<const SweepRow> rows) {
  os << "# schema=1\nx_value,x_kind,prd,rl_ohm,variant,th_opt,ber,error\n";
  for (const auto& r : rows) {
    os << fmt(r.x_value) << ',' << r.x_kind << ',' << fmt(r.prd) << ',' << fmt(r.rl_ohm) << ',' << r.variant << ','
       << fmt(r.th_opt) << ',' << fmt(r.ber) << ',' << r.error << '\n';
  }
}

std::string plot_script(const std::string& csv_path) {
  std::ostringstream s;
  s << "#!/usr/bin/env python3\n"
       "# Plots BER against the sweep axis, one curve per variant and load resistance.\n"
       "import csv\n"
       "import sys\n"
       "from collections import defaultdict\n\n"
       "import matplotlib\n"
       "matplotlib.use(\"Agg\")\n"
       "import matplotlib.pyplot as plt\n\n"
       "path = sys.argv[1] if len(sys.argv) > 1 else \""
    << csv_path
    << "\"\n"
       "with open(path) as fh:\n"
       "    rows = list(csv.DictReader(line for line in fh if not line.startswith(\"#\")))\n\n"
       "curves = defaultdict(list)\n"
       "for r in rows:\n"
       "    ber = float(r[\"ber\"])\n"
       "    if ber > 0:\n"
       "        curves[(r[\"variant\"], r[\"rl_ohm\"])].append((float(r[\"x_value\"]), ber))\n\n"
       "fig, ax = plt.subplots(figsize=(7, 5))\n"
       "for (variant, rl), pts in sorted(curves.items()):\n"
       "    pts.sort()\n"
       "    ax.semilogy([p[0] for p in pts], [p[1] for p in pts], marker=\"o\", label=f\"{variant} (R_L={rl} ohm)\")\n"
       "ax.set_xlabel(rows[0][\"x_kind\"] if rows else \"x\")\n"
       "ax.set_ylabel(\"BER\")\n"
       "ax.grid(True, which=\"both\", alpha=0.3)\n"
       "ax.legend(fontsize=7)\n"
       "fig.tight_layout()\n"
       "fig.savefig(path.rsplit(\".\", 1)[0] + \".png\", dpi=150)\n";
  return s.str();
}

FitOutcome run_fit(const MomentTriple& moments) {
  FitOutcome f;
  f.input = moments;
  f.params = fit_from_moments(moments);
  f.reproduced = {lp3_moment(f.params, 1), lp3_moment(f.params, 2), lp3_moment(f.params, 3), moments.bit};
  return f;
}

FitOutcome run_fit(std::span<const double> samples) {
  FitOutcome f = run_fit(estimate_moments(samples).moments);
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const Lp3Params p = f.params;
  f.ks = ks_statistic(sorted, [&](double x) { return x > 0 ? lp3_cdf(p, x) : 0.0; });
  return f;
}

void print_fit(std::ostream& os, const FitOutcome& f) {
  const auto g = [](double v) { return fmt(v, "%.12g"); };
  os << "alpha = " << g(f.params.alpha) << '\n'
     << "beta  = " << g(f.params.beta) << '\n'
     << "gamma = " << g(f.params.gamma) << '\n'
     << "moments in:  " << g(f.input.mu1) << ' ' << g(f.input.mu2) << ' ' << g(f.input.mu3) << '\n'
     << "moments out: " << g(f.reproduced.mu1) << ' ' << g(f.reproduced.mu2) << ' ' << g(f.reproduced.mu3) << '\n';
  if (f.ks) os << "ks = " << g(*f.ks) << '\n';
  const auto h = [](double v) { return fmt(v, "%.17g"); };
  os << "lp3 alpha=" << h(f.params.alpha) << " beta=" << h(f.params.beta) << " gamma=" << h(f.params.gamma) << '\n';
}

ValidationReport run_mc_validate(const SweepConfig& cfg) {
  cfg.validate();
  if (cfg.mc.trials < 1000) throw ConfigError("mc-validate needs at least 1000 trials");
  std::vector<Point> points;
  for (double x : cfg.x_values) points.push_back(make_point(cfg, x));

  ValidationReport report;
  report.x_kind = axis_name(cfg.axis);
  std::vector<std::vector<MomentCheck>> checks(points.size());

  for (const auto& group : noise_groups(points)) {
    const Point& ref = points[group.front()];
    std::vector<Probe> probes{{ReceiverOrder::cubic, 0.0}};
    for (std::size_t i : group) probes.push_back({ReceiverOrder::cubic, points[i].sp.p_r});
    auto samples = sample_probes(ref.sp, ref.dp, probes, cfg.mc);

    for (std::size_t k = 0; k < group.size(); ++k) {
      const Point& p = points[group[k]];
      const bool noiseless = p.dp.sigma0_sq == 0.0;
      for (int bit = 0; bit <= 1; ++bit) {
        const auto& values = bit == 0 ? samples[0] : samples[1 + k];
        const MomentEstimate est = estimate_moments(values, bit);
        const MomentTriple cf = decision_moments(p.sp, p.dp, bit);
        const double mc[3] = {est.moments.mu1, est.moments.mu2, est.moments.mu3};
        const double exact[3] = {cf.mu1, cf.mu2, cf.mu3};
        for (int n = 0; n < 3; ++n) {
          MomentCheck c;
          c.x_value = p.x;
          c.prd = p.sp.prd;
          c.bit = bit;
          c.order = n + 1;
          c.closed_form = exact[n];
          c.monte_carlo = mc[n];
          c.std_error = est.standard_error[n];
          c.rel_diff = exact[n] != 0.0 ? std::fabs(mc[n] - exact[n]) / std::fabs(exact[n]) : std::fabs(mc[n]);
          c.tolerance = noiseless ? kNoiselessTolerance : kMomentTolerance[n];
          c.pass = c.rel_diff <= c.tolerance;
          checks[group[k]].push_back(c);
        }
      }
      if (group[k] == 0) {
        report.samples.push_back({ReceiverOrder::cubic, 0, samples[0], cfg.mc});
        report.samples.push_back({ReceiverOrder::cubic, 1, samples[1 + k], cfg.mc});
      }
    }
  }
  for (auto& c : checks) {
    for (auto& m : c) {
      report.pass = report.pass && m.pass;
      report.moments.push_back(m);
    }
  }

  constexpr std::size_t kGofMinSamples = 10000;
  if (cfg.mc.trials >= kGofMinSamples) {
    report.gof = rank_distributions(report.samples[1].values);
  } else {
    report.gof_note = "skipped: fewer than 10000 samples";
  }
  return report;
}

void write_validation_report(std::ostream& os, const ValidationReport& report) {
  os << "# schema=1\n";
  os << "x_value,x_kind,prd,bit,moment,closed_form,monte_carlo,std_error,rel_diff,tolerance,pass\n";
  for (const auto& m : report.moments) {
    os << fmt(m.x_value) << ',' << report.x_kind << ',' << fmt(m.prd) << ',' << m.bit << ",mu" << m.order << ','
       << fmt(m.closed_form) << ',' << fmt(m.monte_carlo) << ',' << fmt(m.std_error) << ',' << fmt(m.rel_diff, "%.6g")
       << ',' << fmt(m.tolerance) << ',' << (m.pass ? "pass" : "fail") << '\n';
  }
  if (report.gof) {
    os << "# gof order=3 bit=1 x_value=" << fmt(report.moments.empty() ? kNaN : report.moments.front().x_value)
       << " samples=" << report.gof->samples << " chi2_bins=" << report.gof->chi2_bins << '\n';
    write_gof_csv(os, *report.gof, false);
    for (const auto& c : report.gof->candidates)
      if (!c.fitted) os << "# unfit " << c.name << ": " << sanitize(c.error) << '\n';
  } else {
    os << "# gof " << report.gof_note << '\n';
  }
  os << "# result=" << (report.pass ? "pass" : "fail") << '\n';
}

}  // namespace cubicrx
