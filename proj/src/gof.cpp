#include "cubicrx/gof.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <ostream>
#include <stdexcept>

#include "cubicrx/lp3.hpp"
#include "cubicrx/montecarlo.hpp"
#include "cubicrx/special_functions.hpp"

namespace cubicrx {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kMinExpected = 5.0;

void require_samples(std::span<const double> s) {
  if (s.empty()) throw std::invalid_argument("goodness of fit: empty sample");
}

CandidateFit fit_normal(double mean, double var) {
  CandidateFit c;
  c.name = "normal";
  if (!(var > 0)) throw std::domain_error("degenerate variance");
  const double sd = std::sqrt(var);
  c.parameters = {{"mean", mean}, {"sd", sd}};
  c.cdf = [=](double x) { return normal_cdf((x - mean) / sd); };
  c.sf = [=](double x) { return normal_sf((x - mean) / sd); };
  return c;
}

CandidateFit fit_lognormal(double mean, double var) {
  CandidateFit c;
  c.name = "lognormal";
  if (!(var > 0) || !(mean > 0)) throw std::domain_error("needs positive mean and variance");
  const double s2 = std::log1p(var / (mean * mean));
  const double mu = std::log(mean) - 0.5 * s2;
  const double s = std::sqrt(s2);
  c.parameters = {{"mu", mu}, {"sigma", s}};
  c.cdf = [=](double x) { return x > 0 ? normal_cdf((std::log(x) - mu) / s) : 0.0; };
  c.sf = [=](double x) { return x > 0 ? normal_sf((std::log(x) - mu) / s) : 1.0; };
  return c;
}

CandidateFit fit_gamma(double mean, double var) {
  CandidateFit c;
  c.name = "gamma";
  if (!(var > 0) || !(mean > 0)) throw std::domain_error("needs positive mean and variance");
  const double shape = mean * mean / var;
  const double scale = var / mean;
  c.parameters = {{"shape", shape}, {"scale", scale}};
  c.cdf = [=](double x) { return x > 0 ? reg_gamma_p(shape, x / scale) : 0.0; };
  c.sf = [=](double x) { return x > 0 ? reg_gamma_q(shape, x / scale) : 1.0; };
  return c;
}

CandidateFit fit_inverse_gaussian(double mean, double var) {
  CandidateFit c;
  c.name = "inverse_gaussian";
  if (!(var > 0) || !(mean > 0)) throw std::domain_error("needs positive mean and variance");
  const double mu = mean;
  const double lambda = mean * mean * mean / var;
  c.parameters = {{"mu", mu}, {"lambda", lambda}};
  // e^{2 lambda / mu} Phi(-b) overflows on its own; combine in log space.
  auto reflected = [=](double x) {
    const double b = std::sqrt(lambda / x) * (x / mu + 1.0);
    return std::exp(2.0 * lambda / mu + log_normal_cdf(-b));
  };
  auto a = [=](double x) { return std::sqrt(lambda / x) * (x / mu - 1.0); };
  c.cdf = [=](double x) { return x > 0 ? std::clamp(normal_cdf(a(x)) + reflected(x), 0.0, 1.0) : 0.0; };
  c.sf = [=](double x) { return x > 0 ? std::clamp(normal_sf(a(x)) - reflected(x), 0.0, 1.0) : 1.0; };
  return c;
}

CandidateFit fit_log_pearson3(const MomentTriple& m) {
  CandidateFit c;
  c.name = "log_pearson3";
  const Lp3Params p = fit_from_moments(m);
  c.parameters = {{"alpha", p.alpha}, {"beta", p.beta}, {"gamma", p.gamma}};
  c.cdf = [=](double x) { return x > 0 ? lp3_cdf(p, x) : 0.0; };
  c.sf = [=](double x) { return x > 0 ? lp3_sf(p, x) : 1.0; };
  return c;
}

// Ranks 1..n by ascending statistic; NaN (unfit) last, ties by name.
void assign_ranks(std::vector<CandidateFit>& cands, double CandidateFit::*stat, int CandidateFit::*rank) {
  std::vector<std::size_t> order(cands.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) {
    const double a = cands[i].*stat;
    const double b = cands[j].*stat;
    const bool na = std::isnan(a);
    const bool nb = std::isnan(b);
    if (na != nb) return nb;
    if (!na && a != b) return a < b;
    return cands[i].name < cands[j].name;
  });
  for (std::size_t r = 0; r < order.size(); ++r) cands[order[r]].*rank = static_cast<int>(r + 1);
}

std::string format_stat(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

double ks_statistic(std::span<const double> sorted, const DistributionFunction& cdf) {
  require_samples(sorted);
  const double n = static_cast<double>(sorted.size());
  double d = 0.0;
  for (std::size_t i = 0; i < sorted.size(); ++i) {
    const double f = cdf(sorted[i]);
    const double k = static_cast<double>(i);
    d = std::max({d, (k + 1.0) / n - f, f - k / n});
  }
  return d;
}

double ad_statistic(std::span<const double> sorted, const DistributionFunction& cdf, const DistributionFunction& sf) {
  require_samples(sorted);
  const std::size_t n = sorted.size();
  std::vector<double> log_f(n), log_s(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double f = cdf(sorted[i]);
    const double s = sf ? sf(sorted[i]) : 1.0 - f;
    if (!(f > 0.0) || !(s > 0.0))
      throw std::domain_error("Anderson-Darling: hypothesized cdf reaches 0 or 1 at a sample");
    log_f[i] = std::log(f);
    log_s[i] = std::log(s);
  }
  long double acc = 0.0L;
  for (std::size_t i = 0; i < n; ++i)
    acc += static_cast<long double>(2 * i + 1) * (log_f[i] + log_s[n - 1 - i]);
  const double nd = static_cast<double>(n);
  return static_cast<double>(-nd - acc / nd);
}

double chi2_statistic(std::span<const double> samples, const DistributionFunction& cdf, int bins) {
  require_samples(samples);
  if (bins < 2) throw std::invalid_argument("chi-squared: need at least two bins");
  const double expected = static_cast<double>(samples.size()) / bins;
  if (expected < kMinExpected) throw std::invalid_argument("chi-squared: expected count per bin below 5");
  std::vector<double> observed(static_cast<std::size_t>(bins), 0.0);
  for (double x : samples) {
    const double f = cdf(x);
    const int b = std::clamp(static_cast<int>(std::floor(f * bins)), 0, bins - 1);
    observed[static_cast<std::size_t>(b)] += 1.0;
  }
  double chi2 = 0.0;
  for (double o : observed) chi2 += (o - expected) * (o - expected) / expected;
  return chi2;
}

int default_chi2_bins(std::size_t n) {
  const auto by_size = static_cast<int>(std::min<std::size_t>(n / 50, 1u << 30));
  const auto cap = static_cast<int>(std::min<std::size_t>(n / 5, 1u << 30));
  return std::min(std::max(10, by_size), cap);
}

const CandidateFit& GofReport::at(const std::string& name) const {
  for (const auto& c : candidates)
    if (c.name == name) return c;
  throw std::out_of_range("no candidate named " + name);
}

GofReport rank_distributions(std::span<const double> samples) {
  constexpr std::size_t kMinSamples = 10000;
  if (samples.size() < kMinSamples) throw std::invalid_argument("distribution ranking needs at least 10^4 samples");

  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  const MomentTriple m = estimate_moments(sorted).moments;
  // Central second moment from a two-pass sum, not mu2 - mu1^2.
  long double ss = 0.0L;
  for (double x : sorted) ss += (x - m.mu1) * static_cast<long double>(x - m.mu1);
  const double var = static_cast<double>(ss / static_cast<long double>(sorted.size() - 1));

  GofReport report;
  report.samples = sorted.size();
  report.chi2_bins = default_chi2_bins(sorted.size());

  using Fitter = std::function<CandidateFit()>;
  const std::vector<std::pair<std::string, Fitter>> fitters{
      {"log_pearson3", [&] { return fit_log_pearson3(m); }},
      {"normal", [&] { return fit_normal(m.mu1, var); }},
      {"lognormal", [&] { return fit_lognormal(m.mu1, var); }},
      {"gamma", [&] { return fit_gamma(m.mu1, var); }},
      {"inverse_gaussian", [&] { return fit_inverse_gaussian(m.mu1, var); }},
  };

  for (const auto& [name, fit] : fitters) {
    CandidateFit c;
    try {
      c = fit();
      c.fitted = true;
    } catch (const std::exception& e) {
      c = CandidateFit{};
      c.name = name;
      c.error = e.what();
    }
    if (c.fitted) {
      c.ks = ks_statistic(sorted, c.cdf);
      try {
        c.ad = ad_statistic(sorted, c.cdf, c.sf);
      } catch (const std::domain_error&) {
        c.ad = std::numeric_limits<double>::infinity();
      }
      c.chi2 = chi2_statistic(sorted, c.cdf, report.chi2_bins);
    } else {
      c.ks = c.ad = c.chi2 = kNaN;
    }
    report.candidates.push_back(std::move(c));
  }

  assign_ranks(report.candidates, &CandidateFit::ks, &CandidateFit::ks_rank);
  assign_ranks(report.candidates, &CandidateFit::ad, &CandidateFit::ad_rank);
  assign_ranks(report.candidates, &CandidateFit::chi2, &CandidateFit::chi2_rank);
  return report;
}

void write_gof_csv(std::ostream& os, const GofReport& report, bool schema_line) {
  if (schema_line) os << "# schema=1\n";
  os << "distribution,ks,ks_rank,ad,ad_rank,chi2,chi2_rank\n";
  for (const auto& c : report.candidates) {
    os << c.name << ',' << format_stat(c.ks) << ',' << c.ks_rank << ',' << format_stat(c.ad) << ',' << c.ad_rank
       << ',' << format_stat(c.chi2) << ',' << c.chi2_rank << '\n';
  }
}

}  // namespace cubicrx
