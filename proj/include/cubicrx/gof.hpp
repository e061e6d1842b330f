#pragma once

#include <functional>
#include <iosfwd>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace cubicrx {

using DistributionFunction = std::function<double(double)>;

// Kolmogorov-Smirnov distance; `sorted` must be ascending.
double ks_statistic(std::span<const double> sorted, const DistributionFunction& cdf);

// Anderson-Darling A^2. The survival function is used for ln(1 - F) so that
// the upper tail keeps full precision; it defaults to 1 - cdf.
// Throws std::domain_error when F(x_i) is 0 or 1 for some sample.
double ad_statistic(std::span<const double> sorted, const DistributionFunction& cdf,
                    const DistributionFunction& sf = {});

// Pearson chi-squared over `bins` equal-probability bins of the hypothesized law.
// Throws std::invalid_argument when the expected count per bin is below 5.
double chi2_statistic(std::span<const double> samples, const DistributionFunction& cdf, int bins);

// max(10, N / 50), reduced until every bin expects at least 5 samples.
int default_chi2_bins(std::size_t n);

struct CandidateFit {
  std::string name;
  bool fitted = false;
  std::string error;  // why the fit was rejected
  std::vector<std::pair<std::string, double>> parameters;
  DistributionFunction cdf;
  DistributionFunction sf;
  double ks = 0.0;
  double ad = 0.0;
  double chi2 = 0.0;
  int ks_rank = 0;
  int ad_rank = 0;
  int chi2_rank = 0;
};

struct GofReport {
  std::size_t samples = 0;
  int chi2_bins = 0;
  std::vector<CandidateFit> candidates;  // in candidate order

  const CandidateFit& at(const std::string& name) const;
};

// Moment-matched candidates: log_pearson3 (three moments), normal, lognormal,
// gamma and inverse_gaussian (two moments). Unfit candidates rank last.
// Needs at least 10^4 samples.
GofReport rank_distributions(std::span<const double> samples);

// distribution,ks,ks_rank,ad,ad_rank,chi2,chi2_rank
void write_gof_csv(std::ostream& os, const GofReport& report, bool schema_line = true);

}  // namespace cubicrx
