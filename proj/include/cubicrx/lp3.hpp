#pragma once

#include "cubicrx/moments.hpp"

namespace cubicrx {

// Log-Pearson type III law: (ln Y - gamma) / beta ~ Gamma(alpha, 1).
// beta > 0 gives support [e^gamma, inf); beta < 0 gives (0, e^gamma].
struct Lp3Params {
  double alpha = 1.0;
  double beta = 1.0;
  double gamma = 0.0;

  void validate() const;
};

double lp3_pdf(const Lp3Params& p, double y);
double lp3_cdf(const Lp3Params& p, double y);
// 1 - cdf, computed from the complementary incomplete gamma function.
double lp3_sf(const Lp3Params& p, double y);
double lp3_quantile(const Lp3Params& p, double prob);
// Upper quantile: the y with lp3_sf(y) = tail.
double lp3_upper_quantile(const Lp3Params& p, double tail);

// E{Y^n} = e^{n gamma} (1 - n beta)^{-alpha}; throws DivergenceError when n beta >= 1.
double lp3_moment(const Lp3Params& p, int n);

// k ln(1 - beta) - ln(1 - k beta), accurate as beta -> 0.
double log_moment_gap(int k, double beta);

// Left-hand side of the beta equation, gap_3(beta) / gap_2(beta); equals 3 at beta = 0.
double beta_equation_lhs(double beta);

// Method-of-moments fit. Throws NoSolutionError when the moment ratio
// rho = (ln mu3 - 3 ln mu1) / (ln mu2 - 2 ln mu1) admits no LP3 law.
Lp3Params fit_from_moments(const MomentTriple& m);

}  // namespace cubicrx
