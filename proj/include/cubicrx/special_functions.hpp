#pragma once

namespace cubicrx {

// ln Gamma(a) for a > 0 (Lanczos, g = 7).
double log_gamma(double a);

// Regularized incomplete gamma functions P(a, x) and Q(a, x) = 1 - P(a, x),
// each computed directly so that small tails keep full relative precision.
double reg_gamma_p(double a, double x);
double reg_gamma_q(double a, double x);

// Inverses in x: P(a, x) = p and Q(a, x) = q.
double reg_gamma_p_inv(double a, double p);
double reg_gamma_q_inv(double a, double q);

// Standard normal distribution function and its complement.
double normal_cdf(double z);
double normal_sf(double z);
// ln Phi(z), accurate far into the lower tail.
double log_normal_cdf(double z);

}  // namespace cubicrx
