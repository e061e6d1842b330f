#include "cubicrx/lp3.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "cubicrx/errors.hpp"
#include "cubicrx/numerics.hpp"
#include "cubicrx/special_functions.hpp"

namespace cubicrx {

namespace {

constexpr double kLognormalBand = 1e-9;
constexpr double kBetaLowerLimit = -10.0;
constexpr double kBetaUpperLimit = 1.0 / 3.0 - 1e-9;

// Standardized gamma variate for y; negative values lie outside the support.
double standardize(const Lp3Params& p, double y) { return (std::log(y) - p.gamma) / p.beta; }

void check_y(double y) {
  if (!(y > 0)) throw std::domain_error("LP3: y must be > 0");
}

}  // namespace

void Lp3Params::validate() const {
  if (!(alpha > 0) || !std::isfinite(alpha)) throw std::domain_error("LP3: alpha must be > 0");
  if (beta == 0.0 || !std::isfinite(beta)) throw std::domain_error("LP3: beta must be nonzero");
  if (!std::isfinite(gamma)) throw std::domain_error("LP3: gamma must be finite");
}

double lp3_pdf(const Lp3Params& p, double y) {
  p.validate();
  check_y(y);
  const double z = standardize(p, y);
  if (z < 0) return 0.0;
  if (z == 0) {
    if (p.alpha > 1) return 0.0;
    if (p.alpha == 1) return 1.0 / (y * std::fabs(p.beta));
    throw SingularityError("LP3 density is unbounded at the support boundary for alpha < 1");
  }
  const double log_f = (p.alpha - 1.0) * std::log(z) - z - log_gamma(p.alpha) -
                       std::log(y * std::fabs(p.beta));
  return std::exp(log_f);
}

double lp3_cdf(const Lp3Params& p, double y) {
  p.validate();
  if (y == std::numeric_limits<double>::infinity()) return 1.0;
  check_y(y);
  const double z = standardize(p, y);
  if (p.beta > 0) return z <= 0 ? 0.0 : reg_gamma_p(p.alpha, z);
  return z <= 0 ? 1.0 : reg_gamma_q(p.alpha, z);
}

double lp3_sf(const Lp3Params& p, double y) {
  p.validate();
  if (y == std::numeric_limits<double>::infinity()) return 0.0;
  check_y(y);
  const double z = standardize(p, y);
  if (p.beta > 0) return z <= 0 ? 1.0 : reg_gamma_q(p.alpha, z);
  return z <= 0 ? 0.0 : reg_gamma_p(p.alpha, z);
}

double lp3_quantile(const Lp3Params& p, double prob) {
  p.validate();
  if (!(prob >= 0 && prob <= 1)) throw std::domain_error("LP3 quantile: probability outside [0, 1]");
  const double z = p.beta > 0 ? reg_gamma_p_inv(p.alpha, prob) : reg_gamma_q_inv(p.alpha, prob);
  return std::exp(p.gamma + p.beta * z);
}

double lp3_upper_quantile(const Lp3Params& p, double tail) {
  p.validate();
  if (!(tail >= 0 && tail <= 1)) throw std::domain_error("LP3 quantile: probability outside [0, 1]");
  const double z = p.beta > 0 ? reg_gamma_q_inv(p.alpha, tail) : reg_gamma_p_inv(p.alpha, tail);
  return std::exp(p.gamma + p.beta * z);
}

double lp3_moment(const Lp3Params& p, int n) {
  p.validate();
  if (n < 1) throw std::domain_error("LP3 moment: order must be >= 1");
  if (n * p.beta >= 1.0) {
    std::ostringstream msg;
    msg << "LP3 moment of order " << n << " diverges for beta = " << p.beta;
    throw DivergenceError(msg.str());
  }
  return std::exp(n * p.gamma - p.alpha * std::log1p(-n * p.beta));
}

double log_moment_gap(int k, double beta) {
  if (k * beta >= 1.0) throw std::domain_error("log_moment_gap: k * beta must be < 1");
  if (std::fabs(k * beta) < 1e-3) {
    // sum_{j>=2} (k^j - k) beta^j / j
    double sum = 0.0;
    double kp = k;
    double bp = beta;
    for (int j = 2; j <= 12; ++j) {
      kp *= k;
      bp *= beta;
      sum += (kp - k) * bp / j;
    }
    return sum;
  }
  return k * std::log1p(-beta) - std::log1p(-k * beta);
}

double beta_equation_lhs(double beta) {
  if (beta == 0.0) return 3.0;
  return log_moment_gap(3, beta) / log_moment_gap(2, beta);
}

Lp3Params fit_from_moments(const MomentTriple& m) {
  if (!(m.mu1 > 0) || !(m.mu2 > 0) || !(m.mu3 > 0) || !std::isfinite(m.mu3))
    throw NoSolutionError("LP3 fit: moments must be positive and finite");
  const double l1 = std::log(m.mu1);
  const double den = std::log(m.mu2) - 2.0 * l1;
  if (!(den > 0)) throw NoSolutionError("LP3 fit: mu2 <= mu1^2 (no spread)");
  const double num = std::log(m.mu3) - 3.0 * l1;
  const double rho = num / den;
  if (!(rho > 1)) throw NoSolutionError("LP3 fit: moment ratio rho <= 1");

  Lp3Params out;
  if (std::fabs(rho - 3.0) < kLognormalBand) {
    // Near-lognormal: the three-moment system degenerates.
    out.beta = rho >= 3.0 ? kLognormalBand : -kLognormalBand;
  } else if (rho > 3.0) {
    if (rho >= beta_equation_lhs(kBetaUpperLimit))
      throw NoSolutionError("LP3 fit: moment ratio beyond the admissible beta range");
    out.beta = numerics::brent_root([rho](double b) { return beta_equation_lhs(b) - rho; },
                                    0.0, kBetaUpperLimit);
  } else {
    if (rho <= beta_equation_lhs(kBetaLowerLimit)) {
      std::ostringstream msg;
      msg << "LP3 fit: moment ratio rho = " << rho << " below the admissible range (beta >= "
          << kBetaLowerLimit << ")";
      throw NoSolutionError(msg.str());
    }
    out.beta = numerics::brent_root([rho](double b) { return beta_equation_lhs(b) - rho; },
                                    kBetaLowerLimit, 0.0);
  }
  out.alpha = den / log_moment_gap(2, out.beta);
  out.gamma = l1 + out.alpha * std::log1p(-out.beta);
  return out;
}

}  // namespace cubicrx
