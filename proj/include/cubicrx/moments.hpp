#pragma once

#include <span>

#include "cubicrx/params.hpp"

namespace cubicrx {

// Raw moments E{Y^n | bit}, n = 1..3, of a receiver decision variable.
struct MomentTriple {
  double mu1 = 0.0;
  double mu2 = 0.0;
  double mu3 = 0.0;
  int bit = 0;
};

// Closed-form moments of the power-cubic decision variable
//   Y = (R k Gamma^2 / T_p) * int_{-T_p/2}^{T_p/2} |b a(t) + n(t)|^6 dt
// for sinc pulses in sinc-correlated complex Gaussian noise, valid for PRD >> 1.
// The bit enters as a multiplicative 0/1 factor on the received power.
double mean_decision(const SystemParams& sp, const DerivedParams& dp, int bit);
double second_moment(const SystemParams& sp, const DerivedParams& dp, int bit);
double variance_decision(const SystemParams& sp, const DerivedParams& dp, int bit);
double third_moment(const SystemParams& sp, const DerivedParams& dp, int bit);
MomentTriple decision_moments(const SystemParams& sp, const DerivedParams& dp, int bit);

// Mean and variance of the power-linear decision variable
//   Y1 = (R / T_p) * int |r|^2 dt,
// to the same PRD >> 1 order: beat term 4 sigma0^2 P_r, noise-noise 4 sigma0^4 PRD.
double linear_mean(const SystemParams& sp, const DerivedParams& dp, int bit);
double linear_variance(const SystemParams& sp, const DerivedParams& dp, int bit);

// E{X^n} for X ~ N(mean, sd^2), n in {2, 4, 6}.
double gaussian_raw_moment(double mean, double sd, int order);

// int sinc^p(u) du over a long window, p in {2, 4, 6} -> {1, 0.667, 0.55}.
double sinc_power_integral(int power);

namespace coefficients {

// One term r * sigma0^g * P_r^n * I0 of the variance expansion, where the
// double integral I0 equals `integral`, multiplied by PRD when `per_prd`.
struct VarianceTerm {
  double r;
  int sigma_power;
  int power_power;
  int h;
  int l;
  int x;
  double integral;
  bool per_prd;
};

std::span<const VarianceTerm> variance_terms();

// Coefficient of sigma0^12 * PRD in the variance as printed in the two places it
// appears; the value summed from the term table is ~35834.1.
inline constexpr double kSigma12PrintedMoment = 35834.0;
inline constexpr double kSigma12PrintedVariance = 35843.0;

// Sum of r * I0 over all terms with the given (sigma power, P_r power); the
// PRD-proportional terms are returned per unit PRD.
double variance_coefficient(int sigma_power, int power_power);

// One term coef * sigma0^sigma_power * P_r^power_power / PRD^prd_power of the
// third moment (in units of R^3 k^3 Gamma^6).
struct ThirdMomentTerm {
  double coef;
  int sigma_power;
  int power_power;
  int prd_power;
};

std::span<const ThirdMomentTerm> third_moment_terms();

}  // namespace coefficients

}  // namespace cubicrx
