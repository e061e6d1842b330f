#include "cubicrx/moments.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace cubicrx {

namespace coefficients {

namespace {

// r_i, sigma power g_i, P_r power n_i, exponents (h, l, x) of
// sinc(u'-u'')^h sinc(u')^l sinc(u'')^x, and the double integral I0.
constexpr std::array<VarianceTerm, 28> kVarianceTerms{{
    {2304, 12, 0, 6, 0, 0, 0.55, true},
    {6912, 10, 1, 5, 1, 1, 0.52, false},
    {6912, 8, 2, 4, 2, 2, 0.394, false},
    {10368, 10, 1, 4, 2, 0, 0.64, false},
    {10368, 10, 1, 4, 0, 2, 0.64, false},
    {20736, 12, 0, 4, 0, 0, 0.667, true},
    {2688, 6, 3, 3, 3, 3, 0.343, false},
    {10368, 8, 2, 3, 3, 1, 0.45, false},
    {10368, 8, 2, 3, 1, 3, 0.45, false},
    {41472, 10, 1, 3, 1, 1, 0.657, false},
    {468, 4, 4, 2, 4, 4, 0.317, false},
    {3456, 6, 3, 2, 4, 2, 0.395, false},
    {2592, 8, 2, 2, 4, 0, 0.66, false},
    {3456, 6, 3, 2, 2, 4, 0.3945, false},
    {25920, 8, 2, 2, 2, 2, 0.5, false},
    {20736, 10, 1, 2, 2, 0, 1.0, false},
    {2592, 8, 2, 2, 0, 4, 0.665, false},
    {20736, 10, 1, 2, 0, 2, 1.0, false},
    {20736, 12, 0, 2, 0, 0, 1.0, true},
    {36, 2, 5, 1, 5, 5, 0.3043, false},
    {432, 4, 4, 1, 5, 3, 0.37, false},
    {864, 6, 3, 1, 5, 1, 0.55, false},
    {432, 4, 4, 1, 3, 5, 0.37, false},
    {5184, 6, 3, 1, 3, 3, 0.45, false},
    {10368, 8, 2, 1, 3, 1, 0.66, false},
    {864, 6, 3, 1, 1, 5, 0.55, false},
    {10368, 8, 2, 1, 1, 3, 0.66, false},
    {20736, 10, 1, 1, 1, 1, 1.0, false},
}};

constexpr std::array<ThirdMomentTerm, 24> kThirdMomentTerms{{
    {110592.0, 18, 0, 0},
    {5.16e6, 18, 0, 1},
    {4.977e5, 16, 1, 1},
    {8.3e4, 14, 2, 1},
    {3.8e3, 12, 3, 1},
    {1.0538e8, 18, 0, 2},
    {2.308e7, 16, 1, 2},
    {8.133e6, 14, 2, 2},
    {1.306e6, 12, 3, 2},
    {9.956e4, 10, 4, 2},
    {3.479e3, 8, 5, 2},
    {43.56, 6, 6, 2},
    {4.671e8, 16, 1, 3},
    {3.241e8, 14, 2, 3},
    {1.027e8, 12, 3, 3},
    {1.647e7, 10, 4, 3},
    {1.451e6, 8, 5, 3},
    {7.232e4, 6, 6, 3},
    {2.014e3, 4, 7, 3},
    {28.97, 2, 8, 3},
    {0.1664, 0, 9, 3},
}};

}  // namespace

std::span<const VarianceTerm> variance_terms() { return kVarianceTerms; }

std::span<const ThirdMomentTerm> third_moment_terms() { return kThirdMomentTerms; }

double variance_coefficient(int sigma_power, int power_power) {
  double sum = 0.0;
  for (const auto& t : kVarianceTerms)
    if (t.sigma_power == sigma_power && t.power_power == power_power) sum += t.r * t.integral;
  return sum;
}

}  // namespace coefficients

namespace {

void check_bit(int bit) {
  if (bit != 0 && bit != 1) throw std::domain_error("bit must be 0 or 1");
}

// Received signal power gated by the bit.
double gated_power(const SystemParams& sp, int bit) {
  check_bit(bit);
  return static_cast<double>(bit) * sp.p_r;
}

double cubic_gain(const SystemParams& sp, const DerivedParams& dp) {
  return dp.responsivity * sp.k * sp.gamma_nl * sp.gamma_nl;
}

}  // namespace

double mean_decision(const SystemParams& sp, const DerivedParams& dp, int bit) {
  const double s = gated_power(sp, bit);
  const double v = dp.sigma0_sq;
  const double prd = sp.prd;
  // 72 = 72 * int sinc^2, 12 ~ 18 * int sinc^4 (printed rounded), 0.55 = int sinc^6.
  const double poly =
      48.0 * v * v * v * prd + 72.0 * v * v * s + 12.0 * v * s * s + sinc_power_integral(6) * s * s * s;
  return cubic_gain(sp, dp) / prd * poly;
}

double variance_decision(const SystemParams& sp, const DerivedParams& dp, int bit) {
  const double s = gated_power(sp, bit);
  const double v = dp.sigma0_sq;
  const double sigma = std::sqrt(v);
  double sum = 0.0;
  for (const auto& t : coefficients::variance_terms()) {
    if (t.power_power > 0 && s == 0.0) continue;
    double term = t.r * t.integral * std::pow(sigma, t.sigma_power) * std::pow(s, t.power_power);
    if (t.per_prd) term *= sp.prd;
    sum += term;
  }
  const double g = cubic_gain(sp, dp);
  return g * g / (sp.prd * sp.prd) * sum;
}

double second_moment(const SystemParams& sp, const DerivedParams& dp, int bit) {
  const double m = mean_decision(sp, dp, bit);
  return variance_decision(sp, dp, bit) + m * m;
}

double third_moment(const SystemParams& sp, const DerivedParams& dp, int bit) {
  const double s = gated_power(sp, bit);
  const double sigma = std::sqrt(dp.sigma0_sq);
  double sum = 0.0;
  for (const auto& t : coefficients::third_moment_terms()) {
    if (t.power_power > 0 && s == 0.0) continue;
    sum += t.coef * std::pow(sigma, t.sigma_power) * std::pow(s, t.power_power) /
           std::pow(sp.prd, t.prd_power);
  }
  const double g = cubic_gain(sp, dp);
  return g * g * g * sum;
}

MomentTriple decision_moments(const SystemParams& sp, const DerivedParams& dp, int bit) {
  return {mean_decision(sp, dp, bit), second_moment(sp, dp, bit), third_moment(sp, dp, bit), bit};
}

double linear_mean(const SystemParams& sp, const DerivedParams& dp, int bit) {
  const double s = gated_power(sp, bit);
  return dp.responsivity / sp.prd * (2.0 * dp.sigma0_sq * sp.prd + sinc_power_integral(2) * s);
}

double linear_variance(const SystemParams& sp, const DerivedParams& dp, int bit) {
  const double s = gated_power(sp, bit);
  const double v = dp.sigma0_sq;
  const double r = dp.responsivity / sp.prd;
  return r * r * (4.0 * v * v * sp.prd + 4.0 * v * s);
}

double gaussian_raw_moment(double mean, double sd, int order) {
  const double a2 = mean * mean;
  const double s2 = sd * sd;
  switch (order) {
    case 2:
      return a2 + s2;
    case 4:
      return a2 * a2 + 6.0 * a2 * s2 + 3.0 * s2 * s2;
    case 6:
      return a2 * a2 * a2 + 15.0 * a2 * a2 * s2 + 45.0 * a2 * s2 * s2 + 15.0 * s2 * s2 * s2;
    default:
      throw std::domain_error("gaussian_raw_moment: order must be 2, 4 or 6");
  }
}

double sinc_power_integral(int power) {
  switch (power) {
    case 2:
      return 1.0;
    case 4:
      return 0.667;
    case 6:
      return 0.55;
    default:
      throw std::domain_error("sinc_power_integral: power must be 2, 4 or 6");
  }
}

}  // namespace cubicrx
