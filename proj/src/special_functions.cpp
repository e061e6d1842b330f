#include "cubicrx/special_functions.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cubicrx/errors.hpp"
#include "cubicrx/params.hpp"

namespace cubicrx {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;
// Beyond this shape the Wilson-Hilferty cube-root normal approximation is used.
constexpr double kLargeShape = 1e8;

void check_args(double a, double x) {
  if (!(a > 0) || !std::isfinite(a)) throw std::domain_error("incomplete gamma: a must be > 0");
  if (!(x >= 0) || std::isnan(x)) throw std::domain_error("incomplete gamma: x must be >= 0");
}

// ln Gamma(a) - [(a - 1/2) ln a - a + ln(2 pi) / 2], asymptotic series for a >= 15.
double stirling_remainder(double a) {
  const double r = 1.0 / a;
  const double r2 = r * r;
  return r * (1.0 / 12 - r2 * (1.0 / 360 - r2 * (1.0 / 1260 - r2 * (1.0 / 1680 - r2 / 1188))));
}

// ln(x^a e^-x / Gamma(a)). For large a the leading terms are combined
// analytically so the result does not suffer from cancellation.
double log_prefactor(double a, double x) {
  if (a < 15.0) return a * std::log(x) - x - log_gamma(a);
  const double t = (x - a) / a;
  // ln(1 + t) - t; log1p is only accurate while 1 + t is not small.
  const double log1pmx = std::fabs(t) < 0.5 ? std::log1p(t) - t : std::log(x / a) - t;
  return a * log1pmx + 0.5 * std::log(a) - 0.91893853320467274178 - stirling_remainder(a);
}

double prefactor(double a, double x) { return std::exp(log_prefactor(a, x)); }

// P(a, x) by its power series, used for x < a + 1.
double series_p(double a, double x) {
  double ap = a;
  double term = 1.0 / a;
  double sum = term;
  for (int n = 0; n < kMaxIter; ++n) {
    ap += 1.0;
    term *= x / ap;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) return sum * prefactor(a, x);
  }
  throw NumericalError("incomplete gamma series did not converge");
}

// Q(a, x) by the Legendre continued fraction (modified Lentz), x >= a + 1.
double continued_fraction_q(double a, double x) {
  constexpr double tiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / tiny;
  double d = 1.0 / b;
  double h = d;
  for (int i = 1; i < kMaxIter; ++i) {
    const double an = -i * (i - a);
    b += 2.0;
    d = an * d + b;
    if (std::fabs(d) < tiny) d = tiny;
    c = b + an / c;
    if (std::fabs(c) < tiny) c = tiny;
    d = 1.0 / d;
    const double del = d * c;
    h *= del;
    if (std::fabs(del - 1.0) < kEps) return h * prefactor(a, x);
  }
  throw NumericalError("incomplete gamma continued fraction did not converge");
}

double wilson_hilferty_z(double a, double x) {
  const double c = 1.0 / (9.0 * a);
  return (std::cbrt(x / a) - (1.0 - c)) / std::sqrt(c);
}

}  // namespace

double log_gamma(double a) {
  if (!(a > 0)) throw std::domain_error("log_gamma: a must be > 0");
  static constexpr std::array<double, 9> kCoef{
      0.99999999999980993,  676.5203681218851,     -1259.1392167224028,
      771.32342877765313,   -176.61502916214059,   12.507343278686905,
      -0.13857109526572012, 9.9843695780195716e-6, 1.5056327351493116e-7};
  if (a < 0.5) {
    // Reflection keeps the series in its accurate range.
    return std::log(constants::pi / std::fabs(std::sin(constants::pi * a))) - log_gamma(1.0 - a);
  }
  const double z = a - 1.0;
  double s = kCoef[0];
  for (int i = 1; i < 9; ++i) s += kCoef[i] / (z + i);
  const double t = z + 7.5;
  return 0.91893853320467274178 + (z + 0.5) * std::log(t) - t + std::log(s);
}

double reg_gamma_p(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 0.0;
  if (std::isinf(x)) return 1.0;
  if (a > kLargeShape) return normal_cdf(wilson_hilferty_z(a, x));
  if (x < a + 1.0) return series_p(a, x);
  return 1.0 - continued_fraction_q(a, x);
}

double reg_gamma_q(double a, double x) {
  check_args(a, x);
  if (x == 0.0) return 1.0;
  if (std::isinf(x)) return 0.0;
  if (a > kLargeShape) return normal_sf(wilson_hilferty_z(a, x));
  if (x < a + 1.0) return 1.0 - series_p(a, x);
  return continued_fraction_q(a, x);
}

namespace {

// Solves P(a, x) = p (lower = true) or Q(a, x) = p (lower = false) by
// safeguarded Newton iteration on the log of the relevant tail.
double invert_gamma(double a, double p, bool lower) {
  if (!(a > 0)) throw std::domain_error("incomplete gamma inverse: a must be > 0");
  if (!(p >= 0 && p <= 1)) throw std::domain_error("incomplete gamma inverse: probability outside [0, 1]");
  if (p == 0.0) return lower ? 0.0 : std::numeric_limits<double>::infinity();
  if (p == 1.0) return lower ? std::numeric_limits<double>::infinity() : 0.0;

  // Work on whichever tail is smaller for accuracy.
  const bool use_lower = lower ? (p <= 0.5) : (p > 0.5);
  const double target = lower == use_lower ? p : 1.0 - p;
  auto tail = [&](double x) { return use_lower ? reg_gamma_p(a, x) : reg_gamma_q(a, x); };

  // Bracket: tail(lo) and tail(hi) straddle target.
  double lo = 0.0;
  double hi = std::max(1.0, a);
  while ((use_lower ? tail(hi) < target : tail(hi) > target)) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e300) throw NumericalError("incomplete gamma inverse: bracket overflow");
  }
  double x = 0.5 * (lo + hi);
  const double log_target = std::log(target);
  for (int it = 0; it < 200; ++it) {
    const double f = tail(x);
    if (use_lower ? f < target : f > target) lo = x; else hi = x;
    if (f == target) return x;
    // d/dx ln P = density / P ; d/dx ln Q = -density / Q
    const double log_density = log_prefactor(a, x) - std::log(x);
    double step = std::numeric_limits<double>::quiet_NaN();
    if (f > 0) {
      const double dlog = (use_lower ? 1.0 : -1.0) * std::exp(log_density - std::log(f));
      if (dlog != 0 && std::isfinite(dlog)) step = (std::log(f) - log_target) / dlog;
    }
    double next = x - step;
    if (!std::isfinite(next) || next <= lo || next >= hi) next = 0.5 * (lo + hi);
    if (std::fabs(next - x) <= 4 * kEps * x || hi - lo <= 4 * kEps * hi) return next;
    x = next;
  }
  return x;
}

}  // namespace

double reg_gamma_p_inv(double a, double p) { return invert_gamma(a, p, true); }

double reg_gamma_q_inv(double a, double q) { return invert_gamma(a, q, false); }

double normal_cdf(double z) { return 0.5 * std::erfc(-z / std::sqrt(2.0)); }

double normal_sf(double z) { return 0.5 * std::erfc(z / std::sqrt(2.0)); }

double log_normal_cdf(double z) {
  if (z > -30.0) return std::log(normal_cdf(z));
  // Asymptotic series of Mills' ratio.
  const double t = 1.0 / (z * z);
  const double series = 1.0 - t + 3.0 * t * t - 15.0 * t * t * t + 105.0 * t * t * t * t;
  return -0.5 * z * z - std::log(-z) - 0.91893853320467274178 + std::log(series);
}

}  // namespace cubicrx
