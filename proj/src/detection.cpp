#include "cubicrx/detection.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "cubicrx/errors.hpp"
#include "cubicrx/numerics.hpp"
#include "cubicrx/special_functions.hpp"

namespace cubicrx {

NoisePhysics NoisePhysics::from(const SystemParams& sp, const DerivedParams& dp) {
  NoisePhysics np;
  np.t_r = sp.t_r;
  np.r_l = sp.r_l;
  np.t_p = dp.t_p;
  return np;
}

void NoisePhysics::validate() const {
  if (!(q_e > 0) || !(k_b > 0) || !(t_r > 0) || !(r_l > 0) || !(t_p > 0))
    throw std::domain_error("NoisePhysics: all parameters must be positive");
}

namespace {

constexpr double kInvSqrt2Pi = 0.39894228040143267794;
constexpr double kLowerTail = 1e-14;
constexpr double kUpperTail = 1e-12;
constexpr double kWindowSigmas = 10.0;
constexpr double kFarSigmas = 40.0;

const numerics::QuadratureOptions kConvolutionTolerance{1e-14, 1e-9, 20000};

// -du/dy for u(y) = Phi((x - y) / sqrt(V(y))), V(y) = 2 q y / T_p + 4 k T / (R T_p).
class ConditionalKernel {
 public:
  ConditionalKernel(double x, const NoisePhysics& np)
      : x_(x), shot_(np.q_e / np.t_p), thermal_(np.thermal_variance()) {}

  double variance(double y) const { return 2.0 * shot_ * y + thermal_; }

  double operator()(double y) const {
    const double v = variance(y);
    const double d = x_ - y;
    const double w = d * d / (2.0 * v);
    return kInvSqrt2Pi * (shot_ * (x_ + y) + thermal_) * std::pow(v, -1.5) * std::exp(-w);
  }

  // u(y) and 1 - u(y).
  double u(double y) const { return normal_cdf((x_ - y) / std::sqrt(variance(y))); }
  double one_minus_u(double y) const { return normal_sf((x_ - y) / std::sqrt(variance(y))); }

  // x is at least kFarSigmas conditional sigmas away from every y in [lo, hi].
  bool far_below(double lo, double hi) const {
    return x_ < lo && (lo - x_) > kFarSigmas * std::sqrt(variance(lo)) &&
           (hi - x_) > kFarSigmas * std::sqrt(variance(hi));
  }
  bool far_above(double hi) const {
    return x_ > hi && (x_ - hi) > kFarSigmas * std::sqrt(variance(hi));
  }

  std::array<double, 3> breaks() const {
    const double s = std::sqrt(variance(std::max(x_, 0.0)));
    return {x_ - kWindowSigmas * s, x_, x_ + kWindowSigmas * s};
  }

 private:
  double x_;
  double shot_;
  double thermal_;
};

struct Support {
  double lo;
  double hi;
};

Support integration_support(const Lp3Params& law) {
  return {std::max(0.0, lp3_quantile(law, kLowerTail)), lp3_upper_quantile(law, kUpperTail)};
}

}  // namespace

double cdf_shot_thermal(const Lp3Params& law, double x, const NoisePhysics& np) {
  law.validate();
  np.validate();
  if (!std::isfinite(x)) return x > 0 ? 1.0 : 0.0;
  const ConditionalKernel kernel(x, np);
  const auto [lo, hi] = integration_support(law);
  if (kernel.far_below(lo, hi)) return kernel.u(lo);
  if (kernel.far_above(hi)) return 1.0 - kernel.one_minus_u(hi);
  const auto breaks = kernel.breaks();
  const auto body = numerics::integrate(
      [&](double y) { return y > 0 ? kernel(y) * lp3_cdf(law, y) : 0.0; }, lo, hi, breaks,
      kConvolutionTolerance);
  // Beyond hi the LP3 cdf is 1 to within the tail budget, leaving u(hi).
  return std::clamp(body.value + kernel.u(hi), 0.0, 1.0);
}

double sf_shot_thermal(const Lp3Params& law, double x, const NoisePhysics& np) {
  law.validate();
  np.validate();
  if (!std::isfinite(x)) return x > 0 ? 0.0 : 1.0;
  const ConditionalKernel kernel(x, np);
  const auto [lo, hi] = integration_support(law);
  if (kernel.far_below(lo, hi)) return 1.0 - kernel.u(lo);
  if (kernel.far_above(hi)) return kernel.one_minus_u(hi);
  const auto breaks = kernel.breaks();
  // 1 - F(x) = (1 - u(lo)) + int_lo^hi (-u') S_Y dy, with S_Y = 1 below lo.
  const auto body = numerics::integrate(
      [&](double y) { return y > 0 ? kernel(y) * lp3_sf(law, y) : 0.0; }, lo, hi, breaks,
      kConvolutionTolerance);
  return std::clamp(kernel.one_minus_u(lo) + body.value, 0.0, 1.0);
}

BitConditionedLaw BitConditionedLaw::lp3(int bit, const Lp3Params& p) {
  p.validate();
  return {bit, p};
}

BitConditionedLaw BitConditionedLaw::lp3_with_shot_thermal(int bit, const Lp3Params& p,
                                                           const NoisePhysics& np) {
  p.validate();
  np.validate();
  return {bit, ShotThermal{p, np}};
}

BitConditionedLaw BitConditionedLaw::normal(int bit, double mean, double sd) {
  if (!(sd > 0)) throw std::domain_error("normal law: sd must be > 0");
  return {bit, Normal{mean, sd}};
}

BitConditionedLaw BitConditionedLaw::empirical(int bit, std::vector<double> samples) {
  if (samples.empty()) throw std::domain_error("empirical law: no samples");
  std::sort(samples.begin(), samples.end());
  return {bit, Empirical{std::make_shared<const std::vector<double>>(std::move(samples))}};
}

double BitConditionedLaw::cdf(double x) const {
  struct Visitor {
    double x;
    double operator()(const Lp3Params& p) const { return x <= 0 ? 0.0 : lp3_cdf(p, x); }
    double operator()(const ShotThermal& s) const { return cdf_shot_thermal(s.law, x, s.noise); }
    double operator()(const Normal& n) const { return normal_cdf((x - n.mean) / n.sd); }
    double operator()(const Empirical& e) const {
      const auto& v = *e.sorted;
      return static_cast<double>(std::upper_bound(v.begin(), v.end(), x) - v.begin()) /
             static_cast<double>(v.size());
    }
  };
  return std::visit(Visitor{x}, law_);
}

double BitConditionedLaw::sf(double x) const {
  struct Visitor {
    double x;
    double operator()(const Lp3Params& p) const { return x <= 0 ? 1.0 : lp3_sf(p, x); }
    double operator()(const ShotThermal& s) const { return sf_shot_thermal(s.law, x, s.noise); }
    double operator()(const Normal& n) const { return normal_sf((x - n.mean) / n.sd); }
    double operator()(const Empirical& e) const {
      const auto& v = *e.sorted;
      return static_cast<double>(v.end() - std::upper_bound(v.begin(), v.end(), x)) /
             static_cast<double>(v.size());
    }
  };
  return std::visit(Visitor{x}, law_);
}

double error_probability(const BitConditionedLaw& f0, const BitConditionedLaw& f1, double th) {
  return 0.5 * f0.sf(th) + 0.5 * f1.cdf(th);
}

ThresholdSearch ThresholdSearch::around_means(double mean0, double mean1) {
  if (!(mean0 > 0) || !(mean1 > 0)) throw std::domain_error("threshold search: means must be > 0");
  ThresholdSearch s;
  s.lo = mean0 / 100.0;
  s.hi = mean1 * 10.0;
  s.spacing = Spacing::log;
  return s;
}

ThresholdResult optimize_threshold(const BitConditionedLaw& f0, const BitConditionedLaw& f1,
                                   const ThresholdSearch& search) {
  const bool log_axis = search.spacing == ThresholdSearch::Spacing::log;
  if (!(search.hi > search.lo) || search.grid_points < 3 || (log_axis && !(search.lo > 0)))
    throw std::domain_error("threshold search: invalid bracket");
  // Search coordinate s maps to threshold via exp (log axis) or identity.
  auto to_th = [log_axis](double s) { return log_axis ? std::exp(s) : s; };
  const double s_lo = log_axis ? std::log(search.lo) : search.lo;
  const double s_hi = log_axis ? std::log(search.hi) : search.hi;
  const int n = search.grid_points;

  std::vector<double> grid(n), pe(n);
  for (int i = 0; i < n; ++i) {
    grid[i] = s_lo + (s_hi - s_lo) * i / (n - 1);
    pe[i] = error_probability(f0, f1, to_th(grid[i]));
  }
  const double interior_min = *std::min_element(pe.begin() + 1, pe.end() - 1);
  const auto [mn, mx] = std::minmax_element(pe.begin(), pe.end());
  if (*mx - *mn <= 1e-15) return {to_th(grid[n / 2]), pe[n / 2]};
  if (pe.front() < interior_min || pe.back() < interior_min)
    throw NumericalError("threshold search: error probability is smallest at a bracket end");

  int best = 1;
  for (int i = 1; i < n - 1; ++i)
    if (pe[i] < pe[best]) best = i;
  auto objective = [&](double s) { return error_probability(f0, f1, to_th(s)); };
  // On a log axis a relative width in the threshold is an absolute width in s.
  const double width =
      log_axis ? search.rel_width : search.rel_width * std::max(std::fabs(s_lo), std::fabs(s_hi));
  const auto [s_opt, pe_opt] = numerics::golden_minimize(objective, grid[best - 1], grid[best + 1], width);
  if (pe[best] < pe_opt) return {to_th(grid[best]), pe[best]};
  return {to_th(s_opt), pe_opt};
}

ThresholdResult gaussian_approx_ber(double m0, double v0, double m1, double v1) {
  if (!(v0 > 0) || !(v1 > 0)) throw std::domain_error("gaussian_approx_ber: variances must be > 0");
  const double s0 = std::sqrt(v0);
  const double s1 = std::sqrt(v1);
  const auto f0 = BitConditionedLaw::normal(0, m0, s0);
  const auto f1 = BitConditionedLaw::normal(1, m1, s1);
  ThresholdSearch search;
  search.spacing = ThresholdSearch::Spacing::linear;
  const double spread = 8.0 * std::max(s0, s1);
  search.lo = std::min(m0, m1) - spread;
  search.hi = std::max(m0, m1) + spread;
  return optimize_threshold(f0, f1, search);
}

}  // namespace cubicrx
