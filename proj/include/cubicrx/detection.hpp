#pragma once

#include <memory>
#include <span>
#include <variant>
#include <vector>

#include "cubicrx/lp3.hpp"
#include "cubicrx/params.hpp"

namespace cubicrx {

// Photodetector shot noise and front-end thermal noise over the detector
// bandwidth 1 / T_p, both Gaussian-approximated.
struct NoisePhysics {
  double q_e = constants::elementary_charge;
  double k_b = constants::boltzmann;
  double t_r = 300.0;
  double r_l = 1e3;
  double t_p = 5e-12;

  static NoisePhysics from(const SystemParams& sp, const DerivedParams& dp);

  double shot_variance(double y) const { return 2.0 * q_e * y / t_p; }
  double thermal_variance() const { return 4.0 * k_b * t_r / (r_l * t_p); }
  double total_variance(double y) const { return shot_variance(y) + thermal_variance(); }
  void validate() const;
};

// Distribution function of Y + shot + thermal noise when Y follows the LP3 law:
//   F(x) = int_0^inf (-du/dy) F_Y(y) dy,  u(y) = Phi((x - y) / sqrt(var(y))).
double cdf_shot_thermal(const Lp3Params& law, double x, const NoisePhysics& np);
// 1 - cdf_shot_thermal, evaluated as its own integral for tail accuracy.
double sf_shot_thermal(const Lp3Params& law, double x, const NoisePhysics& np);

// Distribution of the decision variable conditioned on the transmitted bit.
class BitConditionedLaw {
 public:
  struct Normal {
    double mean;
    double sd;
  };
  struct ShotThermal {
    Lp3Params law;
    NoisePhysics noise;
  };
  // Sorted samples; cdf is the right-continuous empirical distribution.
  struct Empirical {
    std::shared_ptr<const std::vector<double>> sorted;
  };

  static BitConditionedLaw lp3(int bit, const Lp3Params& p);
  static BitConditionedLaw lp3_with_shot_thermal(int bit, const Lp3Params& p, const NoisePhysics& np);
  static BitConditionedLaw normal(int bit, double mean, double sd);
  static BitConditionedLaw empirical(int bit, std::vector<double> samples);

  int bit() const { return bit_; }
  bool with_shot_thermal() const { return std::holds_alternative<ShotThermal>(law_); }

  double cdf(double x) const;
  double sf(double x) const;

 private:
  using Law = std::variant<Lp3Params, ShotThermal, Normal, Empirical>;
  BitConditionedLaw(int bit, Law law) : bit_(bit), law_(std::move(law)) {}

  int bit_;
  Law law_;
};

// PE = 1/2 (1 - F0(th)) + 1/2 F1(th).
double error_probability(const BitConditionedLaw& f0, const BitConditionedLaw& f1, double th);

struct ThresholdSearch {
  enum class Spacing { log, linear };
  double lo = 0.0;
  double hi = 1.0;
  Spacing spacing = Spacing::log;
  int grid_points = 256;
  double rel_width = 1e-10;

  // Log grid from bit-0 mean / 100 to bit-1 mean * 10.
  static ThresholdSearch around_means(double mean0, double mean1);
};

struct ThresholdResult {
  double threshold = 0.0;
  double pe = 0.5;
};

// Grid scan followed by golden-section refinement. Throws NumericalError when
// PE is strictly smaller at a bracket end than at every interior grid point.
ThresholdResult optimize_threshold(const BitConditionedLaw& f0, const BitConditionedLaw& f1,
                                   const ThresholdSearch& search);

// Optimized PE for two normal laws with the given means and variances.
ThresholdResult gaussian_approx_ber(double m0, double v0, double m1, double v1);

}  // namespace cubicrx
