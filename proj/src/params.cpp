#include "cubicrx/params.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace cubicrx {

namespace {

void require(bool ok, const char* what) {
  if (!ok) throw std::domain_error(std::string("SystemParams: ") + what);
}

}  // namespace

void SystemParams::validate() const {
  require(std::isfinite(tau_c) && tau_c > 0, "tau_c must be > 0");
  require(std::isfinite(prd) && prd >= 1, "prd must be >= 1");
  require(std::isfinite(lambda) && lambda > 0, "lambda must be > 0");
  require(std::isfinite(g_amp) && g_amp >= 1, "g_amp must be >= 1");
  require(l1 > 0 && l1 <= 1, "l1 must be in (0, 1]");
  require(l2 > 0 && l2 <= 1, "l2 must be in (0, 1]");
  require(std::isfinite(n_sp) && n_sp >= 0, "n_sp must be >= 0");
  require(eta > 0 && eta <= 1, "eta must be in (0, 1]");
  require(std::isfinite(k) && k > 0, "k must be > 0");
  require(std::isfinite(gamma_nl) && gamma_nl > 0, "gamma_nl must be > 0");
  require(std::isfinite(p_r) && p_r >= 0, "p_r must be >= 0");
  require(std::isfinite(t_r) && t_r >= 0, "t_r must be >= 0");
  require(std::isfinite(r_l) && r_l > 0, "r_l must be > 0");
}

DerivedParams derive(const SystemParams& sp) {
  sp.validate();
  DerivedParams dp;
  dp.nu = constants::speed_of_light / sp.lambda;
  const double photon = constants::planck * dp.nu;
  dp.delta = sp.n_sp * (sp.g_amp - 1.0) * photon;
  dp.sigma0_sq = dp.delta * sp.l2 / (2.0 * sp.tau_c);
  dp.responsivity = sp.eta * constants::elementary_charge / photon;
  dp.t_p = sp.prd * sp.tau_c;
  return dp;
}

double dbm_to_watts(double dbm) {
  if (!std::isfinite(dbm)) throw std::domain_error("dbm_to_watts: non-finite input");
  return std::pow(10.0, (dbm - 30.0) / 10.0);
}

double watts_to_dbm(double watts) {
  if (!(watts > 0) || !std::isfinite(watts))
    throw std::domain_error("watts_to_dbm: power must be positive");
  return 10.0 * std::log10(watts) + 30.0;
}

}  // namespace cubicrx
