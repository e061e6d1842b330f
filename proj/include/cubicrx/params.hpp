#pragma once

namespace cubicrx {

namespace constants {
// CODATA 2018 exact values.
inline constexpr double planck = 6.62607015e-34;               // J s
inline constexpr double elementary_charge = 1.602176634e-19;   // C
inline constexpr double speed_of_light = 2.99792458e8;         // m/s
inline constexpr double boltzmann = 1.380649e-23;              // J/K
inline constexpr double pi = 3.14159265358979323846;
}  // namespace constants

// Physical and system configuration of the receiver chain. Defaults are the
// reference operating point: 100 fs sinc pulses, 1.55 um carrier, 50 dB EDFA,
// NOLM with k = 0.01 and Gamma = 0.1 / W, 300 K front end on 1 kOhm.
struct SystemParams {
  double tau_c = 100e-15;     // pulse duration [s]
  double prd = 50.0;          // processing ratio T_p / tau_c
  double lambda = 1.55e-6;    // wavelength [m]
  double g_amp = 1e5;         // amplifier power gain (linear)
  double l1 = 1.0;            // loss before the amplifier; informational only
  double l2 = 1.0;            // loss after the amplifier
  double n_sp = 1.1;          // spontaneous-emission coefficient
  double eta = 0.8;           // quantum efficiency
  double k = 0.01;            // preprocessor power transmittance
  double gamma_nl = 0.1;      // nonlinear phase coefficient [1/W]
  double p_r = 3.1622776601683795;  // received peak power [W] (35 dBm)
  double t_r = 300.0;         // receiver temperature [K]
  double r_l = 1e3;           // load resistance [Ohm]

  // Throws std::domain_error naming the first violated constraint.
  void validate() const;
};

struct DerivedParams {
  double sigma0_sq = 0.0;     // per-quadrature ASE variance [W]
  double responsivity = 0.0;  // [A/W]
  double t_p = 0.0;           // detector response time [s]
  double delta = 0.0;         // one-sided ASE spectral density [W/Hz]
  double nu = 0.0;            // optical frequency [Hz]
};

DerivedParams derive(const SystemParams& sp);

double dbm_to_watts(double dbm);
double watts_to_dbm(double watts);

}  // namespace cubicrx
