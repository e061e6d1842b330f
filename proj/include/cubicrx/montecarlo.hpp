#pragma once

#include <array>
#include <complex>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <vector>

#include "cubicrx/moments.hpp"
#include "cubicrx/params.hpp"

namespace cubicrx {

struct McConfig {
  std::size_t trials = 100000;
  std::uint64_t seed = 1;
  int oversample = 16;   // grid points per tau_c
  int window = 32;       // extra Nyquist coefficients beyond each end of the span
  unsigned threads = 0;  // 0: hardware concurrency

  void validate() const;
};

// Complex ASE envelope on a uniform grid covering [-span/2, span/2].
struct NoiseTrace {
  std::vector<std::complex<double>> samples;  // [sqrt(W)]
  double step = 0.0;                          // [s]
  double span = 0.0;                          // [s]
  std::uint64_t seed = 0;
  std::uint64_t trial = 0;

  double time(std::size_t i) const { return -0.5 * span + step * static_cast<double>(i); }
};

// Band-limited complex Gaussian noise with per-quadrature autocorrelation
// sigma0^2 sinc(tau / tau_c), synthesized as sum_m n_m sinc(t / tau_c - m) over
// i.i.d. Nyquist coefficients. Deterministic in (seed, trial).
NoiseTrace synth_noise(const DerivedParams& dp, double tau_c, double span, int oversample, int window,
                       std::uint64_t seed, std::uint64_t trial);

// Power-law receiver whose decision variable integrates |r|^(2 order):
// 1 linear, 2 quadratic (device factor 1), 3 cubic (NOLM, k Gamma^2).
enum class ReceiverOrder : int { linear = 1, quadratic = 2, cubic = 3 };

ReceiverOrder receiver_order(int order);

// One decision variable evaluated on every noise realization: the receiver
// order and the peak power of the sinc pulse added to the noise (0 for bit 0).
struct Probe {
  ReceiverOrder order = ReceiverOrder::cubic;
  double signal_power = 0.0;
};

// Single decision-variable draw for one trial.
double sample_decision(ReceiverOrder order, int bit, const SystemParams& sp, const DerivedParams& dp,
                       int oversample, int window, std::uint64_t seed, std::uint64_t trial);

// Evaluates all probes on the same noise realizations (trial t of every probe
// uses substream (seed, t)). Result[p][t] is probe p on trial t.
std::vector<std::vector<double>> sample_probes(const SystemParams& sp, const DerivedParams& dp,
                                               std::span<const Probe> probes, const McConfig& cfg);

struct SampleSet {
  ReceiverOrder order = ReceiverOrder::cubic;
  int bit = 0;
  std::vector<double> values;  // [A]
  McConfig config;
};

SampleSet generate_samples(ReceiverOrder order, int bit, const SystemParams& sp,
                           const DerivedParams& dp, const McConfig& cfg);

struct MomentEstimate {
  MomentTriple moments;
  std::array<double, 3> standard_error{};
};

// Raw sample moments with jackknife standard errors. Needs at least 1000 samples.
MomentEstimate estimate_moments(std::span<const double> values, int bit = 0);
MomentEstimate estimate_moments(const SampleSet& s);

struct EmpiricalBer {
  double threshold = 0.0;
  double pe = 0.5;
};

// Minimum over thresholds at sample midpoints of
// 1/2 P(s0 > th) + 1/2 P(s1 < th).
EmpiricalBer empirical_ber(std::span<const double> s0, std::span<const double> s1);
EmpiricalBer empirical_ber(const SampleSet& s0, const SampleSet& s1);

// CSV with columns trial,order,bit,value.
void write_samples_csv(std::ostream& os, std::span<const SampleSet> sets);
std::vector<SampleSet> read_samples_csv(std::istream& is);

}  // namespace cubicrx
