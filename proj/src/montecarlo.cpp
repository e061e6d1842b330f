#include "cubicrx/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <istream>
#include <map>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>

#include "cubicrx/errors.hpp"

namespace cubicrx {

namespace {

constexpr int kMinOversample = 8;
constexpr int kMinWindow = 16;

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = constants::pi * x;
  return std::sin(px) / px;
}

void check_grid(int oversample, int window) {
  if (oversample < kMinOversample)
    throw ConfigError("oversampling must be at least " + std::to_string(kMinOversample));
  if (window < kMinWindow) throw ConfigError("sinc window must be at least " + std::to_string(kMinWindow));
}

// Number of grid steps of size tau_c / M across a span of `units` tau_c.
long long grid_intervals(double units, int oversample) {
  const double steps = units * oversample;
  const double rounded = std::round(steps);
  if (!(rounded > 0.0) || std::fabs(steps - rounded) > 1e-9 * std::max(1.0, steps))
    throw ConfigError("span times oversampling must be a positive integer number of steps");
  return static_cast<long long>(rounded);
}

std::mt19937_64 trial_engine(std::uint64_t seed, std::uint64_t trial) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(trial), static_cast<std::uint32_t>(trial >> 32)};
  return std::mt19937_64(seq);
}

// Evaluates sum_m n_m sinc(u_j - m) on u_j = -J / (2M) + j / M, j = 0..J.
// Grid offsets from the first coefficient are multiples of 1 / (2M), so each
// point uses one of 2M precomputed sinc rows and a contiguous coefficient slice.
class SincSynthesizer {
 public:
  SincSynthesizer(long long intervals, int oversample, int window) : intervals_(intervals), m_(oversample) {
    const double half = 0.5 * static_cast<double>(intervals) / oversample;
    m_lo_ = static_cast<long long>(std::floor(-half)) - window;
    const long long m_hi = static_cast<long long>(std::ceil(half)) + window;
    n_coef_ = static_cast<std::size_t>(m_hi - m_lo_ + 1);

    const long long phases = 2LL * oversample;
    const std::size_t row = 2 * n_coef_ - 1;
    table_.resize(static_cast<std::size_t>(phases) * row);
    for (long long p = 0; p < phases; ++p) {
      const double phi = static_cast<double>(p) / static_cast<double>(phases);
      for (std::size_t t = 0; t < row; ++t)
        table_[static_cast<std::size_t>(p) * row + t] =
            sinc(phi + static_cast<double>(n_coef_) - 1.0 - static_cast<double>(t));
    }

    const std::size_t points = static_cast<std::size_t>(intervals) + 1;
    offset_.resize(points);
    for (std::size_t j = 0; j < points; ++j) {
      const long long twice = -intervals + 2LL * static_cast<long long>(j) - phases * m_lo_;
      const long long a = twice / phases;
      const long long p = twice % phases;
      offset_[j] = static_cast<std::size_t>(p) * row + (n_coef_ - 1 - static_cast<std::size_t>(a));
    }
  }

  std::size_t coefficients() const { return n_coef_; }
  std::size_t points() const { return offset_.size(); }
  double u(std::size_t j) const {
    return (-0.5 * static_cast<double>(intervals_) + static_cast<double>(j)) / m_;
  }

  void draw(std::uint64_t seed, std::uint64_t trial, double sigma, std::vector<double>& re,
            std::vector<double>& im) const {
    re.resize(n_coef_);
    im.resize(n_coef_);
    auto eng = trial_engine(seed, trial);
    std::normal_distribution<double> z;
    for (std::size_t i = 0; i < n_coef_; ++i) {
      re[i] = sigma * z(eng);
      im[i] = sigma * z(eng);
    }
  }

  void evaluate(const std::vector<double>& re, const std::vector<double>& im, std::vector<double>& out_re,
                std::vector<double>& out_im) const {
    out_re.resize(points());
    out_im.resize(points());
    const double* pr = re.data();
    const double* pi = im.data();
    const std::size_t n = n_coef_;
    for (std::size_t j = 0; j < points(); ++j) {
      const double* row = table_.data() + offset_[j];
      double sr = 0.0;
      double si = 0.0;
#pragma omp simd reduction(+ : sr, si)
      for (std::size_t i = 0; i < n; ++i) {
        sr += row[i] * pr[i];
        si += row[i] * pi[i];
      }
      out_re[j] = sr;
      out_im[j] = si;
    }
  }

 private:
  long long intervals_;
  int m_;
  long long m_lo_ = 0;
  std::size_t n_coef_ = 0;
  std::vector<double> table_;
  std::vector<std::size_t> offset_;
};

double order_prefactor(ReceiverOrder order, const SystemParams& sp, const DerivedParams& dp) {
  switch (order) {
    case ReceiverOrder::linear:
    case ReceiverOrder::quadratic:
      return dp.responsivity / sp.prd;
    case ReceiverOrder::cubic:
      return dp.responsivity * sp.k * sp.gamma_nl * sp.gamma_nl / sp.prd;
  }
  throw std::invalid_argument("unknown receiver order");
}

// Decision variables of every probe for trials in [first, last).
class ProbeEvaluator {
 public:
  ProbeEvaluator(const SystemParams& sp, const DerivedParams& dp, std::span<const Probe> probes, int oversample,
                 int window)
      : synth_(grid_intervals(sp.prd, oversample), oversample, window),
        sigma_(std::sqrt(dp.sigma0_sq)),
        probes_(probes.begin(), probes.end()) {
    pulse_.resize(synth_.points());
    weight_.assign(synth_.points(), 1.0);
    weight_.front() = weight_.back() = 0.5;
    for (std::size_t j = 0; j < synth_.points(); ++j) pulse_[j] = sinc(synth_.u(j));
    for (const auto& p : probes_) {
      if (!(p.signal_power >= 0.0)) throw std::invalid_argument("probe signal power must be nonnegative");
      amplitude_.push_back(std::sqrt(p.signal_power));
      scale_.push_back(order_prefactor(p.order, sp, dp) / oversample);
    }
  }

  void run(std::uint64_t seed, std::size_t first, std::size_t last, std::vector<std::vector<double>>& out) const {
    std::vector<double> cre, cim, nre, nim;
    for (std::size_t t = first; t < last; ++t) {
      synth_.draw(seed, t, sigma_, cre, cim);
      synth_.evaluate(cre, cim, nre, nim);
      for (std::size_t k = 0; k < probes_.size(); ++k)
        out[k][t] = scale_[k] * integrate(probes_[k].order, amplitude_[k], nre, nim);
    }
  }

 private:
  double integrate(ReceiverOrder order, double amp, const std::vector<double>& nre,
                   const std::vector<double>& nim) const {
    const std::size_t n = nre.size();
    const double* re = nre.data();
    const double* im = nim.data();
    const double* a = pulse_.data();
    const double* w = weight_.data();
    double acc = 0.0;
    switch (order) {
      case ReceiverOrder::linear:
#pragma omp simd reduction(+ : acc)
        for (std::size_t j = 0; j < n; ++j) {
          const double x = re[j] + amp * a[j];
          acc += w[j] * (x * x + im[j] * im[j]);
        }
        break;
      case ReceiverOrder::quadratic:
#pragma omp simd reduction(+ : acc)
        for (std::size_t j = 0; j < n; ++j) {
          const double x = re[j] + amp * a[j];
          const double p = x * x + im[j] * im[j];
          acc += w[j] * p * p;
        }
        break;
      case ReceiverOrder::cubic:
#pragma omp simd reduction(+ : acc)
        for (std::size_t j = 0; j < n; ++j) {
          const double x = re[j] + amp * a[j];
          const double p = x * x + im[j] * im[j];
          acc += w[j] * p * p * p;
        }
        break;
    }
    return acc;
  }

  SincSynthesizer synth_;
  double sigma_;
  std::vector<Probe> probes_;
  std::vector<double> pulse_, weight_, amplitude_, scale_;
};

unsigned worker_count(unsigned requested, std::size_t trials) {
  unsigned n = requested ? requested : std::max(1u, std::thread::hardware_concurrency());
  constexpr std::size_t kMinTrialsPerWorker = 256;
  const std::size_t cap = std::max<std::size_t>(1, trials / kMinTrialsPerWorker);
  return static_cast<unsigned>(std::min<std::size_t>(n, cap));
}

}  // namespace

void McConfig::validate() const {
  check_grid(oversample, window);
  if (trials == 0) throw ConfigError("trials must be positive");
}

ReceiverOrder receiver_order(int order) {
  if (order < 1 || order > 3) throw ConfigError("receiver order must be 1, 2 or 3");
  return static_cast<ReceiverOrder>(order);
}

NoiseTrace synth_noise(const DerivedParams& dp, double tau_c, double span, int oversample, int window,
                       std::uint64_t seed, std::uint64_t trial) {
  check_grid(oversample, window);
  if (!(tau_c > 0.0)) throw ConfigError("tau_c must be positive");
  if (!(dp.sigma0_sq >= 0.0)) throw ConfigError("sigma0^2 must be nonnegative");
  const SincSynthesizer synth(grid_intervals(span / tau_c, oversample), oversample, window);

  std::vector<double> cre, cim, re, im;
  synth.draw(seed, trial, std::sqrt(dp.sigma0_sq), cre, cim);
  synth.evaluate(cre, cim, re, im);

  NoiseTrace trace;
  trace.samples.resize(re.size());
  for (std::size_t j = 0; j < re.size(); ++j) trace.samples[j] = {re[j], im[j]};
  trace.step = tau_c / oversample;
  trace.span = span;
  trace.seed = seed;
  trace.trial = trial;
  return trace;
}

std::vector<std::vector<double>> sample_probes(const SystemParams& sp, const DerivedParams& dp,
                                               std::span<const Probe> probes, const McConfig& cfg) {
  cfg.validate();
  const ProbeEvaluator eval(sp, dp, probes, cfg.oversample, cfg.window);
  std::vector<std::vector<double>> out(probes.size(), std::vector<double>(cfg.trials));

  const unsigned workers = worker_count(cfg.threads, cfg.trials);
  if (workers <= 1) {
    eval.run(cfg.seed, 0, cfg.trials, out);
    return out;
  }
  // Workers write disjoint trial ranges of the preallocated output.
  std::vector<std::thread> pool;
  const std::size_t chunk = (cfg.trials + workers - 1) / workers;
  for (unsigned w = 0; w < workers; ++w) {
    const std::size_t first = std::min(cfg.trials, w * chunk);
    const std::size_t last = std::min(cfg.trials, first + chunk);
    pool.emplace_back([&, first, last] { eval.run(cfg.seed, first, last, out); });
  }
  for (auto& t : pool) t.join();
  return out;
}

double sample_decision(ReceiverOrder order, int bit, const SystemParams& sp, const DerivedParams& dp,
                       int oversample, int window, std::uint64_t seed, std::uint64_t trial) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
  check_grid(oversample, window);
  const Probe probe{order, bit * sp.p_r};
  const ProbeEvaluator eval(sp, dp, std::span<const Probe>(&probe, 1), oversample, window);
  std::vector<std::vector<double>> out(1, std::vector<double>(trial + 1));
  eval.run(seed, trial, trial + 1, out);
  return out[0][trial];
}

SampleSet generate_samples(ReceiverOrder order, int bit, const SystemParams& sp, const DerivedParams& dp,
                           const McConfig& cfg) {
  if (bit != 0 && bit != 1) throw std::invalid_argument("bit must be 0 or 1");
  const Probe probe{order, bit * sp.p_r};
  auto values = sample_probes(sp, dp, std::span<const Probe>(&probe, 1), cfg);
  return SampleSet{order, bit, std::move(values[0]), cfg};
}

MomentEstimate estimate_moments(std::span<const double> values, int bit) {
  constexpr std::size_t kMinSamples = 1000;
  if (values.size() < kMinSamples)
    throw std::invalid_argument("moment estimation needs at least 1000 samples");
  const double n = static_cast<double>(values.size());

  MomentEstimate est;
  std::array<long double, 3> sum{}, sum_sq{};
  for (double v : values) {
    long double p = v;
    for (int k = 0; k < 3; ++k) {
      sum[k] += p;
      sum_sq[k] += p * p;
      p *= v;
    }
  }
  std::array<double, 3> mean{};
  for (int k = 0; k < 3; ++k) {
    mean[k] = static_cast<double>(sum[k] / n);
    // The jackknife error of a sample mean reduces to s / sqrt(N).
    const long double var = std::max<long double>(0.0L, (sum_sq[k] - sum[k] * sum[k] / n) / (n - 1.0));
    est.standard_error[k] = static_cast<double>(std::sqrt(var / n));
  }
  est.moments = MomentTriple{mean[0], mean[1], mean[2], bit};
  return est;
}

MomentEstimate estimate_moments(const SampleSet& s) { return estimate_moments(s.values, s.bit); }

EmpiricalBer empirical_ber(std::span<const double> s0, std::span<const double> s1) {
  if (s0.empty() || s1.empty()) throw std::invalid_argument("empirical BER needs two nonempty sample sets");
  std::vector<double> a(s0.begin(), s0.end()), b(s1.begin(), s1.end());
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  const double n0 = static_cast<double>(a.size());
  const double n1 = static_cast<double>(b.size());

  // Walk thresholds upward; between distinct merged values the counts are fixed.
  std::size_t i = 0, j = 0;
  EmpiricalBer best{std::min(a.front(), b.front()), 0.5};
  while (i < a.size() || j < b.size()) {
    const double v = (j == b.size() || (i < a.size() && a[i] <= b[j])) ? a[i] : b[j];
    while (i < a.size() && a[i] == v) ++i;
    while (j < b.size() && b[j] == v) ++j;
    if (i == a.size() && j == b.size()) break;
    const double next = (j == b.size() || (i < a.size() && a[i] <= b[j])) ? a[i] : b[j];
    const double pe = 0.5 * (n0 - static_cast<double>(i)) / n0 + 0.5 * static_cast<double>(j) / n1;
    if (pe < best.pe) best = {0.5 * (v + next), pe};
  }
  return best;
}

EmpiricalBer empirical_ber(const SampleSet& s0, const SampleSet& s1) {
  if (s0.order != s1.order) throw std::invalid_argument("sample sets come from different receivers");
  return empirical_ber(s0.values, s1.values);
}

void write_samples_csv(std::ostream& os, std::span<const SampleSet> sets) {
  os << "# schema=1\ntrial,order,bit,value\n";
  char buf[64];
  for (const auto& s : sets) {
    for (std::size_t t = 0; t < s.values.size(); ++t) {
      std::snprintf(buf, sizeof buf, "%.17g", s.values[t]);
      os << t << ',' << static_cast<int>(s.order) << ',' << s.bit << ',' << buf << '\n';
    }
  }
}

std::vector<SampleSet> read_samples_csv(std::istream& is) {
  std::map<std::pair<int, int>, SampleSet> sets;
  std::string line;
  bool header = false;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      if (line != "trial,order,bit,value") throw ConfigError("sample file: unexpected header '" + line + "'");
      header = true;
      continue;
    }
    std::istringstream ss(line);
    std::string f[4];
    for (auto& field : f)
      if (!std::getline(ss, field, ',')) throw ConfigError("sample file: short row at line " + std::to_string(lineno));
    try {
      const int order = std::stoi(f[1]);
      const int bit = std::stoi(f[2]);
      if (bit != 0 && bit != 1) throw ConfigError("sample file: bit must be 0 or 1 at line " + std::to_string(lineno));
      auto& s = sets[{order, bit}];
      s.order = receiver_order(order);
      s.bit = bit;
      s.values.push_back(std::stod(f[3]));
    } catch (const std::logic_error& e) {
      if (dynamic_cast<const ConfigError*>(&e)) throw;
      throw ConfigError("sample file: bad row at line " + std::to_string(lineno));
    }
  }
  if (!header) throw ConfigError("sample file: missing header");
  std::vector<SampleSet> out;
  for (auto& [key, s] : sets) {
    s.config.trials = s.values.size();
    out.push_back(std::move(s));
  }
  return out;
}

}  // namespace cubicrx
