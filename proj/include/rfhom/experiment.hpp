#pragma once

// Sweeps over amplitude pairs, relative phases, delays and noise shots.
//
// A sweep point is one (delay, amplitude pair) tuple. Every point draws its
// noise from RandomStream(seed, point id) and reports phase/shot-averaged
// moments plus the covariance of those averages. Points are folded into one
// CorrelationAccumulator per delay with weight c_j c_k (or 1 for PhAC pairs);
// accumulators are plain sums, so shards merge exactly.

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <istream>
#include <numbers>
#include <optional>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "rfhom/decomposition.hpp"
#include "rfhom/error.hpp"
#include "rfhom/interference.hpp"
#include "rfhom/random.hpp"
#include "rfhom/waveform.hpp"

namespace rfhom {

enum class SweepMode { phac_pairs, conditional };
enum class Normalization { raw, baseline };

constexpr std::string_view to_string(SweepMode m) noexcept {
  return m == SweepMode::phac_pairs ? "phac_pairs" : "conditional";
}
constexpr std::string_view to_string(Normalization n) noexcept {
  return n == Normalization::raw ? "raw" : "baseline";
}

/// `count` delays spread uniformly over [-max_abs, max_abs], in units of tau.
inline std::vector<double> uniform_delays(int count, double max_abs) {
  require(count >= 1, ErrorCode::InvalidArgument, "delay count must be >= 1");
  std::vector<double> d(static_cast<std::size_t>(count));
  if (count == 1) {
    d[0] = 0.0;
    return d;
  }
  for (int i = 0; i < count; ++i)
    d[static_cast<std::size_t>(i)] = -max_abs + 2.0 * max_abs * i / (count - 1);
  return d;
}

struct SweepConfig {
  PulseSpec pulse;
  NoiseModel noise;
  int phase_count = 16;
  std::vector<double> delay_grid = uniform_delays(201, 1.5);  // units of tau
  int shots_per_point = 1;
  SweepMode mode = SweepMode::phac_pairs;
  AmplitudeGrid amplitudes = AmplitudeGrid::standard();  // phac_pairs
  std::optional<Decomposition> decomposition;            // conditional
  Normalization normalization = Normalization::baseline;
  double amplitude_scale = 1.0;    // absolute amplitude = scale * relative amplitude
  double record_length_tau = 3.0;  // record length in units of tau
  double baseline_min_delay = 1.2; // |delay| / tau at or above which points form the baseline
  bool subtract_noise_baseline = false;
  bool gate_to_pulses = false;
  unsigned threads = 0;  // 0 = hardware concurrency; never affects results

  double record_length() const { return record_length_tau * pulse.tau(); }

  void validate() const {
    pulse.validate();
    require(phase_count >= 2, ErrorCode::InvalidArgument, "phase_count must be >= 2");
    require(shots_per_point >= 1, ErrorCode::InvalidArgument, "shots_per_point must be >= 1");
    require(!delay_grid.empty(), ErrorCode::InvalidArgument, "delay grid is empty");
    require(std::is_sorted(delay_grid.begin(), delay_grid.end()), ErrorCode::InvalidArgument,
            "delay grid must be sorted");
    require(noise.source_variance >= 0.0 && noise.coupler_variance >= 0.0,
            ErrorCode::InvalidArgument, "noise variances must be >= 0");
    require(amplitude_scale > 0.0, ErrorCode::InvalidArgument, "amplitude_scale must be > 0");
    if (mode == SweepMode::conditional)
      require(decomposition.has_value(), ErrorCode::InvalidArgument,
              "conditional sweep needs a decomposition");
  }
};

namespace detail {

inline std::uint64_t fnv1a(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

}  // namespace detail

/// Stable 64-bit hex digest of everything that changes sweep results.
inline std::string config_digest(const SweepConfig& c) {
  std::ostringstream os;
  const auto put = [&os](const char* key, double v) { os << key << '=' << detail::exact(v) << ';'; };
  put("carrier", c.pulse.carrier_freq);
  os << "cycles=" << c.pulse.cycles_per_pulse << ";spc=" << c.pulse.samples_per_cycle << ';';
  put("src_var", c.noise.source_variance);
  put("cpl_var", c.noise.coupler_variance);
  os << "seed=" << c.noise.seed << ";phases=" << c.phase_count << ";shots=" << c.shots_per_point
     << ";mode=" << to_string(c.mode) << ';';
  for (double d : c.delay_grid) put("d", d);
  if (c.mode == SweepMode::phac_pairs) {
    for (double a : c.amplitudes.values()) put("a", a);
  } else if (c.decomposition) {
    for (std::size_t j = 0; j < c.decomposition->grid.size(); ++j) {
      put("a", c.decomposition->grid[j]);
      put("c", c.decomposition->coefficients[j]);
    }
  }
  put("scale", c.amplitude_scale);
  put("record", c.record_length_tau);
  put("baseline", c.baseline_min_delay);
  os << "norm=" << to_string(c.normalization) << ';';
  os << "sub=" << c.subtract_noise_baseline << ";gate=" << c.gate_to_pulses;
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx",
                static_cast<unsigned long long>(detail::fnv1a(os.str())));
  return buf;
}

/// Phase/shot-averaged moments of one point, and the covariance of those
/// averages (entries 11, 22, 33, 12, 13, 23 over (E1, E2, E1E2)). The
/// covariance is built from within-phase shot scatter only, so the
/// deterministic phase dependence does not count as noise.
struct PointStats {
  MomentTriple mean;
  std::array<double, 6> covariance{};
  long shots = 0;
};

namespace detail {

/// Relative delay rounded to whole samples.
inline long delay_in_samples(const PulseSpec& pulse, double delta_tau_seconds) {
  return std::lround(delta_tau_seconds / pulse.sample_period());
}

inline double window_energy(const ComplexTrace& t, std::size_t begin, std::size_t end) {
  double e = 0.0;
  for (std::size_t k = begin; k < end; ++k) e += std::norm(t.samples[k]);
  return e * t.sample_period;
}

}  // namespace detail

/// Full point measurement: both pulses are shifted symmetrically by half the
/// relative delay, pulse 2 carries the relative phase, and each of
/// `phase_count` phases on [-pi, pi) is repeated for `shots_per_point` noise
/// realizations. Energies are in units of tau.
inline PointStats measure_point(double a, double b, double delta_tau, const SweepConfig& config,
                                RandomStream& stream) {
  require(a >= 0.0 && b >= 0.0, ErrorCode::InvalidArgument, "amplitudes must be >= 0");
  const PulseSpec& pulse = config.pulse;
  const double dt = pulse.sample_period();
  const double tau = pulse.tau();
  const double record = config.record_length();
  const int len = record_samples(pulse, record);

  const long d = detail::delay_in_samples(pulse, delta_tau);
  const long shift1 = -static_cast<long>(std::floor(static_cast<double>(d) / 2.0));
  const long shift2 = d + shift1;
  const int start1 = pulse_start_index(pulse, len, shift1);
  const int start2 = pulse_start_index(pulse, len, shift2);

  std::size_t win_begin = 0;
  std::size_t win_end = static_cast<std::size_t>(len);
  if (config.gate_to_pulses) {
    win_begin = static_cast<std::size_t>(std::min(start1, start2));
    win_end = static_cast<std::size_t>(std::max(start1, start2) + pulse.samples_per_pulse());
  }
  const double noise_energy =
      2.0 * (config.noise.source_variance + config.noise.coupler_variance) *
      static_cast<double>(win_end - win_begin) * dt;
  const double offset = config.subtract_noise_baseline ? noise_energy : 0.0;

  const ComplexTrace clean1 = synthesize(pulse, a, 0.0, static_cast<double>(shift1) * dt, record);
  const int phases = config.phase_count;
  const int shots = config.shots_per_point;

  PointStats stats;
  std::array<double, 3> mean_sum{};
  std::array<double, 6> cov_sum{};
  for (int p = 0; p < phases; ++p) {
    const double phi = -std::numbers::pi + 2.0 * std::numbers::pi * p / phases;
    const ComplexTrace clean2 = synthesize(pulse, b, phi, static_cast<double>(shift2) * dt, record);

    std::array<double, 3> s{};
    std::array<double, 6> ss{};
    for (int shot = 0; shot < shots; ++shot) {
      ComplexTrace in1 = clean1;
      ComplexTrace in2 = clean2;
      add_noise_inplace(in1.samples, config.noise.source_variance, stream);
      add_noise_inplace(in2.samples, config.noise.source_variance, stream);
      CouplerOutput out = hybrid_couple(in1, in2);
      add_noise_inplace(out.out1.samples, config.noise.coupler_variance, stream);
      add_noise_inplace(out.out2.samples, config.noise.coupler_variance, stream);
      const double e1 = (detail::window_energy(out.out1, win_begin, win_end) - offset) / tau;
      const double e2 = (detail::window_energy(out.out2, win_begin, win_end) - offset) / tau;
      const std::array<double, 3> v{e1, e2, e1 * e2};
      for (int i = 0; i < 3; ++i) s[i] += v[i];
      ss[0] += v[0] * v[0];
      ss[1] += v[1] * v[1];
      ss[2] += v[2] * v[2];
      ss[3] += v[0] * v[1];
      ss[4] += v[0] * v[2];
      ss[5] += v[1] * v[2];
    }
    const double n = shots;
    std::array<double, 3> m{};
    for (int i = 0; i < 3; ++i) {
      m[i] = s[i] / n;
      mean_sum[i] += m[i];
    }
    if (shots >= 2) {
      // Sample covariance within this phase, divided by the shot count.
      constexpr std::array<std::array<int, 2>, 6> idx{{{0, 0}, {1, 1}, {2, 2}, {0, 1}, {0, 2}, {1, 2}}};
      for (int k = 0; k < 6; ++k) {
        const double c = (ss[k] - n * m[idx[k][0]] * m[idx[k][1]]) / (n - 1.0);
        cov_sum[k] += c / n;
      }
    }
  }
  const double P = phases;
  stats.mean = {mean_sum[0] / P, mean_sum[1] / P, mean_sum[2] / P};
  for (int k = 0; k < 6; ++k) stats.covariance[k] = cov_sum[k] / (P * P);
  stats.shots = static_cast<long>(phases) * shots;
  return stats;
}

/// Phase- and shot-averaged (E1, E2, E1 E2) in units of tau.
inline MomentTriple run_point(double a, double b, double delta_tau, const SweepConfig& config,
                              RandomStream& stream) {
  return measure_point(a, b, delta_tau, config, stream).mean;
}

/// Signed-weighted sums of point moments at one delay.
struct CorrelationAccumulator {
  std::string config_digest;
  double w_sum = 0.0;
  double we1_sum = 0.0;
  double we2_sum = 0.0;
  double we1e2_sum = 0.0;
  long shot_count = 0;
  std::array<double, 6> w2_covariance_sum{};  // sum of w^2 * covariance of the point means

  void add(double weight, const PointStats& p) {
    w_sum += weight;
    we1_sum += weight * p.mean.e1_mean;
    we2_sum += weight * p.mean.e2_mean;
    we1e2_sum += weight * p.mean.e1e2_mean;
    shot_count += p.shots;
    for (int k = 0; k < 6; ++k) w2_covariance_sum[k] += weight * weight * p.covariance[k];
  }
};

inline CorrelationAccumulator merge_accumulators(std::span<const CorrelationAccumulator> parts) {
  require(!parts.empty(), ErrorCode::InvalidArgument, "nothing to merge");
  CorrelationAccumulator out;
  out.config_digest = parts.front().config_digest;
  for (const auto& p : parts) {
    require(p.config_digest == out.config_digest, ErrorCode::ConfigMismatch,
            "accumulators come from different configurations");
    out.w_sum += p.w_sum;
    out.we1_sum += p.we1_sum;
    out.we2_sum += p.we2_sum;
    out.we1e2_sum += p.we1e2_sum;
    out.shot_count += p.shot_count;
    for (int k = 0; k < 6; ++k) out.w2_covariance_sum[k] += p.w2_covariance_sum[k];
  }
  return out;
}

/// Delay-by-delay merge of per-shard accumulator vectors.
inline std::vector<CorrelationAccumulator> merge_shards(
    std::span<const std::vector<CorrelationAccumulator>> shards) {
  require(!shards.empty(), ErrorCode::InvalidArgument, "nothing to merge");
  const std::size_t n = shards.front().size();
  std::vector<CorrelationAccumulator> out(n);
  std::vector<CorrelationAccumulator> column(shards.size());
  for (std::size_t d = 0; d < n; ++d) {
    for (std::size_t s = 0; s < shards.size(); ++s) {
      require(shards[s].size() == n, ErrorCode::ConfigMismatch, "shards differ in delay count");
      column[s] = shards[s][d];
    }
    out[d] = merge_accumulators(column);
  }
  return out;
}

struct CurveMetadata {
  std::string config_digest;
  std::uint64_t seed = 0;
  std::string mode;
  std::optional<double> fidelity;
  std::optional<double> amplitude;
  std::optional<double> total_weight;
};

struct HOMCurve {
  std::vector<double> delays;  // units of tau, as realized on the sample grid
  std::vector<double> g2_raw;
  std::vector<double> g2_normalized;
  std::vector<double> stderr_;  // of g2_normalized
  std::vector<long> shots;
  CurveMetadata metadata;

  std::size_t size() const noexcept { return delays.size(); }
};

struct SweepShard {
  std::size_t index = 0;
  std::size_t count = 1;
};

namespace detail {

struct WeightedPair {
  std::size_t j = 0;
  std::size_t k = 0;
  double a = 0.0;
  double b = 0.0;
  double weight = 0.0;
};

/// Realized delay (units of tau) after rounding to the sample grid.
inline double realized_delay(const PulseSpec& pulse, double delay_over_tau) {
  const long d = delay_in_samples(pulse, delay_over_tau * pulse.tau());
  return static_cast<double>(d) / pulse.samples_per_pulse();
}

inline void check_delay_range(const SweepConfig& config) {
  const int len = record_samples(config.pulse, config.record_length());
  for (double d : config.delay_grid) {
    const long s = delay_in_samples(config.pulse, d * config.pulse.tau());
    const long s1 = -static_cast<long>(std::floor(static_cast<double>(s) / 2.0));
    pulse_start_index(config.pulse, len, s1);
    pulse_start_index(config.pulse, len, s + s1);
  }
}

/// Runs every (delay, pair) point of `pairs` that belongs to `shard` and
/// folds it into one accumulator per delay. Point ids are
/// delay * J^2 + j * J + k for a grid of J amplitudes.
inline std::vector<CorrelationAccumulator> accumulate(const SweepConfig& config,
                                                      std::span<const WeightedPair> pairs,
                                                      std::size_t grid_size, SweepShard shard) {
  require(shard.count >= 1 && shard.index < shard.count, ErrorCode::InvalidArgument,
          "invalid shard");
  const std::string digest = config_digest(config);
  const std::size_t delays = config.delay_grid.size();
  const double tau = config.pulse.tau();

  struct Task {
    std::size_t delay = 0;
    std::size_t pair = 0;
    std::uint64_t point_id = 0;
  };
  std::vector<Task> tasks;
  for (std::size_t d = 0; d < delays; ++d)
    for (std::size_t p = 0; p < pairs.size(); ++p) {
      const std::uint64_t id = (d * grid_size + pairs[p].j) * grid_size + pairs[p].k;
      if (id % shard.count == shard.index) tasks.push_back({d, p, id});
    }

  std::vector<PointStats> results(tasks.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < tasks.size(); i = next++) {
      const Task& t = tasks[i];
      RandomStream stream(config.noise.seed, t.point_id);
      const auto& pr = pairs[t.pair];
      results[i] = measure_point(pr.a, pr.b, config.delay_grid[t.delay] * tau, config, stream);
    }
  };
  unsigned threads = config.threads ? config.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(1, tasks.size())));
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
  }

  std::vector<CorrelationAccumulator> acc(delays);
  for (auto& a : acc) a.config_digest = digest;
  for (std::size_t i = 0; i < tasks.size(); ++i)
    acc[tasks[i].delay].add(pairs[tasks[i].pair].weight, results[i]);
  return acc;
}

}  // namespace detail

/// Accumulators for the conditional (signed mixture) sweep: all J x J pairs
/// with weights c_j c_k.
inline std::vector<CorrelationAccumulator> accumulate_conditional(const SweepConfig& config,
                                                                  SweepShard shard = {}) {
  config.validate();
  require(config.mode == SweepMode::conditional, ErrorCode::InvalidArgument,
          "accumulate_conditional needs mode = conditional");
  detail::check_delay_range(config);
  const auto& dec = *config.decomposition;
  const std::size_t J = dec.grid.size();
  std::vector<detail::WeightedPair> pairs;
  for (std::size_t j = 0; j < J; ++j)
    for (std::size_t k = 0; k < J; ++k) {
      const double w = dec.coefficients[j] * dec.coefficients[k];
      if (w == 0.0) continue;
      pairs.push_back({j, k, config.amplitude_scale * dec.grid[j],
                       config.amplitude_scale * dec.grid[k], w});
    }
  return detail::accumulate(config, pairs, J, shard);
}

/// Accumulators for the equal-amplitude PhAC pair at grid index `index`.
inline std::vector<CorrelationAccumulator> accumulate_phac(const SweepConfig& config,
                                                           std::size_t index,
                                                           SweepShard shard = {}) {
  config.validate();
  detail::check_delay_range(config);
  const std::size_t J = config.amplitudes.size();
  require(index < J, ErrorCode::InvalidArgument, "amplitude index out of range");
  const double a = config.amplitude_scale * config.amplitudes[index];
  const detail::WeightedPair pair{index, index, a, a, 1.0};
  return detail::accumulate(config, std::span(&pair, 1), J, shard);
}

/// Turns per-delay accumulators into a curve: g2_raw from weighted means,
/// first-order error propagation through the ratio, and normalization by the
/// mean of g2_raw over |delay| >= baseline_min_delay (or none, for
/// Normalization::raw).
inline HOMCurve finish_curve(const SweepConfig& config,
                             std::span<const CorrelationAccumulator> acc, CurveMetadata meta) {
  require(acc.size() == config.delay_grid.size(), ErrorCode::InvalidArgument,
          "accumulator count differs from delay count");
  const std::string digest = config_digest(config);
  HOMCurve curve;
  curve.metadata = std::move(meta);
  curve.metadata.config_digest = digest;
  curve.metadata.seed = config.noise.seed;

  std::vector<double> raw_err;
  for (std::size_t d = 0; d < acc.size(); ++d) {
    const auto& a = acc[d];
    require(a.config_digest == digest, ErrorCode::ConfigMismatch,
            "accumulator digest does not match the configuration");
    require(a.w_sum != 0.0, ErrorCode::DegenerateDenominator, "zero total weight at a delay");
    const double x = a.we1e2_sum / a.w_sum;
    const double y = a.we1_sum / a.w_sum;
    const double z = a.we2_sum / a.w_sum;
    require(y > 0.0 && z > 0.0, ErrorCode::DegenerateDenominator,
            "weighted mean detector energy is <= 0");
    const double g = x / (y * z);
    const double w2 = a.w_sum * a.w_sum;
    const auto& v = a.w2_covariance_sum;
    // v: 11 -> E1, 22 -> E2, 33 -> E1E2; the ratio is x / (y z).
    const double rel = v[2] / (w2 * x * x) + v[0] / (w2 * y * y) + v[1] / (w2 * z * z) -
                       2.0 * v[4] / (w2 * x * y) - 2.0 * v[5] / (w2 * x * z) +
                       2.0 * v[3] / (w2 * y * z);
    curve.delays.push_back(detail::realized_delay(config.pulse, config.delay_grid[d]));
    curve.g2_raw.push_back(g);
    raw_err.push_back(std::abs(g) * std::sqrt(std::max(0.0, rel)));
    curve.shots.push_back(a.shot_count);
  }

  if (config.normalization == Normalization::raw) {
    curve.g2_normalized = curve.g2_raw;
    curve.stderr_ = raw_err;
    return curve;
  }
  double base_sum = 0.0;
  int base_count = 0;
  for (std::size_t d = 0; d < curve.size(); ++d)
    if (std::abs(curve.delays[d]) >= config.baseline_min_delay - 1e-12) {
      base_sum += curve.g2_raw[d];
      ++base_count;
    }
  require(base_count > 0, ErrorCode::InvalidArgument,
          "delay grid has no points in the baseline region");
  const double baseline = base_sum / base_count;
  require(baseline != 0.0, ErrorCode::DegenerateDenominator, "zero baseline");
  for (std::size_t d = 0; d < curve.size(); ++d) {
    curve.g2_normalized.push_back(curve.g2_raw[d] / baseline);
    curve.stderr_.push_back(raw_err[d] / std::abs(baseline));
  }
  return curve;
}

/// One curve per grid amplitude, both pulses carrying that amplitude.
inline std::vector<HOMCurve> run_phac_hom(const SweepConfig& config) {
  require(config.mode == SweepMode::phac_pairs, ErrorCode::InvalidArgument,
          "run_phac_hom needs mode = phac_pairs");
  std::vector<HOMCurve> curves;
  for (std::size_t i = 0; i < config.amplitudes.size(); ++i) {
    const auto acc = accumulate_phac(config, i);
    CurveMetadata meta;
    meta.mode = std::string(to_string(SweepMode::phac_pairs));
    meta.amplitude = config.amplitudes[i];
    curves.push_back(finish_curve(config, acc, std::move(meta)));
  }
  return curves;
}

inline CurveMetadata conditional_metadata(const SweepConfig& config) {
  CurveMetadata meta;
  meta.mode = std::string(to_string(SweepMode::conditional));
  meta.fidelity = config.decomposition->fidelity;
  meta.total_weight = config.decomposition->total_weight;
  return meta;
}

inline HOMCurve run_conditional_hom(const SweepConfig& config, SweepShard shard = {}) {
  const auto acc = accumulate_conditional(config, shard);
  return finish_curve(config, acc, conditional_metadata(config));
}

// ---------------------------------------------------------------------------
// Curve CSV: '#' header lines, then
//   delta_tau_over_tau,g2_raw,g2_normalized,stderr,shots
// with reals in %.8e (9 significant digits), integer shot counts, LF endings.

inline constexpr std::string_view kCurveColumns =
    "delta_tau_over_tau,g2_raw,g2_normalized,stderr,shots";

namespace detail {

inline std::string sci9(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.8e", v);
  return buf;
}

inline std::string sci9_or_na(const std::optional<double>& v) { return v ? sci9(*v) : "n/a"; }

}  // namespace detail

inline void write_curve_csv(std::ostream& os, const HOMCurve& c) {
  const auto& m = c.metadata;
  os << "# rfhom hom-curve\n";
  os << "# config_digest: " << m.config_digest << '\n';
  os << "# seed: " << m.seed << '\n';
  os << "# mode: " << m.mode << '\n';
  os << "# fidelity: " << detail::sci9_or_na(m.fidelity) << '\n';
  if (m.amplitude) os << "# amplitude: " << detail::sci9(*m.amplitude) << '\n';
  if (m.total_weight) os << "# total_weight: " << detail::sci9(*m.total_weight) << '\n';
  os << kCurveColumns << '\n';
  for (std::size_t i = 0; i < c.size(); ++i)
    os << detail::sci9(c.delays[i]) << ',' << detail::sci9(c.g2_raw[i]) << ','
       << detail::sci9(c.g2_normalized[i]) << ',' << detail::sci9(c.stderr_[i]) << ','
       << c.shots[i] << '\n';
}

inline HOMCurve read_curve_csv(std::istream& is) {
  HOMCurve c;
  std::string line;
  bool magic = false;
  bool columns = false;
  while (std::getline(is, line)) {
    if (line.empty()) continue;
    if (line[0] == '#') {
      if (line == "# rfhom hom-curve") {
        magic = true;
        continue;
      }
      const auto colon = line.find(": ");
      require(line.size() > 2 && colon != std::string::npos, ErrorCode::ParseError,
              "malformed header: " + line);
      const std::string key = line.substr(2, colon - 2);
      const std::string value = line.substr(colon + 2);
      auto& m = c.metadata;
      if (key == "config_digest") m.config_digest = value;
      else if (key == "seed") m.seed = std::stoull(value);
      else if (key == "mode") m.mode = value;
      else if (key == "fidelity") m.fidelity = detail::parse_optional(value);
      else if (key == "amplitude") m.amplitude = detail::parse_optional(value);
      else if (key == "total_weight") m.total_weight = detail::parse_optional(value);
      else throw Error(ErrorCode::ParseError, "unknown header key '" + key + "'");
      continue;
    }
    if (!columns) {
      require(line == kCurveColumns, ErrorCode::ParseError, "unexpected column header: " + line);
      columns = true;
      continue;
    }
    std::vector<std::string> f;
    std::stringstream ls(line);
    for (std::string cell; std::getline(ls, cell, ',');) f.push_back(cell);
    require(f.size() == 5, ErrorCode::ParseError, "expected 5 columns: " + line);
    c.delays.push_back(*detail::parse_optional(f[0]));
    c.g2_raw.push_back(*detail::parse_optional(f[1]));
    c.g2_normalized.push_back(*detail::parse_optional(f[2]));
    c.stderr_.push_back(*detail::parse_optional(f[3]));
    try {
      c.shots.push_back(std::stol(f[4]));
    } catch (const std::logic_error&) {
      throw Error(ErrorCode::ParseError, "bad shot count: " + f[4]);
    }
  }
  require(magic && columns, ErrorCode::ParseError, "not an rfhom curve file");
  return c;
}

}  // namespace rfhom
