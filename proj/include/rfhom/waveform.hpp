#pragma once

// Complex-baseband rectangular RF pulses and additive white noise with a
// fixed power spectral density.

#include <cmath>
#include <complex>
#include <cstdint>
#include <cstdio>
#include <ostream>
#include <span>
#include <vector>

#include "rfhom/error.hpp"
#include "rfhom/random.hpp"

namespace rfhom {

using Sample = std::complex<double>;

enum class Envelope { rectangular };

struct PulseSpec {
  double carrier_freq = 1.2e8;  // Hz
  int cycles_per_pulse = 82;
  int samples_per_cycle = 8;
  Envelope envelope = Envelope::rectangular;

  void validate() const {
    require(std::isfinite(carrier_freq) && carrier_freq > 0.0, ErrorCode::InvalidArgument,
            "carrier_freq must be > 0");
    require(cycles_per_pulse >= 1, ErrorCode::InvalidArgument, "cycles_per_pulse must be >= 1");
    require(samples_per_cycle >= 2, ErrorCode::InvalidArgument, "samples_per_cycle must be >= 2");
  }

  /// Pulse width tau in seconds.
  double tau() const noexcept { return cycles_per_pulse / carrier_freq; }
  double sample_period() const noexcept { return 1.0 / (samples_per_cycle * carrier_freq); }
  int samples_per_pulse() const noexcept { return cycles_per_pulse * samples_per_cycle; }
};

struct ComplexTrace {
  std::vector<Sample> samples;
  double sample_period = 1.0;  // s
  double start_time = 0.0;     // s

  std::size_t size() const noexcept { return samples.size(); }

  bool same_grid(const ComplexTrace& other) const noexcept {
    return samples.size() == other.samples.size() && sample_period == other.sample_period &&
           start_time == other.start_time;
  }
};

struct NoiseModel {
  double source_variance = 0.0;   // per quadrature, per sample, at each generator output
  double coupler_variance = 0.0;  // same, added at each coupler output
  std::uint64_t seed = 1;

  bool noiseless() const noexcept { return source_variance == 0.0 && coupler_variance == 0.0; }
};

/// Number of samples in a record of the given length on the pulse's grid.
inline int record_samples(const PulseSpec& spec, double record_length) {
  return static_cast<int>(std::llround(record_length / spec.sample_period()));
}

/// Record sample at which a pulse delayed by `delay_samples` starts. Delay 0
/// centres the pulse in the record.
inline int pulse_start_index(const PulseSpec& spec, int record_len, long delay_samples) {
  const long centred = (record_len - spec.samples_per_pulse()) / 2;
  const long start = centred + delay_samples;
  require(start >= 0 && start + spec.samples_per_pulse() <= record_len,
          ErrorCode::DelayOutOfRange, "pulse support leaves the record");
  return static_cast<int>(start);
}

/// Rectangular pulse amplitude * e^{i phase} on [delay, delay + tau]. The
/// record is laid out so that delay 0 sits in its middle; the delay is
/// rounded to the nearest sample.
inline ComplexTrace synthesize(const PulseSpec& spec, double amplitude, double phase,
                               double delay, double record_length) {
  spec.validate();
  require(std::isfinite(amplitude) && amplitude >= 0.0, ErrorCode::InvalidArgument,
          "amplitude must be >= 0");
  require(std::isfinite(delay) && std::isfinite(phase), ErrorCode::InvalidArgument,
          "phase and delay must be finite");
  const double dt = spec.sample_period();
  const int len = record_samples(spec, record_length);
  require(len >= spec.samples_per_pulse(), ErrorCode::DelayOutOfRange,
          "record shorter than one pulse");
  const long shift = std::lround(delay / dt);
  const int start = pulse_start_index(spec, len, shift);

  ComplexTrace trace;
  trace.sample_period = dt;
  trace.start_time = -static_cast<double>((len - spec.samples_per_pulse()) / 2) * dt;
  trace.samples.assign(static_cast<std::size_t>(len), Sample{});
  const Sample value = std::polar(amplitude, phase);
  if (amplitude > 0.0)
    for (int k = 0; k < spec.samples_per_pulse(); ++k)
      trace.samples[static_cast<std::size_t>(start + k)] = value;
  return trace;
}

/// In-place white noise of the given per-quadrature variance.
inline void add_noise_inplace(std::span<Sample> samples, double variance, RandomStream& stream) {
  require(std::isfinite(variance) && variance >= 0.0, ErrorCode::InvalidArgument,
          "noise variance must be >= 0");
  if (variance == 0.0) return;
  const double sigma = std::sqrt(variance);
  for (auto& s : samples) {
    const double re = stream.normal(sigma);
    const double im = stream.normal(sigma);
    s += Sample(re, im);
  }
}

inline ComplexTrace add_noise(ComplexTrace trace, double variance, RandomStream& stream) {
  add_noise_inplace(trace.samples, variance, stream);
  return trace;
}

/// In-pulse signal power over total noise power per sample, in dB.
inline double snr_db(double amplitude, const NoiseModel& noise) {
  require(noise.source_variance > 0.0, ErrorCode::UndefinedSNR,
          "SNR is undefined without source noise");
  require(amplitude > 0.0, ErrorCode::InvalidArgument, "amplitude must be > 0");
  return 10.0 * std::log10(amplitude * amplitude / (2.0 * noise.source_variance));
}

/// Source variance that gives `target_snr_db` at `reference_amplitude`.
inline double calibrate_noise(double reference_amplitude, double target_snr_db) {
  require(reference_amplitude > 0.0, ErrorCode::InvalidArgument,
          "reference amplitude must be > 0");
  return reference_amplitude * reference_amplitude /
         (2.0 * std::pow(10.0, target_snr_db / 10.0));
}

/// Debug dump: "time re im" per line.
inline void write_trace_text(std::ostream& os, const ComplexTrace& trace) {
  char buf[96];
  for (std::size_t k = 0; k < trace.size(); ++k) {
    const double t = trace.start_time + static_cast<double>(k) * trace.sample_period;
    std::snprintf(buf, sizeof buf, "%.9e %.9e %.9e\n", t, trace.samples[k].real(),
                  trace.samples[k].imag());
    os << buf;
  }
}

}  // namespace rfhom
