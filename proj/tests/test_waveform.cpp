#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "rfhom/interference.hpp"
#include "rfhom/waveform.hpp"

using namespace rfhom;

namespace {
const PulseSpec kPulse;
double tau() { return kPulse.tau(); }
double record() { return 3.0 * tau(); }
}  // namespace

TEST(Waveform, PulseGeometry) {
  EXPECT_NEAR(tau(), 82.0 / 1.2e8, 1e-20);
  EXPECT_EQ(kPulse.samples_per_pulse(), 656);
  EXPECT_EQ(record_samples(kPulse, record()), 1968);
}

TEST(Waveform, UnitPulseEnergyIsTau) {
  const auto t = synthesize(kPulse, 1.0, 0.0, 0.0, record());
  EXPECT_NEAR(pulse_energy(t), tau(), 1e-12 * tau());
}

TEST(Waveform, EnergyScalesWithAmplitudeSquared) {
  const auto t = synthesize(kPulse, 0.4, 0.0, 0.0, record());
  EXPECT_NEAR(pulse_energy(t), 0.16 * tau(), 1e-12 * tau());
}

TEST(Waveform, PhasePiNegates) {
  const auto a = synthesize(kPulse, 0.7, 0.0, 0.0, record());
  const auto b = synthesize(kPulse, 0.7, std::numbers::pi, 0.0, record());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_NEAR(b.samples[k].real(), -a.samples[k].real(), 1e-15);
    EXPECT_NEAR(b.samples[k].imag(), -a.samples[k].imag(), 1e-15);
  }
}

TEST(Waveform, DelayMovesSupport) {
  const auto a = synthesize(kPulse, 1.0, 0.0, 0.0, record());
  const auto b = synthesize(kPulse, 1.0, 0.0, 0.5 * tau(), record());
  const std::size_t start0 = (1968 - 656) / 2;
  EXPECT_EQ(a.samples[start0 - 1], Sample{});
  EXPECT_EQ(a.samples[start0], Sample(1.0, 0.0));
  EXPECT_EQ(b.samples[start0 + 327], Sample{});
  EXPECT_EQ(b.samples[start0 + 328], Sample(1.0, 0.0));
  EXPECT_EQ(b.samples[start0 + 328 + 655], Sample(1.0, 0.0));
}

TEST(Waveform, DelayOutOfRange) {
  try {
    synthesize(kPulse, 1.0, 0.0, 1.2 * tau(), record());
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DelayOutOfRange);
  }
  EXPECT_NO_THROW(synthesize(kPulse, 1.0, 0.0, tau(), record()));
  EXPECT_NO_THROW(synthesize(kPulse, 1.0, 0.0, -tau(), record()));
}

TEST(WaveformProperty, EnergyIndependentOfPhaseAndDelay) {
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> ph(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> dl(-tau(), tau());
  std::uniform_real_distribution<double> am(0.0, 2.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = am(rng);
    const auto t = synthesize(kPulse, a, ph(rng), dl(rng), record());
    EXPECT_NEAR(pulse_energy(t), a * a * tau(), 1e-12 * tau());
  }
}

TEST(WaveformProperty, DelayQuantizationWithinHalfSample) {
  std::mt19937_64 rng(32);
  std::uniform_real_distribution<double> dl(-tau(), tau());
  const double dt = kPulse.sample_period();
  for (int trial = 0; trial < 200; ++trial) {
    const double d = dl(rng);
    const auto t = synthesize(kPulse, 1.0, 0.0, d, record());
    std::size_t first = 0;
    while (t.samples[first] == Sample{}) ++first;
    const double realized = t.start_time + static_cast<double>(first) * dt;
    EXPECT_LE(std::abs(realized - d), 0.5 * dt + 1e-18);
  }
}

TEST(Noise, ZeroVarianceLeavesTraceUnchanged) {
  const auto t = synthesize(kPulse, 0.3, 0.2, 0.0, record());
  RandomStream s(1, 0);
  const auto n = add_noise(t, 0.0, s);
  EXPECT_EQ(n.samples, t.samples);
}

TEST(Noise, MeanEnergyIsTwoSigmaSquaredPerSample) {
  const double var = 0.013;
  std::vector<Sample> v(100000);
  RandomStream s(5, 9);
  add_noise_inplace(v, var, s);
  double e = 0.0;
  for (const auto& x : v) e += std::norm(x);
  e /= static_cast<double>(v.size());
  const double sem = 2.0 * var / std::sqrt(static_cast<double>(v.size()));
  EXPECT_NEAR(e, 2.0 * var, 5.0 * sem);
}

TEST(Noise, DeterministicPerStream) {
  const auto t = synthesize(kPulse, 0.3, 0.0, 0.0, record());
  RandomStream a(7, 3), b(7, 3), c(7, 4), d(8, 3);
  const auto ta = add_noise(t, 0.01, a);
  const auto tb = add_noise(t, 0.01, b);
  const auto tc = add_noise(t, 0.01, c);
  const auto td = add_noise(t, 0.01, d);
  EXPECT_EQ(ta.samples, tb.samples);
  EXPECT_NE(ta.samples, tc.samples);
  EXPECT_NE(ta.samples, td.samples);
}

TEST(NoiseProperty, VarianceIndependentOfSignal) {
  const double var = 0.02;
  for (double a : {0.0, 0.4, 1.45}) {
    const auto clean = synthesize(kPulse, a, 0.7, 0.0, record());
    double sum = 0.0;
    long n = 0;
    for (std::uint64_t r = 0; r < 60; ++r) {
      RandomStream s(3, r);
      const auto noisy = add_noise(clean, var, s);
      for (std::size_t k = 0; k < clean.size(); ++k, ++n)
        sum += std::norm(noisy.samples[k] - clean.samples[k]);
    }
    const double mean = sum / static_cast<double>(n);
    EXPECT_NEAR(mean, 2.0 * var, 5.0 * 2.0 * var / std::sqrt(static_cast<double>(n))) << a;
  }
}

TEST(Noise, SnrExamples) {
  NoiseModel m;
  m.source_variance = calibrate_noise(0.4, 25.0);
  EXPECT_NEAR(snr_db(0.4, m), 25.0, 1e-12);
  EXPECT_NEAR(snr_db(0.8, m), 31.02, 0.01);
  EXPECT_NEAR(snr_db(1.45, m), 36.19, 0.01);
  EXPECT_NEAR(snr_db(0.8, m), 25.0 + 20.0 * std::log10(2.0), 1e-12);
}

TEST(Noise, UndefinedSnr) {
  try {
    snr_db(0.4, NoiseModel{});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::UndefinedSNR);
  }
}

TEST(NoiseProperty, CalibrationRoundTrip) {
  std::mt19937_64 rng(33);
  std::uniform_real_distribution<double> amp(0.01, 3.0), db(-10.0, 60.0);
  for (int trial = 0; trial < 200; ++trial) {
    const double a = amp(rng), target = db(rng);
    NoiseModel m;
    m.source_variance = calibrate_noise(a, target);
    EXPECT_NEAR(snr_db(a, m), target, 1e-9);
  }
}

TEST(Waveform, TraceDump) {
  const auto t = synthesize(kPulse, 1.0, 0.0, 0.0, record());
  std::stringstream ss;
  write_trace_text(ss, t);
  int lines = 0;
  for (std::string l; std::getline(ss, l);) ++lines;
  EXPECT_GE(lines, 1968);
}

TEST(Waveform, ZeroAmplitudeIsSilent) {
  const auto t = synthesize(kPulse, 0.0, 1.0, 0.0, record());
  for (const auto& x : t.samples) EXPECT_EQ(x, Sample{});
  EXPECT_EQ(pulse_energy(t), 0.0);
}

TEST(Noise, SnrLaws) {
  NoiseModel m;
  m.source_variance = 0.01;
  EXPECT_NEAR(snr_db(0.6, m) - snr_db(0.3, m), 6.0206, 1e-4);
  EXPECT_NEAR(snr_db(std::sqrt(2.0 * 0.01), m), 0.0, 1e-12);
  EXPECT_NEAR(calibrate_noise(1.0, 0.0), 0.5, 1e-15);
  EXPECT_NEAR(calibrate_noise(1.45, 36.1862), calibrate_noise(0.4, 25.0), 1e-5 * calibrate_noise(0.4, 25.0));
}
