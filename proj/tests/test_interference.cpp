#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "rfhom/decomposition.hpp"
#include "rfhom/interference.hpp"

using namespace rfhom;

namespace {
const PulseSpec kPulse;
double tau() { return kPulse.tau(); }
double record() { return 3.0 * tau(); }

// Brute-force detector energies of one interference event, in units of tau.
std::pair<double, double> energies(double a, double b, double phase, double delay) {
  const auto in1 = synthesize(kPulse, a, 0.0, 0.0, record());
  const auto in2 = synthesize(kPulse, b, phase, delay, record());
  const auto out = hybrid_couple(in1, in2);
  return {pulse_energy(out.out1) / tau(), pulse_energy(out.out2) / tau()};
}
}  // namespace

TEST(Coupler, SinglePortInputSplitsEvenly) {
  const auto in1 = synthesize(kPulse, 1.0, 0.0, 0.0, record());
  const auto in2 = synthesize(kPulse, 0.0, 0.0, 0.0, record());
  const auto out = hybrid_couple(in1, in2);
  EXPECT_NEAR(pulse_energy(out.out1), 0.5 * tau(), 1e-12 * tau());
  EXPECT_NEAR(pulse_energy(out.out2), 0.5 * tau(), 1e-12 * tau());
}

TEST(Coupler, SinglePortSamplewise) {
  const auto in1 = synthesize(kPulse, 0.9, 0.4, 0.0, record());
  const auto in2 = synthesize(kPulse, 0.0, 0.0, 0.0, record());
  const auto out = hybrid_couple(in1, in2);
  for (std::size_t k = 0; k < in1.size(); ++k) {
    EXPECT_NEAR(std::norm(out.out1.samples[k]), 0.5 * std::norm(in1.samples[k]), 1e-15);
    EXPECT_NEAR(std::norm(out.out2.samples[k]), 0.5 * std::norm(in1.samples[k]), 1e-15);
  }
}

TEST(Coupler, MinusIInputRoutesToPortOne) {
  const auto in1 = synthesize(kPulse, 0.7, 0.3, 0.0, record());
  auto in2 = in1;
  for (auto& x : in2.samples) x *= Sample(0.0, -1.0);
  const auto out = hybrid_couple(in1, in2);
  for (std::size_t k = 0; k < in1.size(); ++k) {
    EXPECT_NEAR(std::abs(out.out1.samples[k] - std::numbers::sqrt2 * in1.samples[k]), 0.0, 1e-15);
    EXPECT_NEAR(std::abs(out.out2.samples[k]), 0.0, 1e-15);
  }
}

TEST(Coupler, EqualInputsInPhase) {
  const auto in = synthesize(kPulse, 1.0, 0.0, 0.0, record());
  const auto out = hybrid_couple(in, in);
  EXPECT_NEAR(pulse_energy(out.out1), tau(), 1e-12 * tau());
  EXPECT_NEAR(pulse_energy(out.out2), tau(), 1e-12 * tau());
}

TEST(Coupler, QuadratureInputsRouteToOnePort) {
  auto [e1, e2] = energies(1.0, 1.0, std::numbers::pi / 2.0, 0.0);
  EXPECT_NEAR(e1, 0.0, 1e-12);
  EXPECT_NEAR(e2, 2.0, 1e-12);
  std::tie(e1, e2) = energies(1.0, 1.0, -std::numbers::pi / 2.0, 0.0);
  EXPECT_NEAR(e1, 2.0, 1e-12);
  EXPECT_NEAR(e2, 0.0, 1e-12);
}

TEST(Coupler, GridMismatch) {
  const auto a = synthesize(kPulse, 1.0, 0.0, 0.0, record());
  const auto b = synthesize(kPulse, 1.0, 0.0, 0.0, 4.0 * tau());
  try {
    hybrid_couple(a, b);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::GridMismatch);
  }
}

TEST(CouplerProperty, ConservesEnergy) {
  std::mt19937_64 rng(41);
  std::uniform_real_distribution<double> amp(0.0, 2.0);
  std::uniform_real_distribution<double> ph(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> dl(-tau(), tau());
  for (int trial = 0; trial < 1000; ++trial) {
    const double a = amp(rng), b = amp(rng);
    const auto in1 = synthesize(kPulse, a, ph(rng), dl(rng), record());
    const auto in2 = synthesize(kPulse, b, ph(rng), dl(rng), record());
    const auto out = hybrid_couple(in1, in2);
    const double ein = pulse_energy(in1) + pulse_energy(in2);
    const double eout = pulse_energy(out.out1) + pulse_energy(out.out2);
    EXPECT_NEAR(eout, ein, 1e-12 * std::max(ein, tau()));
  }
}

TEST(Overlap, Examples) {
  EXPECT_EQ(overlap_f(0.0, 1.0), 1.0);
  EXPECT_EQ(overlap_f(0.25, 1.0), 0.75);
  EXPECT_EQ(overlap_f(-0.25, 1.0), 0.75);
  EXPECT_EQ(overlap_f(1.0, 1.0), 0.0);
  EXPECT_EQ(overlap_f(1.3, 1.0), 0.0);
  EXPECT_EQ(overlap_f(2.0, 1.0), 0.0);
  EXPECT_EQ(overlap_f(0.5, 1.0), 0.5);
}

TEST(Analytic, Dips) {
  EXPECT_EQ(g2_phac_analytic(1.0), 0.5);
  EXPECT_EQ(g2_phac_analytic(0.0), 1.0);
  EXPECT_EQ(g2_single_analytic(1.0), 0.0);
  EXPECT_EQ(g2_single_analytic(0.0), 1.0);
  EXPECT_EQ(g2_phac_analytic(0.5), 0.875);
  EXPECT_EQ(g2_single_analytic(0.5), 0.75);
}

TEST(Analytic, ClassicalMomentsExamples) {
  const auto m = classical_moments(1.0, 1.0, 1.0);
  EXPECT_EQ(m.e1_mean, 1.0);
  EXPECT_EQ(m.e2_mean, 1.0);
  EXPECT_EQ(m.e1e2_mean, 0.5);
  const auto far = classical_moments(1.0, 1.0, 0.0);
  EXPECT_EQ(far.e1e2_mean, 1.0);
  const auto one = classical_moments(0.8, 0.0, 1.0);
  EXPECT_NEAR(one.e1_mean, 0.32, 1e-15);
  EXPECT_NEAR(one.e1e2_mean, 0.32 * 0.32, 1e-15);
}

TEST(Analytic, ClassicalMomentsMatchMonteCarloPhaseAverage) {
  std::mt19937_64 rng(42);
  std::uniform_real_distribution<double> ph(-std::numbers::pi, std::numbers::pi);
  for (const auto& [a, b, frac] : {std::tuple{1.0, 1.0, 0.0}, std::tuple{0.4, 0.8, 0.25},
                                   std::tuple{1.45, 0.2, 0.5}}) {
    const int N = 4000;
    double s1 = 0, s2 = 0, s12 = 0, q12 = 0;
    const double delay = std::round(frac * 656.0) * kPulse.sample_period();
    for (int i = 0; i < N; ++i) {
      const auto [e1, e2] = energies(a, b, ph(rng), delay);
      s1 += e1;
      s2 += e2;
      s12 += e1 * e2;
      q12 += e1 * e2 * e1 * e2;
    }
    const double f = 1.0 - std::round(frac * 656.0) / 656.0;
    const auto m = classical_moments(a, b, f);
    const double m12 = s12 / N;
    const double sem = std::sqrt(std::max(0.0, q12 / N - m12 * m12) / N);
    EXPECT_NEAR(s1 / N, m.e1_mean, 0.05 * m.e1_mean + 1e-12);
    EXPECT_NEAR(s2 / N, m.e2_mean, 0.05 * m.e2_mean + 1e-12);
    EXPECT_NEAR(m12, m.e1e2_mean, 5.0 * sem + 1e-12);
  }
}

TEST(Analytic, ClassicalMomentsMatchUniformPhaseGrid) {
  // Equally spaced phases average the sin(phi) and sin^2(phi) terms exactly.
  for (double f : {0.0, 0.3, 1.0}) {
    const double delay = std::round((1.0 - f) * 656.0) * kPulse.sample_period();
    const double fr = 1.0 - std::round((1.0 - f) * 656.0) / 656.0;
    const int P = 16;
    double s1 = 0, s2 = 0, s12 = 0;
    for (int p = 0; p < P; ++p) {
      const auto [e1, e2] =
          energies(0.8, 0.4, -std::numbers::pi + 2 * std::numbers::pi * p / P, delay);
      s1 += e1 / P;
      s2 += e2 / P;
      s12 += e1 * e2 / P;
    }
    const auto m = classical_moments(0.8, 0.4, fr);
    EXPECT_NEAR(s1, m.e1_mean, 1e-12);
    EXPECT_NEAR(s2, m.e2_mean, 1e-12);
    EXPECT_NEAR(s12, m.e1e2_mean, 1e-12);
  }
}

TEST(Analytic, ConditionalSinglePhacEqualsPhacDip) {
  for (double a : {0.1, 0.8, 1.45})
    for (double f : {0.0, 0.5, 1.0}) {
      const auto g = conditional_g2_analytic(Decomposition::single(a), f);
      EXPECT_NEAR(g.normalized, g2_phac_analytic(f), 1e-12);
      EXPECT_NEAR(g.raw, g2_phac_analytic(f), 1e-12);
    }
}

TEST(Analytic, ConditionalFockOne) {
  const auto g = conditional_g2_analytic(FactorialMoments{1.0, 0.0}, 1.0);
  EXPECT_EQ(g.normalized, 0.0);
  EXPECT_EQ(g.raw, 0.0);
  EXPECT_EQ(conditional_g2_analytic(FactorialMoments{1.0, 0.0}, 0.0).raw, 0.5);
}

TEST(Analytic, DegenerateState) {
  try {
    conditional_g2_analytic(FactorialMoments{0.0, 0.0}, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::DegenerateState);
  }
}

TEST(AnalyticProperty, ConditionalScalingInvariance) {
  const auto fit = fit_target(FockVector::single_photon(32), AmplitudeGrid::standard(),
                              CoefficientBounds::loose());
  for (double x : {0.5, 2.0, 7.0})
    for (double f : {0.0, 0.25, 0.5, 0.75, 1.0})
      EXPECT_NEAR(conditional_g2_analytic(scale(fit, x), f).normalized,
                  conditional_g2_analytic(fit, f).normalized, 1e-9);
}

TEST(AnalyticProperty, PhacDipBoundedBelowByHalf) {
  for (int i = 0; i <= 100; ++i) EXPECT_GE(g2_phac_analytic(i / 100.0), 0.5);
}

TEST(Analytic, FittedStateIsSubPoissonian) {
  const auto fit = fit_target(FockVector::single_photon(32), AmplitudeGrid::standard(),
                              CoefficientBounds::loose());
  EXPECT_LT(conditional_g2_analytic(fit, 1.0).normalized, 0.5);
  EXPECT_NEAR(conditional_g2_analytic(fit, 1.0).normalized, -0.0015796093, 1e-8);
  const auto b = fit_target(FockVector::single_photon(32), AmplitudeGrid::standard(),
                            CoefficientBounds::noise_suppressing());
  EXPECT_NEAR(conditional_g2_analytic(b, 1.0).normalized, 0.096461483, 1e-8);
}
