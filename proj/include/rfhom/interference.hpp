#pragma once

// 50/50 hybrid coupler, energy detection, and closed-form HOM dips.

#include <cmath>
#include <numbers>

#include "rfhom/decomposition.hpp"
#include "rfhom/error.hpp"
#include "rfhom/waveform.hpp"

namespace rfhom {

struct CouplerOutput {
  ComplexTrace out1;
  ComplexTrace out2;
};

/// out1 = (in1 + i in2)/sqrt2, out2 = (i in1 + in2)/sqrt2.
inline CouplerOutput hybrid_couple(const ComplexTrace& in1, const ComplexTrace& in2) {
  require(in1.same_grid(in2), ErrorCode::GridMismatch, "coupler inputs on different sample grids");
  constexpr double r = std::numbers::sqrt2 / 2.0;
  const Sample i(0.0, 1.0);
  CouplerOutput out{in1, in2};
  for (std::size_t k = 0; k < in1.size(); ++k) {
    const Sample a = in1.samples[k];
    const Sample b = in2.samples[k];
    out.out1.samples[k] = r * (a + i * b);
    out.out2.samples[k] = r * (i * a + b);
  }
  return out;
}

/// Detector reading: sum |s_k|^2 * dt over the record.
inline double pulse_energy(const ComplexTrace& trace) {
  double e = 0.0;
  for (const auto& s : trace.samples) e += std::norm(s);
  return e * trace.sample_period;
}

/// Fraction of two equal rectangular pulses that coincide.
inline double overlap_f(double delta_tau, double tau) {
  require(tau > 0.0, ErrorCode::InvalidArgument, "tau must be > 0");
  const double d = std::abs(delta_tau);
  return d <= tau ? 1.0 - d / tau : 0.0;
}

/// Identical PhAC inputs: 1 - f^2/2, never below 1/2.
inline double g2_phac_analytic(double f) { return 1.0 - 0.5 * f * f; }

/// Single-photon inputs, baseline-normalized: 1 - f^2.
inline double g2_single_analytic(double f) { return 1.0 - f * f; }

/// Phase-averaged detector energies <E1>, <E2> and <E1 E2>.
struct MomentTriple {
  double e1_mean = 0.0;
  double e2_mean = 0.0;
  double e1e2_mean = 0.0;
};

/// Closed form for coherent amplitudes a, b at overlap f (tau = 1). With a
/// relative phase phi the outputs carry (a^2+b^2)/2 -/+ f a b sin(phi);
/// averaging over phi kills the linear term and leaves f^2 a^2 b^2 / 2 in
/// the product.
inline MomentTriple classical_moments(double a, double b, double f) {
  require(a >= 0.0 && b >= 0.0, ErrorCode::InvalidArgument, "amplitudes must be >= 0");
  require(f >= 0.0 && f <= 1.0, ErrorCode::InvalidArgument, "overlap must lie in [0, 1]");
  const double s = 0.5 * (a * a + b * b);
  return {s, s, s * s - 0.5 * f * f * a * a * b * b};
}

struct ConditionalG2 {
  double raw = 0.0;
  double normalized = 0.0;
};

/// g2 of a signed PhAC mixture fed into both ports. Only the factorial
/// moments M2 and M4 of the mixture enter:
///   N(f) = (M4 + M2^2)/2 - f^2 M2^2/2,  raw = N(f)/M2^2,  normalized = N(f)/N(0).
inline ConditionalG2 conditional_g2_analytic(const FactorialMoments& m, double f) {
  require(m.m2 > 0.0, ErrorCode::DegenerateState, "mean photon number of the mixture is <= 0");
  const double m2sq = m.m2 * m.m2;
  const double n0 = 0.5 * (m.m4 + m2sq);
  const double nf = n0 - 0.5 * f * f * m2sq;
  require(n0 != 0.0, ErrorCode::DegenerateState, "zero far-delay correlation");
  return {nf / m2sq, nf / n0};
}

inline ConditionalG2 conditional_g2_analytic(const Decomposition& dec, double f) {
  return conditional_g2_analytic(mixture_moments(dec), f);
}

}  // namespace rfhom
