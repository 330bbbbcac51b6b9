#pragma once

// Truncated photon-number distributions of diagonal single-mode states.

#include <algorithm>
#include <cmath>
#include <span>
#include <utility>
#include <vector>

#include "rfhom/error.hpp"

namespace rfhom {

inline constexpr int kDefaultNMax = 32;
inline constexpr double kTraceTolerance = 1e-9;

enum class FockMode { physical, signed_mixture };

/// Weights p_0..p_{n_max} of a state diagonal in the Fock basis. Signed
/// vectors come from reconstructions of signed PhAC mixtures.
class FockVector {
 public:
  FockVector() = default;
  FockVector(std::vector<double> weights, FockMode mode)
      : weights_(std::move(weights)), mode_(mode) {
    require(!weights_.empty(), ErrorCode::InvalidArgument,
            "FockVector needs at least one weight");
    for (double w : weights_)
      require(std::isfinite(w), ErrorCode::InvalidArgument,
              "FockVector weights must be finite");
  }

  static FockVector fock_state(int n, int n_max) {
    require(n >= 0 && n <= n_max, ErrorCode::InvalidArgument,
            "Fock index outside truncation");
    std::vector<double> w(static_cast<std::size_t>(n_max) + 1, 0.0);
    w[static_cast<std::size_t>(n)] = 1.0;
    return {std::move(w), FockMode::physical};
  }
  static FockVector vacuum(int n_max) { return fock_state(0, n_max); }
  static FockVector single_photon(int n_max) { return fock_state(1, n_max); }

  int n_max() const noexcept { return static_cast<int>(weights_.size()) - 1; }
  FockMode mode() const noexcept { return mode_; }
  std::span<const double> weights() const noexcept { return weights_; }
  double operator[](int n) const { return weights_.at(static_cast<std::size_t>(n)); }

  double trace() const noexcept {
    double s = 0.0;
    for (double w : weights_) s += w;
    return s;
  }

  /// Checks the trace (and, in physical mode, positivity) invariant.
  bool is_normalized(double tol = kTraceTolerance) const noexcept {
    if (std::abs(trace() - 1.0) > tol) return false;
    if (mode_ == FockMode::physical)
      for (double w : weights_)
        if (w < 0.0) return false;
    return true;
  }

 private:
  std::vector<double> weights_{1.0};
  FockMode mode_ = FockMode::physical;
};

struct PhacSpec {
  double amplitude = 0.0;

  explicit PhacSpec(double a) : amplitude(a) {
    require(std::isfinite(a) && a >= 0.0, ErrorCode::InvalidArgument,
            "PhAC amplitude must be finite and non-negative");
  }
};

namespace detail {

// p_n for n = 0..count-1 by p_{n+1} = p_n * a^2 / (n+1). Falls back to log
// space when e^{-a^2} underflows.
inline std::vector<double> poisson_weights(double mean, int count) {
  std::vector<double> p(static_cast<std::size_t>(count));
  if (count == 0) return p;
  if (mean < 700.0) {
    p[0] = std::exp(-mean);
    for (int n = 1; n < count; ++n)
      p[static_cast<std::size_t>(n)] = p[static_cast<std::size_t>(n) - 1] * mean / n;
  } else {
    const double log_mean = std::log(mean);
    for (int n = 0; n < count; ++n)
      p[static_cast<std::size_t>(n)] =
          std::exp(-mean + n * log_mean - std::lgamma(n + 1.0));
  }
  return p;
}

}  // namespace detail

/// Poisson weights of a phase-averaged coherent state, not renormalized.
inline FockVector phac_fock(PhacSpec spec, int n_max = kDefaultNMax) {
  require(n_max >= 0, ErrorCode::InvalidArgument, "n_max must be >= 0");
  const double mean = spec.amplitude * spec.amplitude;
  return {detail::poisson_weights(mean, n_max + 1), FockMode::physical};
}

/// Probability mass above n_max. Summed directly over the tail so that tiny
/// values keep their relative precision.
inline double tail_mass(PhacSpec spec, int n_max = kDefaultNMax) {
  require(n_max >= 0, ErrorCode::InvalidArgument, "n_max must be >= 0");
  const double mean = spec.amplitude * spec.amplitude;
  if (mean == 0.0) return 0.0;
  if (mean >= 700.0) {
    double head = 0.0;
    for (double w : detail::poisson_weights(mean, n_max + 1)) head += w;
    return std::max(0.0, 1.0 - head);
  }
  double term = std::exp(-mean);
  for (int n = 1; n <= n_max + 1; ++n) term *= mean / n;
  double tail = 0.0;
  for (int n = n_max + 2;; ++n) {
    tail += term;
    term *= mean / n;
    if (n > mean && term <= tail * 1e-18) break;
    if (term == 0.0) break;
  }
  return tail;
}

/// First and second factorial moments <n> and <n(n-1)>.
struct FactorialMoments {
  double m2 = 0.0;
  double m4 = 0.0;
};

inline FactorialMoments moment_m2m4(const FockVector& fock) {
  FactorialMoments m;
  const auto w = fock.weights();
  for (std::size_t n = 0; n < w.size(); ++n) {
    const double dn = static_cast<double>(n);
    m.m2 += dn * w[n];
    m.m4 += dn * (dn - 1.0) * w[n];
  }
  return m;
}

inline double fidelity_to_single_photon(const FockVector& fock) {
  return fock.n_max() >= 1 ? fock[1] : 0.0;
}

}  // namespace rfhom
