#pragma once

#include <cstdint>
#include <random>

#include <boost/random/mersenne_twister.hpp>
#include <boost/random/normal_distribution.hpp>

namespace rfhom {

/// Gaussian stream keyed by (seed, index). Each sweep point draws from its
/// own stream, so the result of a point never depends on which worker or
/// shard ran it, or in what order.
class RandomStream {
 public:
  RandomStream(std::uint64_t seed, std::uint64_t index) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(index),
                      static_cast<std::uint32_t>(index >> 32), 0x52464846u};
    engine_.seed(seq);
  }

  /// Zero-mean normal with the given standard deviation.
  double normal(double stddev) { return stddev * unit_(engine_); }

  std::uint64_t bits() { return engine_(); }

 private:
  boost::random::mt19937_64 engine_;
  boost::random::normal_distribution<double> unit_{0.0, 1.0};
};

}  // namespace rfhom
