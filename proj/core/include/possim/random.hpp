#pragma once

#include <cstdint>
#include <random>

namespace possim {

/// Seeded pseudo-random stream. Streams for parallel work units are derived
/// from (master seed, index, lane) so results never depend on scheduling.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed);

  static RandomStream substream(std::uint64_t master, std::uint64_t index, std::uint64_t lane = 0);

  /// Uniform on the open interval (0, 1).
  double uniform();
  double normal();
  double exponential(double rate);
  double chi_squared(double dof);
  double cauchy();

  std::mt19937_64& engine() { return engine_; }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

/// SplitMix64 finalizer, used to decorrelate derived seeds.
std::uint64_t mix64(std::uint64_t x);

}  // namespace possim
