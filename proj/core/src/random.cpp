#include "possim/random.hpp"

#include <cmath>
#include <numbers>

namespace possim {

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

RandomStream::RandomStream(std::uint64_t seed) : engine_(mix64(seed)) {}

RandomStream RandomStream::substream(std::uint64_t master, std::uint64_t index, std::uint64_t lane) {
  std::uint64_t key = mix64(master);
  key = mix64(key ^ (index * 0xd1b54a32d192ed03ULL));
  key = mix64(key ^ (lane * 0x8cb92ba72f3d8dd7ULL));
  return RandomStream(key);
}

double RandomStream::uniform() {
  // 53 random bits, shifted half a step off zero.
  return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
}

double RandomStream::normal() { return normal_(engine_); }

double RandomStream::exponential(double rate) { return -std::log(uniform()) / rate; }

double RandomStream::chi_squared(double dof) {
  std::chi_squared_distribution<double> dist(dof);
  return dist(engine_);
}

double RandomStream::cauchy() { return std::tan(std::numbers::pi * (uniform() - 0.5)); }

}  // namespace possim
