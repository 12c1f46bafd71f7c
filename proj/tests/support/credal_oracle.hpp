#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <vector>

#include "possim/credal.hpp"
#include "possim/random.hpp"

namespace oracle {

/// P is in the credal set iff P(K) <= max_{u in K} pi(u) for every subset K.
inline bool credal_brute_force(const possim::DiscreteCredalInstance& inst) {
  const std::size_t n = inst.probs.size();
  for (unsigned long mask = 1; mask < (1ul << n); ++mask) {
    double p = 0.0, sup = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (mask & (1ul << i)) {
        p += inst.probs[i];
        sup = std::max(sup, inst.contour_values[i]);
      }
    }
    if (p > sup + 1e-12) return false;
  }
  return true;
}

/// Random instance with 1..12 atoms. Contour values are drawn from a coarse
/// lattice so ties occur, and probabilities are sometimes tilted toward the
/// mode so that both outcomes are common.
inline possim::DiscreteCredalInstance random_credal_instance(possim::RandomStream& rng) {
  possim::DiscreteCredalInstance inst;
  const std::size_t n = 1 + static_cast<std::size_t>(rng.uniform() * 12);
  const std::size_t top = static_cast<std::size_t>(rng.uniform() * n);
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    inst.atoms.push_back("a" + std::to_string(i));
    inst.contour_values.push_back(i == top ? 1.0 : std::floor(rng.uniform() * 10.0) / 10.0);
    const double w = rng.exponential(1.0) * (1.0 + 4.0 * inst.contour_values[i] * rng.uniform());
    inst.probs.push_back(w);
    total += w;
  }
  for (auto& p : inst.probs) p /= total;
  // Renormalize exactly so validate() accepts the sum.
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < n; ++i) sum += inst.probs[i];
  inst.probs.back() = std::max(0.0, 1.0 - sum);
  return inst;
}

}  // namespace oracle
