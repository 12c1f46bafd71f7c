#include "possim/credal.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <numeric>

#include "possim/error.hpp"

namespace possim {

namespace {
constexpr double kProbTol = 1e-12;
}

void DiscreteCredalInstance::validate() const {
  const std::size_t n = atoms.size();
  if (n == 0) throw ArgumentError("credal instance needs at least one atom");
  if (probs.size() != n || contour_values.size() != n) {
    throw ArgumentError("atoms, probs and contour values must have the same length");
  }
  for (double p : probs) {
    if (!(p >= 0.0) || !std::isfinite(p)) throw ArgumentError("probabilities must be nonnegative");
  }
  const double total = std::accumulate(probs.begin(), probs.end(), 0.0);
  if (std::abs(total - 1.0) > kProbTol * static_cast<double>(n)) {
    throw ArgumentError("probabilities must sum to 1");
  }
  for (double v : contour_values) {
    if (!(v >= 0.0 && v <= 1.0)) throw ArgumentError("contour values must lie in [0, 1]");
  }
  if (*std::max_element(contour_values.begin(), contour_values.end()) != 1.0) {
    throw ArgumentError("contour values must attain 1");
  }
}

CredalResult credal_membership(const DiscreteCredalInstance& instance) {
  instance.validate();
  const auto& pi = instance.contour_values;
  std::vector<double> levels = pi;
  std::sort(levels.begin(), levels.end(), std::greater<>());
  levels.erase(std::unique(levels.begin(), levels.end()), levels.end());

  CredalResult result;
  for (double v : levels) {
    if (v >= 1.0) continue;  // the cut above 1 is empty and needs P >= 0
    CredalWitness w;
    w.binding_value = v;
    w.alpha = v + kProbTol;
    for (std::size_t i = 0; i < pi.size(); ++i) {
      if (pi[i] > v) {
        w.cut.push_back(i);
        w.cut_probability += instance.probs[i];
      }
    }
    if (w.cut_probability < 1.0 - v - kProbTol) {
      result.member = false;
      result.witness = std::move(w);
      return result;
    }
  }
  return result;
}

}  // namespace possim
