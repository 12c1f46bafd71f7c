#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

namespace possim {

/// A probability on finitely many atoms paired with a possibility contour on
/// the same atoms.
struct DiscreteCredalInstance {
  std::vector<std::string> atoms;
  std::vector<double> probs;
  std::vector<double> contour_values;

  /// Throws ArgumentError on mismatched sizes, negative or unnormalized
  /// probabilities, or a contour outside [0, 1] without a value of 1.
  void validate() const;
};

struct CredalWitness {
  /// Level just above the binding contour value at which the cut fails.
  double alpha = 0.0;
  /// Contour value whose open upper level set is the failing cut.
  double binding_value = 0.0;
  std::vector<std::size_t> cut;
  double cut_probability = 0.0;
};

struct CredalResult {
  bool member = true;
  std::optional<CredalWitness> witness;
};

/// Whether P lies in the credal set of the contour: P(C_alpha) >= 1 - alpha
/// for every alpha. Only the cuts just above each distinct contour value can
/// bind; they are checked from the highest value down and the first failure
/// is returned as the witness.
CredalResult credal_membership(const DiscreteCredalInstance& instance);

}  // namespace possim
