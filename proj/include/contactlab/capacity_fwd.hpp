#pragma once

#include <optional>
#include <string>

namespace contactlab {

/// Verdict of the ladder arithmetic pi a1^2 > (2 pi / k) j >= pi a2^2.
struct NonSqueezeDecision {
  int k = 1;
  double a1 = 0.0, a2 = 0.0;
  std::optional<int> witness_j;
  std::string verdict;
  bool requires_r1_cap = false;  ///< set by the prequantization variant
};

}  // namespace contactlab
