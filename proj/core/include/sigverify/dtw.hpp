#pragma once

#include <optional>

#include "sigverify/features.hpp"

namespace sigverify {

struct DtwConfig {
  std::optional<int> band_radius;  // Sakoe-Chiba |i - j| <= r; empty = unconstrained
  bool normalize_by_path = false;  // divide by the number of cells on the optimal path
};

/// Minimum accumulated Euclidean row distance over monotone warping paths
/// with steps (1,0), (0,1), (1,1). Symmetric in its arguments.
///
/// Throws InvalidArgument on empty or dimension-mismatched input, and on a
/// band radius that is negative or narrower than the length difference.
double dtw_distance(const FeatureSequence& a, const FeatureSequence& b, const DtwConfig& config = {});

}  // namespace sigverify
