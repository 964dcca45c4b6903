#pragma once

#include <cstdint>

#include "sigverify/dataset.hpp"

namespace sigverify {

struct SyntheticConfig {
  int n_clients = 4;
  int genuine_per_client = 12;
  int forgeries_per_client = 12;
  double noise = 0.02;             // per-point Gaussian jitter
  double max_rotation_deg = 10.0;  // genuine/forgery global rotation in +-max
  double min_scale = 0.8;
  double max_scale = 1.25;
  std::uint64_t seed = 0;

  void validate() const;
};

/// Each client gets a smooth prototype curve (3-5 random sinusoids per
/// axis, 80-200 points). Genuine samples are the prototype plus jitter under
/// a random similarity transform; skilled forgeries of client c blend the
/// prototype of client c+1 (mod n) halfway toward c's prototype before the
/// same jitter and transform. Client ids are "s01", "s02", ...
Dataset generate_synthetic_dataset(const SyntheticConfig& config);

}  // namespace sigverify
