#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "sigverify/gru.hpp"

namespace sigverify {

struct AdamaxConfig {
  double learning_rate = 0.01;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  double clip = 1.0;  // gradients are clamped to [-clip, clip] first
};

struct AdamaxState {
  std::vector<double> first_moment;
  std::vector<double> inf_norm;
  std::int64_t step = 0;

  explicit AdamaxState(std::size_t n = 0) : first_moment(n, 0.0), inf_norm(n, 0.0) {}
};

/// One Adamax update:
///   g <- clamp(g, -clip, clip)
///   m <- b1 m + (1 - b1) g
///   u <- max(b2 u, |g|)
///   p <- p - lr / (1 - b1^t) * m / max(u, eps)
/// Throws NumericalError on a non-finite gradient (nothing is modified).
void adamax_step(std::span<double> params, std::span<const double> grads, AdamaxState& state,
                 const AdamaxConfig& config);

void adamax_step(GruModel& model, const GruModel& grads, AdamaxState& state,
                 const AdamaxConfig& config);

}  // namespace sigverify
