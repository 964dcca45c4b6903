#pragma once

#include "sigverify/gru.hpp"

namespace sigverify {

/// max(d_ap - d_an + margin, 0)
double triplet_loss(double d_ap, double d_an, double margin);

/// ||emb_g - center|| + ||emb_p - center|| with unsquared Euclidean norms.
double center_loss(const Vector& emb_g, const Vector& emb_p, const Vector& center);

/// Squared Frobenius norm of the FC weight (the bias is not decayed).
double fc_weight_decay(const GruModel& model);

}  // namespace sigverify
