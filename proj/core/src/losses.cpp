#include "sigverify/losses.hpp"

#include <algorithm>

#include "sigverify/errors.hpp"

namespace sigverify {

double triplet_loss(double d_ap, double d_an, double margin) {
  return std::max(d_ap - d_an + margin, 0.0);
}

double center_loss(const Vector& emb_g, const Vector& emb_p, const Vector& center) {
  if (emb_g.size() != center.size() || emb_p.size() != center.size()) {
    throw InvalidArgument("center_loss: dimension mismatch");
  }
  return (emb_g - center).norm() + (emb_p - center).norm();
}

double fc_weight_decay(const GruModel& model) { return model.fc_weight.squaredNorm(); }

}  // namespace sigverify
