#pragma once

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "sigverify/rng.hpp"
#include "sigverify/training.hpp"

namespace gradcheck {

using namespace sigverify;

inline FeatureSequence random_sequence(Rng& rng, std::size_t len, std::size_t dim) {
  FeatureSequence s(len, dim, {});
  for (auto& v : s.values()) v = rng.normal();
  return s;
}

struct Problem {
  GruModel model;
  std::vector<FeatureSequence> seqs;  // anchor, positive, negative
  std::vector<Triplet> triplets;
  ClientCenters centers;
  TrainConfig config;
};

/// Tiny random model (input 3, hidden 4/4, embedding 2) with one triplet of
/// length-5 sequences and random constant centers.
inline Problem make_problem(std::uint64_t seed) {
  Rng rng(seed);
  Problem p;
  p.model = GruModel::random({3, 4, 4, 2}, seed * 7 + 1);
  // Random biases exercise every parameter path.
  GruModel::visit(p.model, [&](auto& t) {
    if (t.cols() == 1) {
      for (Eigen::Index i = 0; i < t.size(); ++i) t.data()[i] = rng.uniform(-0.5, 0.5);
    }
  });
  p.model.fc_weight *= 3.0;  // spread embeddings so the hinge is active or clearly inactive
  p.seqs.reserve(3);
  for (int i = 0; i < 3; ++i) p.seqs.push_back(random_sequence(rng, 5, 3));
  p.triplets.push_back({"a", &p.seqs[0], &p.seqs[1], &p.seqs[2], true});
  Vector c(2);
  c << rng.uniform(-1, 1), rng.uniform(-1, 1);
  p.centers["a"] = c;
  p.config.lambda_decay = 0.01;  // larger than default so the decay path is visible
  return p;
}

inline double pre_hinge(const Problem& p) {
  const Vector a = embed(p.model, p.seqs[0]);
  const Vector pos = embed(p.model, p.seqs[1]);
  const Vector n = embed(p.model, p.seqs[2]);
  return (a - pos).norm() - (a - n).norm() + p.config.margin;
}

struct Result {
  double max_rel_error = 0.0;
  std::size_t checked = 0;
  bool skipped = false;  // hinge too close to its kink
};

/// Central differences with step h over every parameter. Relative error is
/// |analytic - numeric| / max(|analytic|, |numeric|, floor).
inline Result check(Problem& p, double h = 1e-5, double floor = 1e-6) {
  Result r;
  if (std::abs(pre_hinge(p)) < 1e-3) {
    r.skipped = true;
    return r;
  }
  const auto analytic = total_loss(p.triplets, p.model, p.centers, p.config).gradient.flatten();
  auto params = p.model.flatten();
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double orig = params[i];
    params[i] = orig + h;
    p.model.assign(params);
    const double up = total_loss(p.triplets, p.model, p.centers, p.config).loss.total;
    params[i] = orig - h;
    p.model.assign(params);
    const double down = total_loss(p.triplets, p.model, p.centers, p.config).loss.total;
    params[i] = orig;
    const double numeric = (up - down) / (2 * h);
    const double den = std::max({std::abs(analytic[i]), std::abs(numeric), floor});
    r.max_rel_error = std::max(r.max_rel_error, std::abs(analytic[i] - numeric) / den);
    ++r.checked;
  }
  p.model.assign(params);
  return r;
}

}  // namespace gradcheck
