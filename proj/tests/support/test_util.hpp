#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

#include "sigverify/rng.hpp"
#include "sigverify/signature.hpp"

namespace testutil {

using sigverify::Point2;

inline std::vector<Point2> random_path(sigverify::Rng& rng, std::size_t n, double spread = 1.0) {
  std::vector<Point2> pts;
  Point2 p{rng.uniform(-spread, spread), rng.uniform(-spread, spread)};
  for (std::size_t i = 0; i < n; ++i) {
    pts.push_back(p);
    p.x += rng.uniform(-spread, spread);
    p.y += rng.uniform(-spread, spread);
  }
  return pts;
}

inline std::vector<Point2> transform(const std::vector<Point2>& pts, double angle, double scale, Point2 center,
                                     Point2 shift) {
  const double c = std::cos(angle), s = std::sin(angle);
  std::vector<Point2> out;
  for (const auto& p : pts) {
    const double x = p.x - center.x, y = p.y - center.y;
    out.push_back({center.x + scale * (c * x - s * y) + shift.x, center.y + scale * (s * x + c * y) + shift.y});
  }
  return out;
}

/// max |a - b| relative to the largest magnitude in either vector.
inline double max_rel_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double num = 0.0, den = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    num = std::max(num, std::abs(a[i] - b[i]));
    den = std::max({den, std::abs(a[i]), std::abs(b[i])});
  }
  return den == 0.0 ? num : num / den;
}

inline sigverify::OnlineSignature make_signature(const std::vector<Point2>& pts, const std::string& client = "c",
                                                 sigverify::SampleLabel label = sigverify::SampleLabel::genuine,
                                                 int index = 1) {
  sigverify::OnlineSignature sig;
  for (const auto& p : pts) sig.points.push_back({p.x, p.y, std::nullopt, true});
  sig.client_id = client;
  sig.label = label;
  sig.sample_index = index;
  return sig;
}

}  // namespace testutil
