#include "sigverify/features.hpp"

#include <cmath>

#include "sigverify/errors.hpp"
#include "sigverify/path_signature.hpp"

namespace sigverify {

const char* to_string(FeatureVariant v) {
  switch (v) {
    case FeatureVariant::lnps: return "lnps";
    case FeatureVariant::lnps_ri: return "lnps_ri";
    case FeatureVariant::delta_xy: return "delta_xy";
  }
  return "?";
}

FeatureVariant variant_from_string(const std::string& s) {
  if (s == "lnps") return FeatureVariant::lnps;
  if (s == "lnps_ri" || s == "lnps-ri") return FeatureVariant::lnps_ri;
  if (s == "delta_xy" || s == "delta-xy") return FeatureVariant::delta_xy;
  throw InvalidArgument("unknown feature variant '" + s + "'");
}

void FeatureConfig::validate() const {
  if (window_half < 1) throw InvalidArgument("window half-width must be >= 1");
  switch (variant) {
    case FeatureVariant::lnps:
      if (level < 1 || level > kMaxSignatureLevel) throw InvalidArgument("lnps level must be in [1, 6]");
      break;
    case FeatureVariant::lnps_ri:
      if (level < 2 || level > 4) throw InvalidArgument("lnps_ri level must be in [2, 4]");
      if (single_level) throw InvalidArgument("single_level applies to the lnps variant only");
      break;
    case FeatureVariant::delta_xy:
      if (single_level) throw InvalidArgument("single_level applies to the lnps variant only");
      break;
  }
}

std::size_t FeatureConfig::dimension() const {
  switch (variant) {
    case FeatureVariant::lnps:
      return single_level ? (std::size_t{1} << level) : signature_dimension(level);
    case FeatureVariant::lnps_ri: return rotation_invariant_layout(level).size();
    case FeatureVariant::delta_xy: return 2;
  }
  return 0;
}

FeatureSequence::FeatureSequence(std::size_t rows, std::size_t dim, FeatureConfig config)
    : rows_(rows), dim_(dim), config_(config), data_(rows * dim, 0.0) {}

FeatureSequence FeatureSequence::from_rows(const std::vector<std::vector<double>>& rows,
                                           FeatureConfig config) {
  const std::size_t dim = rows.empty() ? 0 : rows.front().size();
  FeatureSequence seq(rows.size(), dim, config);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    if (rows[r].size() != dim) throw InvalidArgument("ragged feature rows");
    std::copy(rows[r].begin(), rows[r].end(), seq.row(r).begin());
  }
  return seq;
}

std::vector<Point2> window_at(std::span<const Point2> points, std::size_t n, int window_half) {
  if (n >= points.size()) {
    throw InvalidArgument("window position " + std::to_string(n) + " outside sequence of " +
                          std::to_string(points.size()));
  }
  const std::size_t ws = static_cast<std::size_t>(window_half);
  const std::size_t lo = n >= ws ? n - ws : 0;
  const std::size_t hi = std::min(points.size() - 1, n + ws);
  return {points.begin() + static_cast<std::ptrdiff_t>(lo),
          points.begin() + static_cast<std::ptrdiff_t>(hi) + 1};
}

FeatureSequence extract(const OnlineSignature& sig, const FeatureConfig& config) {
  config.validate();
  if (sig.points.empty()) throw InvalidArgument("cannot featurize an empty signature");
  const auto xy = sig.xy();
  const std::size_t dim = config.dimension();
  FeatureSequence seq(xy.size(), dim, config);

  if (config.variant == FeatureVariant::delta_xy) {
    for (std::size_t n = 1; n < xy.size(); ++n) {
      seq.at(n, 0) = xy[n].x - xy[n - 1].x;
      seq.at(n, 1) = xy[n].y - xy[n - 1].y;
    }
    return seq;
  }

  for (std::size_t n = 0; n < xy.size(); ++n) {
    const auto window = window_at(xy, n, config.window_half);
    if (window.size() < 2) continue;  // single point: zero row
    std::vector<double> row;
    if (config.variant == FeatureVariant::lnps) {
      row = config.single_level ? lnps_level(window, config.level) : lnps(window, config.level);
    } else {
      row = rotation_invariants(window, config.level);
    }
    std::copy(row.begin(), row.end(), seq.row(n).begin());
  }
  return seq;
}

FeatureSequence channel_znorm(const FeatureSequence& seq) {
  FeatureSequence out = seq;
  const std::size_t n = seq.rows();
  if (n == 0) {
    out.set_normalized(true);
    return out;
  }
  for (std::size_t c = 0; c < seq.dim(); ++c) {
    double mean = 0.0;
    for (std::size_t r = 0; r < n; ++r) mean += seq.at(r, c);
    mean /= static_cast<double>(n);
    double var = 0.0;
    for (std::size_t r = 0; r < n; ++r) {
      const double d = seq.at(r, c) - mean;
      var += d * d;
    }
    const double sd = std::sqrt(var / static_cast<double>(n));
    for (std::size_t r = 0; r < n; ++r) {
      out.at(r, c) = sd < 1e-12 ? 0.0 : (seq.at(r, c) - mean) / sd;
    }
  }
  out.set_normalized(true);
  return out;
}

FeatureSequence featurize(const OnlineSignature& sig, const FeatureConfig& config) {
  return channel_znorm(extract(sig, config));
}

}  // namespace sigverify
