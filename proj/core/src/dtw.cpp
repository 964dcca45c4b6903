#include "sigverify/dtw.hpp"

#include <cmath>
#include <limits>
#include <vector>

#include "sigverify/errors.hpp"

namespace sigverify {

namespace {

struct Cell {
  double cost = std::numeric_limits<double>::infinity();
  std::size_t steps = 0;
};

// Lower cost wins; equal cost prefers the shorter path so the result is
// independent of argument order.
const Cell& better(const Cell& a, const Cell& b) {
  if (a.cost != b.cost) return a.cost < b.cost ? a : b;
  return a.steps <= b.steps ? a : b;
}

double row_distance(std::span<const double> u, std::span<const double> v) {
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double d = u[i] - v[i];
    s += d * d;
  }
  return std::sqrt(s);
}

}  // namespace

double dtw_distance(const FeatureSequence& a, const FeatureSequence& b, const DtwConfig& config) {
  if (a.empty() || b.empty()) throw InvalidArgument("dtw: empty sequence");
  if (a.dim() != b.dim()) {
    throw InvalidArgument("dtw: feature dimension mismatch (" + std::to_string(a.dim()) + " vs " +
                          std::to_string(b.dim()) + ")");
  }
  const std::size_t n = a.rows();
  const std::size_t m = b.rows();
  std::size_t band = std::max(n, m);
  if (config.band_radius) {
    if (*config.band_radius < 0) throw InvalidArgument("dtw: negative band radius");
    band = static_cast<std::size_t>(*config.band_radius);
    const std::size_t diff = n > m ? n - m : m - n;
    if (diff > band) {
      throw InvalidArgument("dtw: band radius " + std::to_string(band) +
                            " cannot align lengths " + std::to_string(n) + " and " + std::to_string(m));
    }
  }

  // Two rolling rows over j in [0, m]; column 0 is the border.
  std::vector<Cell> prev(m + 1), cur(m + 1);
  prev[0] = {0.0, 0};
  for (std::size_t i = 1; i <= n; ++i) {
    std::fill(cur.begin(), cur.end(), Cell{});
    const std::size_t j_lo = i > band ? i - band : 1;
    const std::size_t j_hi = std::min(m, i + band);
    for (std::size_t j = j_lo; j <= j_hi; ++j) {
      const Cell& best = better(better(prev[j - 1], prev[j]), cur[j - 1]);
      if (std::isinf(best.cost)) continue;
      cur[j] = {best.cost + row_distance(a.row(i - 1), b.row(j - 1)), best.steps + 1};
    }
    std::swap(prev, cur);
    prev[0] = Cell{};
  }
  const Cell& end = prev[m];
  return config.normalize_by_path ? end.cost / static_cast<double>(end.steps) : end.cost;
}

}  // namespace sigverify
