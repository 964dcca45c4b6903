#include "sigverify/path_signature.hpp"

#include <cmath>

#include "sigverify/errors.hpp"

namespace sigverify {

namespace {

void check_level(int level, int lo, int hi) {
  if (level < lo || level > hi) {
    throw InvalidArgument("signature level " + std::to_string(level) + " outside [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
  }
}

}  // namespace

TensorSignature::TensorSignature(int level_max) : level_max_(level_max) {
  check_level(level_max, 1, kMaxSignatureLevel);
  data_.assign(signature_dimension(level_max), 0.0);
}

std::span<double> TensorSignature::level(int k) {
  return {data_.data() + offset(k), std::size_t{1} << k};
}

std::span<const double> TensorSignature::level(int k) const {
  return {data_.data() + offset(k), std::size_t{1} << k};
}

double TensorSignature::at(std::initializer_list<int> word) const {
  const int k = static_cast<int>(word.size());
  check_level(k, 1, level_max_);
  std::size_t idx = 0;
  for (int letter : word) idx = (idx << 1) | static_cast<std::size_t>(letter);
  return level(k)[idx];
}

TensorSignature TensorSignature::segment(double dx, double dy, int level_max) {
  TensorSignature sig(level_max);
  auto first = sig.level(1);
  first[0] = dx;
  first[1] = dy;
  // level k = level (k-1) (x) delta / k
  for (int k = 2; k <= level_max; ++k) {
    const auto prev = sig.level(k - 1);
    auto cur = sig.level(k);
    for (std::size_t i = 0; i < prev.size(); ++i) {
      cur[2 * i] = prev[i] * dx / k;
      cur[2 * i + 1] = prev[i] * dy / k;
    }
  }
  return sig;
}

TensorSignature TensorSignature::concat(const TensorSignature& rhs) const {
  const int m = std::min(level_max_, rhs.level_max_);
  TensorSignature out(m);
  for (int k = 1; k <= m; ++k) {
    auto dst = out.level(k);
    const auto a_k = level(k);
    const auto b_k = rhs.level(k);
    for (std::size_t i = 0; i < dst.size(); ++i) dst[i] = a_k[i] + b_k[i];
    for (int j = 1; j < k; ++j) {
      const auto a = level(j);
      const auto b = rhs.level(k - j);
      for (std::size_t i = 0; i < a.size(); ++i) {
        for (std::size_t l = 0; l < b.size(); ++l) dst[i * b.size() + l] += a[i] * b[l];
      }
    }
  }
  return out;
}

double path_length(std::span<const Point2> points) {
  double total = 0.0;
  for (std::size_t i = 1; i < points.size(); ++i) {
    total += std::hypot(points[i].x - points[i - 1].x, points[i].y - points[i - 1].y);
  }
  return total;
}

TensorSignature truncated_signature(std::span<const Point2> points, int level) {
  check_level(level, 1, kMaxSignatureLevel);
  if (points.size() < 2) throw InvalidArgument("signature needs at least 2 points");

  TensorSignature sig(level);
  // Scratch for the segment exponential, reused across segments.
  TensorSignature seg(level);
  for (std::size_t p = 1; p < points.size(); ++p) {
    const double dx = points[p].x - points[p - 1].x;
    const double dy = points[p].y - points[p - 1].y;
    if (dx == 0.0 && dy == 0.0) continue;
    seg = TensorSignature::segment(dx, dy, level);
    // In-place Chen product sig <- sig (x) seg; descending k reads lower
    // levels of sig before they are overwritten.
    for (int k = level; k >= 1; --k) {
      auto dst = sig.level(k);
      const auto e_k = seg.level(k);
      for (std::size_t i = 0; i < dst.size(); ++i) dst[i] += e_k[i];
      for (int j = 1; j < k; ++j) {
        const auto a = sig.level(j);
        const auto b = seg.level(k - j);
        for (std::size_t i = 0; i < a.size(); ++i) {
          const double ai = a[i];
          for (std::size_t l = 0; l < b.size(); ++l) dst[i * b.size() + l] += ai * b[l];
        }
      }
    }
  }
  return sig;
}

std::vector<double> lnps(std::span<const Point2> points, int level) {
  check_level(level, 1, kMaxSignatureLevel);
  if (points.size() < 2) throw InvalidArgument("signature needs at least 2 points");
  const double length = path_length(points);
  if (length == 0.0) return std::vector<double>(signature_dimension(level), 0.0);

  auto sig = truncated_signature(points, level);
  std::vector<double> out = sig.flat();
  std::size_t pos = 0;
  double scale = 1.0;
  for (int k = 1; k <= level; ++k) {
    scale *= length;
    const std::size_t n = std::size_t{1} << k;
    for (std::size_t i = 0; i < n; ++i) out[pos + i] /= scale;
    pos += n;
  }
  return out;
}

std::vector<double> lnps_level(std::span<const Point2> points, int level) {
  const auto full = lnps(points, level);
  const std::size_t n = std::size_t{1} << level;
  return {full.end() - static_cast<std::ptrdiff_t>(n), full.end()};
}

}  // namespace sigverify
