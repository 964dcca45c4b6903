#pragma once

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <vector>

#include "sigverify/signature.hpp"

namespace sigverify {

enum class FeatureVariant : std::uint32_t { lnps = 0, lnps_ri = 1, delta_xy = 2 };

const char* to_string(FeatureVariant v);
FeatureVariant variant_from_string(const std::string& s);

struct FeatureConfig {
  int window_half = 4;  // window W = 2 * window_half + 1
  int level = 2;
  FeatureVariant variant = FeatureVariant::lnps;
  // lnps only: emit level `level` alone instead of levels 1..level.
  bool single_level = false;

  int window_size() const { return 2 * window_half + 1; }

  /// Row dimension produced by extract().
  std::size_t dimension() const;

  /// Throws InvalidArgument when window_half < 1 or the level is outside the
  /// variant's range (lnps: 1..6, lnps_ri: 2..4; ignored for delta_xy).
  void validate() const;

  friend bool operator==(const FeatureConfig&, const FeatureConfig&) = default;
};

/// N rows of fixed dimension F, stored row-major.
class FeatureSequence {
 public:
  FeatureSequence() = default;
  FeatureSequence(std::size_t rows, std::size_t dim, FeatureConfig config);

  std::size_t rows() const { return rows_; }
  std::size_t dim() const { return dim_; }
  bool empty() const { return rows_ == 0; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * dim_, dim_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * dim_, dim_}; }

  double& at(std::size_t r, std::size_t c) { return data_[r * dim_ + c]; }
  double at(std::size_t r, std::size_t c) const { return data_[r * dim_ + c]; }

  const std::vector<double>& values() const { return data_; }
  std::vector<double>& values() { return data_; }

  const FeatureConfig& config() const { return config_; }
  bool normalized() const { return normalized_; }
  void set_normalized(bool v) { normalized_ = v; }

  /// Builds a sequence from explicit rows (all the same length).
  static FeatureSequence from_rows(const std::vector<std::vector<double>>& rows,
                                   FeatureConfig config = {});

 private:
  std::size_t rows_ = 0;
  std::size_t dim_ = 0;
  FeatureConfig config_{};
  bool normalized_ = false;
  std::vector<double> data_;
};

/// Points at indices max(0, n - ws) .. min(N - 1, n + ws) (0-based n).
std::vector<Point2> window_at(std::span<const Point2> points, std::size_t n, int window_half);

/// Unnormalized per-point features.
FeatureSequence extract(const OnlineSignature& sig, const FeatureConfig& config);

/// Per-channel z-score with population standard deviation over the rows of
/// this sequence. Channels with spread below 1e-12 become zero.
FeatureSequence channel_znorm(const FeatureSequence& seq);

/// extract followed by channel_znorm.
FeatureSequence featurize(const OnlineSignature& sig, const FeatureConfig& config);

// Binary container, little-endian:
//   "LNPS" | version u32 | N u32 | F u32 | window_half u32 | level u32 |
//   variant u32 | flags u32 (bit 0 normalized, bit 1 single_level) |
//   N*F f64 row-major
inline constexpr std::uint32_t kFeatureFormatVersion = 1;

std::vector<unsigned char> serialize(const FeatureSequence& seq);
FeatureSequence deserialize_features(std::span<const unsigned char> bytes);

void save_features(const FeatureSequence& seq, const std::filesystem::path& path);
FeatureSequence load_features(const std::filesystem::path& path);

}  // namespace sigverify
