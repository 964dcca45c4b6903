#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace sigverify {

struct Point2 {
  double x = 0.0;
  double y = 0.0;

  friend bool operator==(const Point2&, const Point2&) = default;
};

struct PenPoint {
  double x = 0.0;
  double y = 0.0;
  std::optional<std::int64_t> t;  // milliseconds
  bool pen_down = true;

  friend bool operator==(const PenPoint&, const PenPoint&) = default;
};

enum class SampleLabel { genuine, skilled_forgery };

const char* to_string(SampleLabel label);
SampleLabel label_from_string(const std::string& s);

struct OnlineSignature {
  std::vector<PenPoint> points;
  std::string client_id;
  SampleLabel label = SampleLabel::genuine;
  int sample_index = 0;

  std::size_t size() const { return points.size(); }

  /// x-y trajectory; the only channels the descriptors consume.
  std::vector<Point2> xy() const;
};

/// Throws InvalidArgument when the signature is empty, has a non-finite
/// coordinate, or has decreasing timestamps.
void validate(const OnlineSignature& sig);

}  // namespace sigverify
