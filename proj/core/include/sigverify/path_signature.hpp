#pragma once

#include <span>
#include <string>
#include <vector>

#include "sigverify/signature.hpp"

namespace sigverify {

inline constexpr int kMaxSignatureLevel = 6;

/// Number of coefficients in levels 1..m of a 2-D signature: 2 + 4 + ... + 2^m.
constexpr std::size_t signature_dimension(int level) {
  return level < 1 ? 0 : (std::size_t{1} << (level + 1)) - 2;
}

/// Truncated signature of a 2-D path, levels 1..m. The level-0 term is the
/// constant 1 and is not stored.
///
/// Layout: level k holds 2^k coefficients indexed by words (i_1..i_k) over
/// the alphabet {x=0, y=1}, lexicographic with x before y, so the index is
/// the base-2 number i_1 i_2 ... i_k. flat() concatenates levels 1..m.
class TensorSignature {
 public:
  TensorSignature() = default;
  explicit TensorSignature(int level_max);

  int level_max() const { return level_max_; }

  std::span<double> level(int k);
  std::span<const double> level(int k) const;

  const std::vector<double>& flat() const { return data_; }

  /// Coefficient for a word over {0, 1}.
  double at(std::initializer_list<int> word) const;

  /// Signature of the concatenation of the path of *this followed by the
  /// path of `rhs`, truncated at the common level.
  TensorSignature concat(const TensorSignature& rhs) const;

  /// Signature of a single straight segment: level k is delta^{(x)k} / k!.
  static TensorSignature segment(double dx, double dy, int level_max);

 private:
  static std::size_t offset(int k) { return signature_dimension(k - 1); }

  int level_max_ = 0;
  std::vector<double> data_;
};

double path_length(std::span<const Point2> points);

/// Exact signature of the piecewise-linear interpolation of `points`.
/// Requires >= 2 points and 1 <= level <= 6.
TensorSignature truncated_signature(std::span<const Point2> points, int level);

/// Length-normalized path signature: level k divided by L^k. A path of zero
/// length maps to the zero vector. Layout follows TensorSignature::flat().
std::vector<double> lnps(std::span<const Point2> points, int level);

/// Only the k-th level of lnps (length 2^k).
std::vector<double> lnps_level(std::span<const Point2> points, int level);

enum class Reduction { real_part, imag_part, modulus, signed_area };

/// One entry of a rotation-invariant vector: a word over {dz, dz̄}
/// (bit 0 = dz, bit 1 = dz̄, first letter in the most significant bit)
/// and how the complex iterated integral of that word is reduced to a real.
struct InvariantDescriptor {
  int level = 0;
  unsigned word = 0;
  Reduction reduction = Reduction::real_part;

  std::string name() const;
};

/// Fixed layout for levels 1..m (2 <= m <= 4): for each level, each word
/// whose first letter is dz (the conjugate word carries the same
/// information); balanced words emit real and imaginary parts, unbalanced
/// words emit the modulus. The level-2 balanced word dz dz̄ has real part
/// I2[xx] + I2[yy] (the trace) and its imaginary part is replaced by the
/// signed (Levy) area (I2[xy] - I2[yx]) / 2.
std::vector<InvariantDescriptor> rotation_invariant_layout(int level);

/// Rotation-, translation- and (through length normalization) scale-
/// invariant features. Level-k entries are divided by L^k; a zero-length
/// path maps to the zero vector.
std::vector<double> rotation_invariants(std::span<const Point2> points, int level);

/// Same as rotation_invariants without the length normalization.
std::vector<double> rotation_invariants_raw(std::span<const Point2> points, int level);

}  // namespace sigverify
