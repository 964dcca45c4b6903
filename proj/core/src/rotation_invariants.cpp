#include "sigverify/path_signature.hpp"

#include <bit>
#include <cmath>
#include <complex>

#include "sigverify/errors.hpp"

namespace sigverify {

namespace {

using cplx = std::complex<double>;

void check_invariant_level(int level) {
  if (level < 2 || level > 4) {
    throw InvalidArgument("rotation invariants need level in [2, 4], got " + std::to_string(level));
  }
}

// Iterated integrals over the letters dz = dx + i dy and dz̄ = dx - i dy,
// obtained by applying [[1, i], [1, -i]] along every tensor axis of level k.
std::vector<cplx> complex_level(const TensorSignature& sig, int k) {
  const auto real = sig.level(k);
  std::vector<cplx> c(real.begin(), real.end());
  const std::size_t n = c.size();
  for (int axis = 0; axis < k; ++axis) {
    const std::size_t stride = std::size_t{1} << axis;
    for (std::size_t base = 0; base < n; ++base) {
      if (base & stride) continue;
      const cplx vx = c[base];
      const cplx vy = c[base | stride];
      c[base] = vx + cplx(0.0, 1.0) * vy;           // dz
      c[base | stride] = vx - cplx(0.0, 1.0) * vy;  // dz̄
    }
  }
  return c;
}

bool is_balanced(int level, unsigned word) {
  return 2 * std::popcount(word) == level;
}

}  // namespace

std::string InvariantDescriptor::name() const {
  std::string letters;
  for (int i = level - 1; i >= 0; --i) letters += ((word >> i) & 1u) ? "zbar" : "z";
  switch (reduction) {
    case Reduction::real_part: return "re(" + letters + ")";
    case Reduction::imag_part: return "im(" + letters + ")";
    case Reduction::modulus: return "abs(" + letters + ")";
    case Reduction::signed_area: return "area";
  }
  return letters;
}

std::vector<InvariantDescriptor> rotation_invariant_layout(int level) {
  check_invariant_level(level);
  std::vector<InvariantDescriptor> layout;
  for (int k = 1; k <= level; ++k) {
    const unsigned first_letter = 1u << (k - 1);
    for (unsigned w = 0; w < (1u << k); ++w) {
      if (w & first_letter) continue;  // conjugate of a word already listed
      if (is_balanced(k, w)) {
        layout.push_back({k, w, Reduction::real_part});
        layout.push_back({k, w, k == 2 ? Reduction::signed_area : Reduction::imag_part});
      } else {
        layout.push_back({k, w, Reduction::modulus});
      }
    }
  }
  return layout;
}

std::vector<double> rotation_invariants_raw(std::span<const Point2> points, int level) {
  check_invariant_level(level);
  const auto sig = truncated_signature(points, level);
  const auto layout = rotation_invariant_layout(level);

  std::vector<std::vector<cplx>> levels;
  for (int k = 1; k <= level; ++k) levels.push_back(complex_level(sig, k));

  std::vector<double> out;
  out.reserve(layout.size());
  for (const auto& d : layout) {
    const cplx c = levels[d.level - 1][d.word];
    switch (d.reduction) {
      case Reduction::real_part: out.push_back(c.real()); break;
      case Reduction::imag_part: out.push_back(c.imag()); break;
      case Reduction::modulus: out.push_back(std::abs(c)); break;
      case Reduction::signed_area: out.push_back(0.5 * (sig.at({0, 1}) - sig.at({1, 0}))); break;
    }
  }
  return out;
}

std::vector<double> rotation_invariants(std::span<const Point2> points, int level) {
  check_invariant_level(level);
  if (points.size() < 2) throw InvalidArgument("signature needs at least 2 points");
  const double length = path_length(points);
  const auto layout = rotation_invariant_layout(level);
  if (length == 0.0) return std::vector<double>(layout.size(), 0.0);

  auto out = rotation_invariants_raw(points, level);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] /= std::pow(length, layout[i].level);
  return out;
}

}  // namespace sigverify
