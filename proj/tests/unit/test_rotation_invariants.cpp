#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <numbers>
#include <set>

#include "sigverify/errors.hpp"
#include "sigverify/path_signature.hpp"
#include "test_util.hpp"

using namespace sigverify;
using testutil::max_rel_diff;

namespace {

std::size_t area_index(int level) {
  const auto layout = rotation_invariant_layout(level);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (layout[i].reduction == Reduction::signed_area) return i;
  }
  FAIL("layout has no signed-area entry");
  return 0;
}

std::size_t trace_index(int level) {
  const auto layout = rotation_invariant_layout(level);
  for (std::size_t i = 0; i < layout.size(); ++i) {
    if (layout[i].level == 2 && layout[i].reduction == Reduction::real_part) return i;
  }
  FAIL("layout has no trace entry");
  return 0;
}

const std::vector<Point2> kUnitSquareCcw{{0, 0}, {1, 0}, {1, 1}, {0, 1}, {0, 0}};

}  // namespace

TEST_CASE("layout sizes and uniqueness") {
  CHECK(rotation_invariant_layout(2).size() == 4);
  CHECK(rotation_invariant_layout(3).size() == 8);
  CHECK(rotation_invariant_layout(4).size() == 19);
  std::set<std::string> names;
  for (const auto& d : rotation_invariant_layout(4)) names.insert(d.name());
  CHECK(names.size() == 19);
}

TEST_CASE("unit square counterclockwise: signed area") {
  const auto raw = rotation_invariants_raw(kUnitSquareCcw, 2);
  CHECK(raw[area_index(2)] == doctest::Approx(1.0).epsilon(1e-14));
  const auto norm = rotation_invariants(kUnitSquareCcw, 2);
  CHECK(norm[area_index(2)] == doctest::Approx(1.0 / 16.0).epsilon(1e-14));

  std::vector<Point2> cw(kUnitSquareCcw.rbegin(), kUnitSquareCcw.rend());
  CHECK(rotation_invariants_raw(cw, 2)[area_index(2)] == doctest::Approx(-1.0).epsilon(1e-14));
}

TEST_CASE("trace entry matches I2[xx] + I2[yy]") {
  Rng rng(5);
  const auto path = testutil::random_path(rng, 12);
  const auto sig = truncated_signature(path, 2);
  CHECK(rotation_invariants_raw(path, 3)[trace_index(3)] ==
        doctest::Approx(sig.at({0, 0}) + sig.at({1, 1})).epsilon(1e-12));
}

TEST_CASE("straight segment has zero area") {
  CHECK(rotation_invariants(std::vector<Point2>{{0, 0}, {2, 5}}, 2)[area_index(2)] == doctest::Approx(0.0));
  CHECK(rotation_invariants(std::vector<Point2>{{0, 0}, {1, 1}, {3, 3}}, 4)[area_index(4)] == doctest::Approx(0.0));
}

TEST_CASE("rotation by 137 degrees about (5, -2)") {
  Rng rng(41);
  const auto path = testutil::random_path(rng, 15);
  const auto rotated = testutil::transform(path, 137.0 * std::numbers::pi / 180.0, 1.0, {5, -2}, {0, 0});
  for (int m = 2; m <= 4; ++m) CHECK(max_rel_diff(rotation_invariants(path, m), rotation_invariants(rotated, m)) < 1e-9);
}

TEST_CASE("invariant under random similarity transforms") {
  Rng rng(43);
  for (int trial = 0; trial < 100; ++trial) {
    const auto path = testutil::random_path(rng, 2 + rng.index(20));
    const auto moved = testutil::transform(path, rng.uniform(-10, 10), rng.uniform(0.05, 20),
                                           {rng.uniform(-5, 5), rng.uniform(-5, 5)},
                                           {rng.uniform(-100, 100), rng.uniform(-100, 100)});
    CHECK(max_rel_diff(rotation_invariants(path, 4), rotation_invariants(moved, 4)) < 1e-9);
  }
}

TEST_CASE("raw lnps is not rotation invariant") {
  // Guards against a vacuous invariance test.
  const std::vector<Point2> path{{0, 0}, {1, 0}, {1, 2}};
  const auto rotated = testutil::transform(path, 0.7, 1.0, {0, 0}, {0, 0});
  CHECK(max_rel_diff(lnps(path, 2), lnps(rotated, 2)) > 1e-3);
}

TEST_CASE("level range") {
  const std::vector<Point2> two{{0, 0}, {1, 1}};
  CHECK_THROWS_AS(rotation_invariants(two, 1), InvalidArgument);
  CHECK_THROWS_AS(rotation_invariants(two, 5), InvalidArgument);
  const auto zero = rotation_invariants(std::vector<Point2>{{3, 3}, {3, 3}}, 3);
  for (double v : zero) CHECK(v == 0.0);
}
