#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sigverify/dtw.hpp"
#include "sigverify/errors.hpp"
#include "sigverify/rng.hpp"

using namespace sigverify;

namespace {

using Rows = std::vector<std::vector<double>>;

Rows random_rows(Rng& rng, std::size_t n, std::size_t dim) {
  Rows r(n, std::vector<double>(dim));
  for (auto& row : r) {
    for (auto& v : row) v = rng.uniform(-2, 2);
  }
  return r;
}

FeatureSequence seq(const Rows& r) { return FeatureSequence::from_rows(r); }

}  // namespace

TEST_CASE("hand examples") {
  CHECK(dtw_distance(seq({{0}, {1}}), seq({{0}, {1}, {1}})) == 0.0);
  CHECK(dtw_distance(seq({{0}}), seq({{3}})) == 3.0);
  Rng rng(1);
  const auto a = seq(random_rows(rng, 20, 3));
  CHECK(dtw_distance(a, a) == 0.0);
}

TEST_CASE("matches exhaustive path enumeration") {
  Rng rng(2);
  for (int trial = 0; trial < 200; ++trial) {
    const auto a = random_rows(rng, 1 + rng.index(6), 1 + rng.index(3));
    const auto b = random_rows(rng, 1 + rng.index(6), a[0].size());
    CHECK(dtw_distance(seq(a), seq(b)) == doctest::Approx(oracle::dtw_bruteforce(a, b)).epsilon(1e-12));
  }
}

TEST_CASE("symmetry is exact") {
  Rng rng(3);
  for (int trial = 0; trial < 100; ++trial) {
    const auto a = seq(random_rows(rng, 1 + rng.index(30), 4));
    const auto b = seq(random_rows(rng, 1 + rng.index(30), 4));
    CHECK(dtw_distance(a, b) == dtw_distance(b, a));
    DtwConfig norm{std::nullopt, true};
    CHECK(dtw_distance(a, b, norm) == dtw_distance(b, a, norm));
    const int r = static_cast<int>(std::max(a.rows(), b.rows()) - std::min(a.rows(), b.rows())) + 2;
    CHECK(dtw_distance(a, b, {r, false}) == dtw_distance(b, a, {r, false}));
  }
}

TEST_CASE("cost is non-increasing as the band widens") {
  Rng rng(4);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = seq(random_rows(rng, 10 + rng.index(20), 2));
    const auto b = seq(random_rows(rng, 10 + rng.index(20), 2));
    const int diff = static_cast<int>(a.rows() > b.rows() ? a.rows() - b.rows() : b.rows() - a.rows());
    double prev = dtw_distance(a, b, {diff, false});
    for (int r = diff + 1; r <= 35; ++r) {
      const double cur = dtw_distance(a, b, {r, false});
      CHECK(cur <= prev);
      prev = cur;
    }
    CHECK(prev == dtw_distance(a, b));
  }
}

TEST_CASE("path normalization divides by the warping path length") {
  // Identical lengths with a perfect diagonal: cost / n.
  const auto a = seq({{0}, {0}, {0}});
  const auto b = seq({{1}, {1}, {1}});
  CHECK(dtw_distance(a, b) == 3.0);
  CHECK(dtw_distance(a, b, {std::nullopt, true}) == doctest::Approx(1.0));
}

TEST_CASE("errors") {
  CHECK_THROWS_AS(dtw_distance(seq({{0, 1}}), seq({{0}})), InvalidArgument);
  CHECK_THROWS_AS(dtw_distance(FeatureSequence{}, seq({{0}})), InvalidArgument);
  CHECK_THROWS_AS(dtw_distance(seq({{0}}), seq({{0}, {1}, {2}}), {1, false}), InvalidArgument);
  CHECK_THROWS_AS(dtw_distance(seq({{0}}), seq({{0}}), {-1, false}), InvalidArgument);
  CHECK_NOTHROW(dtw_distance(seq({{0}}), seq({{0}, {1}, {2}}), {2, false}));
}
