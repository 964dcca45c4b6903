#include <benchmark/benchmark.h>

#include <vector>

#include "sigverify/dtw.hpp"
#include "sigverify/features.hpp"
#include "sigverify/path_signature.hpp"
#include "sigverify/rng.hpp"
#include "sigverify/training.hpp"

using namespace sigverify;

namespace {

std::vector<Point2> random_walk(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<Point2> pts{{0, 0}};
  for (std::size_t i = 1; i < n; ++i) pts.push_back({pts.back().x + rng.normal(), pts.back().y + rng.normal()});
  return pts;
}

OnlineSignature random_signature(std::size_t n, std::uint64_t seed) {
  OnlineSignature s;
  for (const auto& p : random_walk(n, seed)) s.points.push_back({p.x, p.y});
  s.client_id = "b";
  return s;
}

FeatureSequence random_features(std::size_t rows, std::size_t dim, std::uint64_t seed) {
  Rng rng(seed);
  FeatureSequence f(rows, dim, {});
  for (auto& v : f.values()) v = rng.normal();
  return f;
}

}  // namespace

static void BM_TruncatedSignature(benchmark::State& state) {
  const auto path = random_walk(11, 1);
  const int level = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(truncated_signature(path, level));
}
BENCHMARK(BM_TruncatedSignature)->DenseRange(1, 6);

static void BM_RotationInvariants(benchmark::State& state) {
  const auto path = random_walk(11, 2);
  const int level = static_cast<int>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(rotation_invariants(path, level));
}
BENCHMARK(BM_RotationInvariants)->DenseRange(2, 4);

static void BM_Featurize(benchmark::State& state) {
  const auto sig = random_signature(static_cast<std::size_t>(state.range(0)), 3);
  const FeatureConfig cfg{5, 2, FeatureVariant::lnps, false};
  for (auto _ : state) benchmark::DoNotOptimize(featurize(sig, cfg));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Featurize)->Arg(100)->Arg(400);

static void BM_Dtw(benchmark::State& state) {
  const auto n = static_cast<std::size_t>(state.range(0));
  const auto a = random_features(n, 6, 4);
  const auto b = random_features(n + n / 5, 6, 5);
  for (auto _ : state) benchmark::DoNotOptimize(dtw_distance(a, b));
}
BENCHMARK(BM_Dtw)->Arg(100)->Arg(200)->Arg(400);

static void BM_DtwBanded(benchmark::State& state) {
  const auto a = random_features(400, 6, 4);
  const auto b = random_features(400, 6, 5);
  const DtwConfig cfg{static_cast<int>(state.range(0)), false};
  for (auto _ : state) benchmark::DoNotOptimize(dtw_distance(a, b, cfg));
}
BENCHMARK(BM_DtwBanded)->Arg(10)->Arg(40);

static void BM_GruEmbed(benchmark::State& state) {
  const auto h = static_cast<int>(state.range(0));
  const auto model = GruModel::random({6, h, h, h / 2}, 6);
  const auto seq = random_features(200, 6, 7);
  for (auto _ : state) benchmark::DoNotOptimize(embed(model, seq));
}
BENCHMARK(BM_GruEmbed)->Arg(16)->Arg(128);

static void BM_TripletLossAndGradient(benchmark::State& state) {
  const auto h = static_cast<int>(state.range(0));
  const auto model = GruModel::random({6, h, h, h / 2}, 8);
  const auto a = random_features(150, 6, 9), p = random_features(150, 6, 10), n = random_features(150, 6, 11);
  const std::vector<Triplet> batch{{"c", &a, &p, &n, true}};
  ClientCenters centers{{"c", Vector::Zero(h / 2)}};
  const TrainConfig cfg;
  for (auto _ : state) benchmark::DoNotOptimize(total_loss(batch, model, centers, cfg));
}
BENCHMARK(BM_TripletLossAndGradient)->Arg(16)->Arg(128);
BENCHMARK_MAIN();
