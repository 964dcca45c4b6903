#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "oracles.hpp"
#include "sigverify/errors.hpp"
#include "sigverify/scoring.hpp"
#include "test_util.hpp"

using namespace sigverify;

namespace {

std::vector<VerificationScore> labeled(const std::vector<double>& genuine, const std::vector<double>& forgery) {
  std::vector<VerificationScore> out;
  for (double g : genuine) out.push_back({"c", g, SampleLabel::genuine, false});
  for (double f : forgery) out.push_back({"c", f, SampleLabel::skilled_forgery, false});
  return out;
}

}  // namespace

TEST_CASE("template_score hand examples") {
  CHECK(template_score(std::vector<double>{1, 3}, std::vector<double>{2}) == 1.0);
  CHECK(template_score(std::vector<double>{1, 2, 3}, std::vector<double>{2, 2, 2}) == 1.0);
  CHECK(template_score(std::vector<double>{0.5, 0.5}, std::vector<double>{2}) == 0.25);
}

TEST_CASE("template_score is invariant to a common distance scale") {
  Rng rng(1);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + rng.index(8);
    std::vector<double> dt(n), dp(n * (n - 1) / 2);
    for (auto& d : dt) d = rng.uniform(0, 5);
    for (auto& d : dp) d = rng.uniform(0.1, 5);
    const double k = std::ldexp(1.0, static_cast<int>(rng.index(20)) - 10);  // exact power of two
    auto dt2 = dt, dp2 = dp;
    for (auto& d : dt2) d *= k;
    for (auto& d : dp2) d *= k;
    CHECK(template_score(dt, dp) == template_score(dt2, dp2));
    CHECK(template_score(dt, dp) == doctest::Approx(template_score(dt, dp) * 1.0));
  }
}

TEST_CASE("template_score errors") {
  CHECK_THROWS_AS(template_score(std::vector<double>{1}, std::vector<double>{}), InvalidArgument);
  CHECK_THROWS_AS(template_score(std::vector<double>{1, 2}, std::vector<double>{0}), DegenerateTemplates);
  CHECK_THROWS_AS(template_score(std::vector<double>{1, 2, 3}, std::vector<double>{1}), InvalidArgument);
  CHECK_THROWS_AS(template_score(std::vector<double>{-1, 2}, std::vector<double>{1}), InvalidArgument);

  const auto fallback = score_from_distances(std::vector<double>{1, 3}, std::vector<double>{0});
  CHECK(fallback.degenerate);
  CHECK(fallback.score == 2.0);
}

TEST_CASE("score_probe, DTW backend") {
  Rng rng(2);
  std::vector<OnlineSignature> templates;
  for (int i = 0; i < 3; ++i) templates.push_back(testutil::make_signature(testutil::random_path(rng, 30), "u7"));
  const FeatureConfig fc{2, 2, FeatureVariant::lnps, false};
  const Backend dtw = DtwBackend{};

  // probe identical to template 0
  auto probe = templates[0];
  probe.label = SampleLabel::skilled_forgery;
  const auto s = score_probe(probe, templates, dtw, fc);
  CHECK(s.client_id == "u7");
  CHECK(s.truth == SampleLabel::skilled_forgery);
  CHECK(s.score > 0.0);

  // composed by hand from the backend distances
  std::vector<FeatureSequence> feats;
  for (const auto& t : templates) feats.push_back(featurize(t, fc));
  const auto pf = featurize(probe, fc);
  const auto d_test = probe_distances(pf, feats, dtw);
  CHECK(d_test[0] == 0.0);
  const auto d_pair = pairwise_distances(feats, dtw);
  REQUIRE(d_pair.size() == 3);
  CHECK(d_pair[1] == dtw_distance(feats[0], feats[2]));
  CHECK(s.score == template_score(d_test, d_pair));

  CHECK_THROWS_AS(score_probe(probe, std::span(templates).first(1), dtw, fc), InvalidArgument);
}

TEST_CASE("score_probe, RNN backend with a zero model hits the degenerate path") {
  Rng rng(3);
  std::vector<OnlineSignature> templates;
  for (int i = 0; i < 3; ++i) templates.push_back(testutil::make_signature(testutil::random_path(rng, 20)));
  const FeatureConfig fc{2, 2, FeatureVariant::lnps, false};
  const auto zero = GruModel::zeros({6, 4, 4, 3});
  const auto s = score_probe(templates[1], templates, RnnBackend{&zero}, fc);
  CHECK(s.degenerate);
  CHECK(s.score == 0.0);
}

TEST_CASE("DTW template perturbation never lowers the score of a matching probe") {
  Rng rng(4);
  const FeatureConfig fc{2, 2, FeatureVariant::lnps, false};
  for (int trial = 0; trial < 10; ++trial) {
    std::vector<OnlineSignature> templates;
    for (int i = 0; i < 3; ++i) templates.push_back(testutil::make_signature(testutil::random_path(rng, 25)));
    const auto probe = templates[0];
    auto perturbed = templates;
    auto pts = testutil::random_path(rng, 25);
    perturbed[0] = testutil::make_signature(pts);
    // With template 0 replaced, the probe no longer has a zero distance to it.
    std::vector<FeatureSequence> a, b;
    for (const auto& t : templates) a.push_back(featurize(t, fc));
    for (const auto& t : perturbed) b.push_back(featurize(t, fc));
    const auto pf = featurize(probe, fc);
    const auto da = probe_distances(pf, a, DtwBackend{});
    const auto db = probe_distances(pf, b, DtwBackend{});
    CHECK(da[0] <= db[0]);
  }
}

TEST_CASE("compute_eer hand examples") {
  CHECK(compute_eer(labeled({0.1, 0.2}, {0.8, 0.9})).eer == 0.0);
  const auto mid = compute_eer(labeled({0.1, 0.2, 0.4}, {0.3, 0.8, 0.9}));
  CHECK(mid.eer == doctest::Approx(1.0 / 3.0).epsilon(1e-15));
  CHECK(mid.threshold > 0.3);
  CHECK(mid.threshold <= 0.4 + 1e-12);
  CHECK(compute_eer(labeled({1, 2, 3}, {1, 2, 3})).eer == doctest::Approx(0.5));
  CHECK(compute_eer(labeled({1, 2}, {1, 2})).eer == doctest::Approx(0.5));
  CHECK(compute_eer(labeled({5, 6}, {1, 2})).eer == 1.0);
}

TEST_CASE("compute_eer matches an exhaustive sweep") {
  Rng rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t ng = 1 + rng.index(10), nf = 1 + rng.index(10);
    std::vector<double> g(ng), f(nf);
    // coarse grid so ties are common
    for (auto& v : g) v = static_cast<double>(rng.index(8)) / 4.0;
    for (auto& v : f) v = static_cast<double>(rng.index(8)) / 4.0 + 0.5;
    CHECK(compute_eer(labeled(g, f)).eer == doctest::Approx(oracle::eer_sweep(g, f)).epsilon(1e-12));
  }
}

TEST_CASE("compute_eer is invariant under increasing transforms") {
  Rng rng(6);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> g(1 + rng.index(15)), f(1 + rng.index(15));
    for (auto& v : g) v = rng.uniform(0, 2);
    for (auto& v : f) v = rng.uniform(0.5, 3);
    auto tg = g, tf = f;
    for (auto& v : tg) v = std::exp(3 * v) + 7;
    for (auto& v : tf) v = std::exp(3 * v) + 7;
    CHECK(compute_eer(labeled(g, f)).eer == doctest::Approx(compute_eer(labeled(tg, tf)).eer).epsilon(1e-12));

    // reflect scores and swap the class names
    std::vector<double> rg, rf;
    for (double v : f) rg.push_back(-v);
    for (double v : g) rf.push_back(-v);
    CHECK(compute_eer(labeled(g, f)).eer == doctest::Approx(compute_eer(labeled(rg, rf)).eer).epsilon(1e-12));
  }
}

TEST_CASE("compute_eer needs both classes") {
  CHECK_THROWS_AS(compute_eer(labeled({0.1}, {})), InvalidArgument);
  CHECK_THROWS_AS(compute_eer(labeled({}, {0.1})), InvalidArgument);
}

TEST_CASE("curve is monotone") {
  const auto r = compute_eer(labeled({0.1, 0.5, 0.2, 0.7}, {0.4, 0.9, 0.6}));
  for (std::size_t i = 1; i < r.curve.size(); ++i) {
    CHECK(r.curve[i].threshold > r.curve[i - 1].threshold);
    CHECK(r.curve[i].far >= r.curve[i - 1].far);
    CHECK(r.curve[i].frr <= r.curve[i - 1].frr);
  }
}
