#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "sigverify/errors.hpp"
#include "sigverify/experiment.hpp"
#include "sigverify/synthetic.hpp"
#include "test_util.hpp"

using namespace sigverify;

TEST_CASE("synthetic generator counts and determinism") {
  SyntheticConfig cfg;
  cfg.n_clients = 4;
  cfg.genuine_per_client = 12;
  cfg.forgeries_per_client = 12;
  cfg.noise = 0.02;
  cfg.seed = 3;
  const auto d = generate_synthetic_dataset(cfg);
  CHECK(d.client_count() == 4);
  CHECK(d.signature_count() == 96);
  CHECK_NOTHROW(d.validate());
  for (const auto& [id, c] : d.clients()) {
    const auto n = c.genuine.front().size();
    CHECK(n >= 80);
    CHECK(n <= 200);
    for (const auto& f : c.forgeries) CHECK(f.size() == n);
  }
  const auto again = generate_synthetic_dataset(cfg);
  for (const auto& [id, c] : d.clients()) {
    CHECK(c.genuine[3].points == again.client(id).genuine[3].points);
    CHECK(c.forgeries[5].points == again.client(id).forgeries[5].points);
  }
  cfg.n_clients = 1;
  CHECK_THROWS_AS(generate_synthetic_dataset(cfg), InvalidArgument);
}

TEST_CASE("noise-free genuines share rotation-invariant features") {
  SyntheticConfig cfg;
  cfg.n_clients = 2;
  cfg.genuine_per_client = 4;
  cfg.forgeries_per_client = 0;
  cfg.noise = 0.0;
  cfg.max_rotation_deg = 180.0;
  cfg.seed = 8;
  const auto d = generate_synthetic_dataset(cfg);
  const FeatureConfig fc{4, 4, FeatureVariant::lnps_ri, false};
  for (const auto& [id, c] : d.clients()) {
    const auto ref = extract(c.genuine[0], fc);
    for (std::size_t i = 1; i < c.genuine.size(); ++i) {
      CHECK(testutil::max_rel_diff(ref.values(), extract(c.genuine[i], fc).values()) < 1e-8);
    }
  }
}

TEST_CASE("dtw experiment: single trial and determinism") {
  SyntheticConfig sc;
  sc.n_clients = 3;
  sc.genuine_per_client = 10;
  sc.forgeries_per_client = 5;
  sc.seed = 4;
  const auto d = generate_synthetic_dataset(sc);
  DtwExperimentConfig cfg;
  cfg.features = {4, 2, FeatureVariant::lnps, false};
  cfg.trials = 1;
  cfg.seed = 11;
  cfg.random_forgeries = true;
  const auto r = run_dtw_experiment(d, cfg);
  REQUIRE(r.trials.size() == 1);
  CHECK(r.std_eer == 0.0);
  CHECK(r.mean_eer == r.trials[0].eer);
  CHECK(r.trials[0].scores.size() == 3 * (5 + 5));
  CHECK(r.trials[0].random_forgery_eer.has_value());

  cfg.trials = 3;
  cfg.threads = 2;
  const auto a = run_dtw_experiment(d, cfg);
  cfg.threads = 1;
  const auto b = run_dtw_experiment(d, cfg);
  CHECK(to_json(a) == to_json(b));
  CHECK(scores_csv(a) == scores_csv(b));
  CHECK(a.mean_eer == doctest::Approx((a.trials[0].eer + a.trials[1].eer + a.trials[2].eer) / 3));

  cfg.trials = 0;
  CHECK_THROWS_AS(run_dtw_experiment(d, cfg), InvalidArgument);
}

TEST_CASE("dtw experiment on a separable dataset has zero EER") {
  // Genuine samples are exact similarity copies of one shape; forgeries are
  // unrelated random walks.
  Rng rng(12);
  Dataset d;
  for (int c = 0; c < 3; ++c) {
    const auto shape = testutil::random_path(rng, 60);
    for (int g = 1; g <= 10; ++g) {
      auto pts = testutil::transform(shape, rng.uniform(-3, 3), rng.uniform(0.5, 2), {0, 0}, {rng.uniform(-9, 9), 0});
      for (auto& p : pts) p.x += 0.01 * rng.normal();
      d.add(testutil::make_signature(pts, "c" + std::to_string(c), SampleLabel::genuine, g));
    }
    for (int f = 11; f <= 15; ++f) {
      d.add(testutil::make_signature(testutil::random_path(rng, 60), "c" + std::to_string(c),
                                     SampleLabel::skilled_forgery, f));
    }
  }
  DtwExperimentConfig cfg;
  cfg.features = {4, 3, FeatureVariant::lnps_ri, false};
  cfg.trials = 2;
  cfg.seed = 1;
  CHECK(run_dtw_experiment(d, cfg).mean_eer == 0.0);
}

TEST_CASE("rnn experiment: determinism and report shape") {
  SyntheticConfig sc;
  sc.n_clients = 3;
  sc.genuine_per_client = 6;
  sc.forgeries_per_client = 6;
  sc.seed = 2;
  const auto d = generate_synthetic_dataset(sc);
  sc.seed = 99;
  sc.n_clients = 2;
  auto aux_raw = generate_synthetic_dataset(sc);
  Dataset aux;
  for (const auto& [id, c] : aux_raw.clients()) {
    for (auto s : c.genuine) {
      s.client_id = "aux" + id;
      aux.add(s);
    }
  }

  RnnExperimentConfig cfg;
  cfg.features = {4, 2, FeatureVariant::lnps, false};
  cfg.train.hidden1 = cfg.train.hidden2 = 6;
  cfg.train.embedding = 3;
  cfg.train.epochs = 3;
  cfg.train.triplets_per_client_per_epoch = 4;
  cfg.n_templates = 3;
  cfg.trials = 2;
  cfg.seed = 5;
  const auto a = run_rnn_experiment(d, {aux}, cfg);
  const auto b = run_rnn_experiment(d, {aux}, cfg);
  CHECK(to_json(a) == to_json(b));
  REQUIRE(a.trials.size() == 2);
  CHECK(a.trials[0].loss_history.size() == 3);
  CHECK(a.trials[0].scores.size() == 3 * (3 + 3));
  CHECK(to_json(a).find("\"experiment\": \"rnn\"") != std::string::npos);
  CHECK(to_text_table(a).find("mean EER") != std::string::npos);
}

TEST_CASE("rnn trial seeds are distinct per trial") {
  const auto s0 = rnn_trial_seeds(7, 0);
  const auto s1 = rnn_trial_seeds(7, 1);
  CHECK(s0.split != s1.split);
  CHECK(s0.split != s0.train);
}

TEST_CASE("train then evaluate a fixed model reproduces trial 0") {
  SyntheticConfig sc;
  sc.n_clients = 3;
  sc.genuine_per_client = 6;
  sc.forgeries_per_client = 6;
  sc.seed = 21;
  const auto d = generate_synthetic_dataset(sc);
  RnnExperimentConfig cfg;
  cfg.features = {3, 2, FeatureVariant::lnps, false};
  cfg.train.hidden1 = cfg.train.hidden2 = 5;
  cfg.train.embedding = 3;
  cfg.train.epochs = 2;
  cfg.train.triplets_per_client_per_epoch = 4;
  cfg.n_templates = 3;
  cfg.trials = 1;
  cfg.seed = 13;
  const auto full = run_rnn_experiment(d, {}, cfg);
  const auto trained = train_rnn_trial(d, {}, cfg, 0);
  CHECK(trained.epoch_loss == full.trials[0].loss_history);
  const auto fixed = evaluate_rnn_model(d, trained.model, cfg);
  CHECK(fixed.trials[0].eer == full.trials[0].eer);
  REQUIRE(fixed.trials[0].scores.size() == full.trials[0].scores.size());
  for (std::size_t i = 0; i < fixed.trials[0].scores.size(); ++i) {
    CHECK(fixed.trials[0].scores[i].score == full.trials[0].scores[i].score);
  }
  const auto wrong = GruModel::zeros({7, 5, 5, 3});
  CHECK_THROWS_AS(evaluate_rnn_model(d, wrong, cfg), InvalidArgument);
}
