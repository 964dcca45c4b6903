#include "sigverify/experiment.hpp"

#include <cmath>
#include <iomanip>
#include <numeric>
#include <sstream>
#include <unordered_map>

#include <json.hpp>

#include "sigverify/errors.hpp"
#include "sigverify/parallel.hpp"
#include "sigverify/rng.hpp"

namespace sigverify {

std::vector<double> ExperimentReport::trial_eers() const {
  std::vector<double> out;
  for (const auto& t : trials) out.push_back(t.eer);
  return out;
}

void summarize(ExperimentReport& report) {
  const auto eers = report.trial_eers();
  if (eers.empty()) {
    report.mean_eer = report.std_eer = 0.0;
    return;
  }
  const double n = static_cast<double>(eers.size());
  report.mean_eer = std::accumulate(eers.begin(), eers.end(), 0.0) / n;
  double var = 0.0;
  for (double e : eers) var += (e - report.mean_eer) * (e - report.mean_eer);
  report.std_eer = std::sqrt(var / n);
}

std::string to_json(const ExperimentReport& report) {
  nlohmann::ordered_json j;
  j["experiment"] = report.experiment;
  nlohmann::ordered_json cfg = nlohmann::ordered_json::object();
  for (const auto& [k, v] : report.config) cfg[k] = v;
  j["config"] = cfg;
  j["seed"] = report.seed;
  nlohmann::ordered_json trials = nlohmann::ordered_json::array();
  for (const auto& t : report.trials) {
    nlohmann::ordered_json tj;
    tj["seed"] = t.seed;
    tj["eer"] = t.eer;
    tj["threshold"] = t.threshold;
    if (t.random_forgery_eer) tj["random_forgery_eer"] = *t.random_forgery_eer;
    if (!t.loss_history.empty()) tj["loss_history"] = t.loss_history;
    tj["n_scores"] = t.scores.size();
    trials.push_back(tj);
  }
  j["trials"] = trials;
  j["trial_eers"] = report.trial_eers();
  j["mean_eer"] = report.mean_eer;
  j["std_eer"] = report.std_eer;
  return j.dump(2) + "\n";
}

std::string to_text_table(const ExperimentReport& report) {
  std::ostringstream out;
  out << report.experiment << " experiment, seed " << report.seed << "\n";
  for (const auto& [k, v] : report.config) out << "  " << k << " = " << v << "\n";
  out << "trial  seed                  EER(%)   threshold\n";
  out << std::fixed;
  for (std::size_t i = 0; i < report.trials.size(); ++i) {
    const auto& t = report.trials[i];
    out << std::setw(5) << i + 1 << "  " << std::setw(20) << t.seed << "  " << std::setprecision(3)
        << std::setw(7) << 100.0 * t.eer << "  " << std::setprecision(6) << t.threshold;
    if (t.random_forgery_eer) out << "  random " << std::setprecision(3) << 100.0 * *t.random_forgery_eer;
    out << "\n";
  }
  out << std::setprecision(3) << "mean EER " << 100.0 * report.mean_eer << "%  std "
      << 100.0 * report.std_eer << "%\n";
  return out.str();
}

std::string scores_csv(const ExperimentReport& report) {
  std::ostringstream out;
  out.precision(17);
  out << "trial,client,truth,score\n";
  for (std::size_t i = 0; i < report.trials.size(); ++i) {
    for (const auto& s : report.trials[i].scores) {
      out << i + 1 << ',' << s.client_id << ',' << to_string(s.truth) << ',' << s.score << '\n';
    }
  }
  return out.str();
}

namespace {

using FeatureCache = std::unordered_map<const OnlineSignature*, FeatureSequence>;

FeatureCache featurize_signatures(const std::vector<const OnlineSignature*>& sigs,
                                  const FeatureConfig& features, unsigned threads) {
  std::vector<FeatureSequence> feats(sigs.size());
  parallel_for(sigs.size(), threads, [&](std::size_t i) { feats[i] = featurize(*sigs[i], features); });
  FeatureCache cache;
  for (std::size_t i = 0; i < sigs.size(); ++i) cache.emplace(sigs[i], std::move(feats[i]));
  return cache;
}

std::vector<const OnlineSignature*> all_signatures(const Dataset& dataset) {
  std::vector<const OnlineSignature*> out;
  for (const auto& [id, c] : dataset.clients()) {
    for (const auto& s : c.genuine) out.push_back(&s);
    for (const auto& s : c.forgeries) out.push_back(&s);
  }
  return out;
}

// Distances between cached signatures for either backend. For the RNN
// backend every cached sequence is embedded once up front.
class DistanceTable {
 public:
  DistanceTable(const FeatureCache& features, const Backend& backend, unsigned threads)
      : features_(features), backend_(backend) {
    if (const auto* rnn = std::get_if<RnnBackend>(&backend_)) {
      if (rnn->model == nullptr) throw InvalidArgument("rnn backend has no model");
      std::vector<const OnlineSignature*> keys;
      for (const auto& [k, v] : features_) keys.push_back(k);
      std::vector<Vector> embs(keys.size());
      parallel_for(keys.size(), threads, [&](std::size_t i) { embs[i] = embed(*rnn->model, features_.at(keys[i])); });
      for (std::size_t i = 0; i < keys.size(); ++i) embeddings_.emplace(keys[i], std::move(embs[i]));
    }
  }

  double operator()(const OnlineSignature* a, const OnlineSignature* b) const {
    if (const auto* dtw = std::get_if<DtwBackend>(&backend_)) {
      return dtw_distance(features_.at(a), features_.at(b), dtw->config);
    }
    return (embeddings_.at(a) - embeddings_.at(b)).norm();
  }

 private:
  const FeatureCache& features_;
  const Backend& backend_;
  std::unordered_map<const OnlineSignature*, Vector> embeddings_;
};

struct ClientScoring {
  std::vector<double> pairwise;
  std::vector<VerificationScore> scores;
};

ClientScoring score_client(const std::string& id, const ClientSplit& cs,
                           const std::vector<const OnlineSignature*>& probes, const DistanceTable& dist) {
  if (cs.templates.size() < 2) throw InvalidArgument("client '" + id + "' needs at least 2 templates");
  ClientScoring out;
  for (std::size_t i = 0; i < cs.templates.size(); ++i) {
    for (std::size_t j = i + 1; j < cs.templates.size(); ++j) {
      out.pairwise.push_back(dist(cs.templates[i], cs.templates[j]));
    }
  }
  std::vector<double> d_test(cs.templates.size());
  for (const auto* probe : probes) {
    for (std::size_t i = 0; i < cs.templates.size(); ++i) d_test[i] = dist(probe, cs.templates[i]);
    auto s = score_from_distances(d_test, out.pairwise);
    s.client_id = id;
    s.truth = probe->label;
    out.scores.push_back(std::move(s));
  }
  return out;
}

std::vector<VerificationScore> score_split_cached(const Split& split, const DistanceTable& dist,
                                                  unsigned threads) {
  std::vector<const std::string*> ids;
  for (const auto& [id, cs] : split.clients) ids.push_back(&id);
  std::vector<ClientScoring> per_client(ids.size());
  parallel_for(ids.size(), threads, [&](std::size_t i) {
    const auto& cs = split.clients.at(*ids[i]);
    per_client[i] = score_client(*ids[i], cs, cs.test, dist);
  });
  std::vector<VerificationScore> scores;
  for (auto& pc : per_client) {
    scores.insert(scores.end(), pc.scores.begin(), pc.scores.end());
  }
  return scores;
}

double random_forgery_eer_cached(const Dataset& dataset, const Split& split, const DistanceTable& dist,
                                 unsigned threads) {
  std::vector<const std::string*> ids;
  for (const auto& [id, cs] : split.clients) ids.push_back(&id);
  std::vector<ClientScoring> per_client(ids.size());
  parallel_for(ids.size(), threads, [&](std::size_t i) {
    const auto& cs = split.clients.at(*ids[i]);
    std::vector<const OnlineSignature*> probes;
    for (const auto* s : cs.test) {
      if (s->label == SampleLabel::genuine) probes.push_back(s);
    }
    const auto n_genuine = probes.size();
    for (const auto& [other, samples] : dataset.clients()) {
      if (other != *ids[i] && !samples.genuine.empty()) probes.push_back(&samples.genuine.front());
    }
    per_client[i] = score_client(*ids[i], cs, probes, dist);
    for (std::size_t k = n_genuine; k < per_client[i].scores.size(); ++k) {
      per_client[i].scores[k].truth = SampleLabel::skilled_forgery;  // counted as impostor
    }
  });
  std::vector<VerificationScore> scores;
  for (auto& pc : per_client) scores.insert(scores.end(), pc.scores.begin(), pc.scores.end());
  return compute_eer(scores).eer;
}

std::vector<const OnlineSignature*> split_signatures(const Split& split) {
  std::vector<const OnlineSignature*> out;
  for (const auto& [id, cs] : split.clients) {
    out.insert(out.end(), cs.templates.begin(), cs.templates.end());
    out.insert(out.end(), cs.test.begin(), cs.test.end());
  }
  return out;
}

std::string fmt_double(double v) {
  std::ostringstream out;
  out << v;
  return out.str();
}

void echo_features(ExperimentReport& r, const FeatureConfig& f) {
  r.config.emplace_back("variant", to_string(f.variant));
  r.config.emplace_back("level", std::to_string(f.level));
  r.config.emplace_back("window", std::to_string(f.window_size()));
  r.config.emplace_back("single_level", f.single_level ? "true" : "false");
}

}  // namespace

std::vector<VerificationScore> score_split(const Split& split,
                                           const Backend& backend, const FeatureConfig& features,
                                           unsigned threads) {
  const auto cache = featurize_signatures(split_signatures(split), features, threads);
  const DistanceTable dist(cache, backend, threads);
  return score_split_cached(split, dist, threads);
}

double random_forgery_eer(const Dataset& dataset, const Split& split, const Backend& backend,
                          const FeatureConfig& features, unsigned threads) {
  const auto cache = featurize_signatures(all_signatures(dataset), features, threads);
  const DistanceTable dist(cache, backend, threads);
  return random_forgery_eer_cached(dataset, split, dist, threads);
}

ExperimentReport run_dtw_experiment(const Dataset& dataset, const DtwExperimentConfig& config) {
  config.features.validate();
  if (config.trials < 1) throw InvalidArgument("trials must be >= 1");
  dataset.validate();

  ExperimentReport report;
  report.experiment = "dtw";
  report.seed = config.seed;
  echo_features(report, config.features);
  report.config.emplace_back("band_radius", config.dtw.band_radius ? std::to_string(*config.dtw.band_radius) : "none");
  report.config.emplace_back("normalize_by_path", config.dtw.normalize_by_path ? "true" : "false");
  report.config.emplace_back("templates", std::to_string(config.n_templates));
  report.config.emplace_back("pool", config.pool == TemplatePool::first_10 ? "first_10" : "all");
  report.config.emplace_back("trials", std::to_string(config.trials));
  report.config.emplace_back("random_forgeries", config.random_forgeries ? "true" : "false");

  // Features do not depend on the split, so they are computed once.
  const auto cache = featurize_signatures(all_signatures(dataset), config.features, config.threads);
  const Backend backend = DtwBackend{config.dtw};
  const DistanceTable dist(cache, backend, config.threads);
  const SplitOptions options{config.n_templates, config.pool, false};

  for (int trial = 0; trial < config.trials; ++trial) {
    TrialResult tr;
    tr.seed = derive_seed(config.seed, static_cast<std::uint64_t>(trial));
    const auto split = split_templates(dataset, options, tr.seed);
    tr.scores = score_split_cached(split, dist, config.threads);
    const auto eer = compute_eer(tr.scores);
    tr.eer = eer.eer;
    tr.threshold = eer.threshold;
    if (config.random_forgeries) tr.random_forgery_eer = random_forgery_eer_cached(dataset, split, dist, config.threads);
    report.trials.push_back(std::move(tr));
  }
  summarize(report);
  return report;
}

TrialSeeds rnn_trial_seeds(std::uint64_t seed, int trial) {
  const auto base = derive_seed(seed, static_cast<std::uint64_t>(trial));
  return {base, derive_seed(base, 1)};
}

SplitOptions rnn_split_options(const RnnExperimentConfig& config) {
  return {config.n_templates, config.pool, true};
}

namespace {

void echo_rnn(ExperimentReport& report, const RnnExperimentConfig& config, std::size_t n_aux) {
  report.experiment = "rnn";
  report.seed = config.seed;
  echo_features(report, config.features);
  const auto& t = config.train;
  report.config.emplace_back("hidden1", std::to_string(t.hidden1));
  report.config.emplace_back("hidden2", std::to_string(t.hidden2));
  report.config.emplace_back("embedding", std::to_string(t.embedding));
  report.config.emplace_back("epochs", std::to_string(t.epochs));
  report.config.emplace_back("margin", fmt_double(t.margin));
  report.config.emplace_back("lambda_center", fmt_double(t.lambda_center));
  report.config.emplace_back("lambda_decay", fmt_double(t.lambda_decay));
  report.config.emplace_back("learning_rate", fmt_double(t.learning_rate));
  report.config.emplace_back("clip", fmt_double(t.clip));
  report.config.emplace_back("triplets_per_client", std::to_string(t.triplets_per_client_per_epoch));
  report.config.emplace_back("random_negative_prob", fmt_double(t.random_negative_prob));
  report.config.emplace_back("batch_size", std::to_string(t.batch_size));
  report.config.emplace_back("templates", std::to_string(config.n_templates));
  report.config.emplace_back("pool", config.pool == TemplatePool::first_10 ? "first_10" : "all");
  report.config.emplace_back("trials", std::to_string(config.trials));
  report.config.emplace_back("auxiliary_datasets", std::to_string(n_aux));
}

TrainingSet auxiliary_training_set(const std::vector<Dataset>& auxiliary, const RnnExperimentConfig& config) {
  TrainingSet aux_set;
  for (const auto& aux : auxiliary) {
    merge_training_sets(aux_set, make_training_set(aux, config.features, config.threads));
  }
  return aux_set;
}

TrainResult train_on_split(const Split& split, const TrainingSet& aux_set, const RnnExperimentConfig& config,
                           std::uint64_t train_seed) {
  TrainingSet data = make_training_set(split, config.features, config.threads);
  merge_training_sets(data, aux_set);
  TrainConfig tc = config.train;
  tc.seed = train_seed;
  tc.threads = config.threads;
  return train(data, static_cast<int>(config.features.dimension()), tc);
}

void validate_rnn(const Dataset& dataset, const RnnExperimentConfig& config) {
  config.features.validate();
  config.train.validate();
  if (config.trials < 1) throw InvalidArgument("trials must be >= 1");
  dataset.validate();
}

}  // namespace

TrainResult train_rnn_trial(const Dataset& dataset, const std::vector<Dataset>& auxiliary,
                            const RnnExperimentConfig& config, int trial) {
  validate_rnn(dataset, config);
  const auto seeds = rnn_trial_seeds(config.seed, trial);
  const auto split = split_templates(dataset, rnn_split_options(config), seeds.split);
  return train_on_split(split, auxiliary_training_set(auxiliary, config), config, seeds.train);
}

ExperimentReport run_rnn_experiment(const Dataset& dataset, const std::vector<Dataset>& auxiliary,
                                    const RnnExperimentConfig& config) {
  validate_rnn(dataset, config);
  ExperimentReport report;
  echo_rnn(report, config, auxiliary.size());

  const auto aux_set = auxiliary_training_set(auxiliary, config);
  const auto cache = featurize_signatures(all_signatures(dataset), config.features, config.threads);

  for (int trial = 0; trial < config.trials; ++trial) {
    const auto seeds = rnn_trial_seeds(config.seed, trial);
    TrialResult tr;
    tr.seed = seeds.split;
    const auto split = split_templates(dataset, rnn_split_options(config), seeds.split);
    auto trained = train_on_split(split, aux_set, config, seeds.train);
    tr.loss_history = std::move(trained.epoch_loss);

    const Backend backend = RnnBackend{&trained.model};
    const DistanceTable dist(cache, backend, config.threads);
    tr.scores = score_split_cached(split, dist, config.threads);
    const auto eer = compute_eer(tr.scores);
    tr.eer = eer.eer;
    tr.threshold = eer.threshold;
    if (config.random_forgeries) tr.random_forgery_eer = random_forgery_eer_cached(dataset, split, dist, config.threads);
    report.trials.push_back(std::move(tr));
  }
  summarize(report);
  return report;
}

ExperimentReport evaluate_rnn_model(const Dataset& dataset, const GruModel& model, const RnnExperimentConfig& config) {
  validate_rnn(dataset, config);
  if (model.dims().input != static_cast<int>(config.features.dimension())) {
    throw InvalidArgument("model input dimension " + std::to_string(model.dims().input) +
                          " does not match feature dimension " + std::to_string(config.features.dimension()));
  }
  ExperimentReport report;
  echo_rnn(report, config, 0);
  report.config.emplace_back("model", "fixed");

  const auto cache = featurize_signatures(all_signatures(dataset), config.features, config.threads);
  const Backend backend = RnnBackend{&model};
  const DistanceTable dist(cache, backend, config.threads);
  for (int trial = 0; trial < config.trials; ++trial) {
    TrialResult tr;
    tr.seed = rnn_trial_seeds(config.seed, trial).split;
    const auto split = split_templates(dataset, rnn_split_options(config), tr.seed);
    tr.scores = score_split_cached(split, dist, config.threads);
    const auto eer = compute_eer(tr.scores);
    tr.eer = eer.eer;
    tr.threshold = eer.threshold;
    if (config.random_forgeries) tr.random_forgery_eer = random_forgery_eer_cached(dataset, split, dist, config.threads);
    report.trials.push_back(std::move(tr));
  }
  summarize(report);
  return report;
}

}  // namespace sigverify
