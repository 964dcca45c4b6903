#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sigverify/dataset.hpp"
#include "sigverify/dtw.hpp"
#include "sigverify/features.hpp"
#include "sigverify/gru.hpp"
#include "sigverify/scoring.hpp"
#include "sigverify/training.hpp"

namespace sigverify {

struct TrialResult {
  std::uint64_t seed = 0;
  double eer = 0.0;
  double threshold = 0.0;
  std::optional<double> random_forgery_eer;
  std::vector<double> loss_history;  // RNN trials only
  std::vector<VerificationScore> scores;
};

struct ExperimentReport {
  std::string experiment;  // "dtw" or "rnn"
  std::vector<std::pair<std::string, std::string>> config;  // echoed settings
  std::uint64_t seed = 0;
  std::vector<TrialResult> trials;
  double mean_eer = 0.0;
  double std_eer = 0.0;  // population standard deviation over trials

  std::vector<double> trial_eers() const;
};

/// Fills mean_eer / std_eer from the trials.
void summarize(ExperimentReport& report);

std::string to_json(const ExperimentReport& report);
std::string to_text_table(const ExperimentReport& report);
/// trial,client,truth,score rows for external plotting.
std::string scores_csv(const ExperimentReport& report);

struct DtwExperimentConfig {
  FeatureConfig features;
  DtwConfig dtw;
  std::size_t n_templates = 5;
  TemplatePool pool = TemplatePool::first_10;
  int trials = 10;
  std::uint64_t seed = 0;
  bool random_forgeries = false;
  unsigned threads = 1;
};

ExperimentReport run_dtw_experiment(const Dataset& dataset, const DtwExperimentConfig& config);

struct RnnExperimentConfig {
  FeatureConfig features;
  TrainConfig train;  // train.seed is replaced by the per-trial seed
  std::size_t n_templates = 10;
  TemplatePool pool = TemplatePool::all;
  int trials = 5;
  std::uint64_t seed = 0;
  bool random_forgeries = false;
  unsigned threads = 1;
};

/// Seeds used by RNN trial `trial`: the split seed and the training seed.
struct TrialSeeds {
  std::uint64_t split = 0;
  std::uint64_t train = 0;
};
TrialSeeds rnn_trial_seeds(std::uint64_t seed, int trial);

/// Split options of the RNN protocol (templates plus as many forgeries).
SplitOptions rnn_split_options(const RnnExperimentConfig& config);

/// Trains one model per trial on the split's training data plus every
/// client of `auxiliary`, then scores the held-out signatures.
ExperimentReport run_rnn_experiment(const Dataset& dataset, const std::vector<Dataset>& auxiliary,
                                    const RnnExperimentConfig& config);

/// Trains the model of trial `trial` exactly as run_rnn_experiment does.
TrainResult train_rnn_trial(const Dataset& dataset, const std::vector<Dataset>& auxiliary,
                            const RnnExperimentConfig& config, int trial = 0);

/// The RNN protocol with a fixed, already trained model. Only trial 0's
/// test set is disjoint from the data train_rnn_trial(..., 0) used.
ExperimentReport evaluate_rnn_model(const Dataset& dataset, const GruModel& model, const RnnExperimentConfig& config);

/// Scores every test signature of `split` against its client's templates.
std::vector<VerificationScore> score_split(const Split& split,
                                           const Backend& backend, const FeatureConfig& features,
                                           unsigned threads = 1);

/// Genuine test scores of `split` paired with random-forgery scores (the
/// first genuine sample of every other client), pooled EER.
double random_forgery_eer(const Dataset& dataset, const Split& split, const Backend& backend,
                          const FeatureConfig& features, unsigned threads = 1);

}  // namespace sigverify
