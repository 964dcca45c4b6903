#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "sigverify/adamax.hpp"
#include "sigverify/dataset.hpp"
#include "sigverify/features.hpp"
#include "sigverify/gru.hpp"
#include "sigverify/rng.hpp"

namespace sigverify {

struct TrainConfig {
  double margin = 1.0;
  double lambda_center = 0.5;
  double lambda_decay = 1e-4;
  double learning_rate = 0.01;
  double clip = 1.0;
  int epochs = 400;
  int triplets_per_client_per_epoch = 16;
  double random_negative_prob = 0.3;
  int batch_size = 16;
  int hidden1 = 128;
  int hidden2 = 128;
  int embedding = 64;
  std::uint64_t seed = 0;
  unsigned threads = 1;

  void validate() const;
};

/// Featurized training material for one client.
struct ClientTrainingData {
  std::vector<FeatureSequence> genuine;
  std::vector<FeatureSequence> forgeries;
};

using TrainingSet = std::map<std::string, ClientTrainingData>;

/// Templates and training forgeries of every client in `split`, featurized.
TrainingSet make_training_set(const Split& split, const FeatureConfig& features, unsigned threads = 1);

/// Every signature of `dataset` (auxiliary joint-training data).
TrainingSet make_training_set(const Dataset& dataset, const FeatureConfig& features, unsigned threads = 1);

/// Adds the clients of `extra` to `into`; client ids must not collide.
void merge_training_sets(TrainingSet& into, TrainingSet extra);

using ClientCenters = std::map<std::string, Vector>;

/// Mean embedding of each client's training genuine samples.
ClientCenters update_centers(const GruModel& model, const TrainingSet& data, unsigned threads = 1);

struct Triplet {
  std::string client;  // anchor/positive client
  const FeatureSequence* anchor = nullptr;
  const FeatureSequence* positive = nullptr;
  const FeatureSequence* negative = nullptr;
  bool skilled_negative = true;
};

/// `count_per_client` triplets per client in client-key order. Anchor and
/// positive are distinct genuine samples drawn uniformly; the negative is a
/// skilled forgery of the same client with probability
/// 1 - random_negative_prob, otherwise a genuine of a uniformly chosen
/// other client.
std::vector<Triplet> sample_triplets(const TrainingSet& data, int count_per_client,
                                     double random_negative_prob, Rng& rng);

struct LossTerms {
  double total = 0.0;
  double triplet = 0.0;
  double center = 0.0;
  double decay = 0.0;
};

struct LossAndGradient {
  LossTerms loss;
  GruModel gradient;
};

/// L = sum_t max(d_ap - d_an + C, 0) + lambda_c sum_t (||a - c|| + ||p - c||)
///     + lambda_decay ||W_fc||_F^2, with its gradient. Centers are constants.
/// Triplets may be evaluated on several threads; per-triplet gradients are
/// summed in batch order.
LossAndGradient total_loss(std::span<const Triplet> batch, const GruModel& model,
                           const ClientCenters& centers, const TrainConfig& config);

struct TrainResult {
  GruModel model;
  std::vector<double> epoch_loss;  // mean per-triplet loss in each epoch
};

/// Each epoch refreshes the centers before stepping Adamax over shuffled
/// batches of fresh triplets. Deterministic for a given seed.
TrainResult train(const TrainingSet& data, int input_dim, const TrainConfig& config);

}  // namespace sigverify
