#include "sigverify/training.hpp"

#include <cmath>
#include <sstream>

#include "sigverify/errors.hpp"
#include "sigverify/losses.hpp"
#include "sigverify/parallel.hpp"

namespace sigverify {

void TrainConfig::validate() const {
  if (!(margin > 0.0)) throw InvalidArgument("margin must be positive");
  if (lambda_center < 0.0) throw InvalidArgument("lambda_center must be non-negative");
  if (lambda_decay < 0.0) throw InvalidArgument("lambda_decay must be non-negative");
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning rate must be positive");
  if (!(clip > 0.0)) throw InvalidArgument("clip must be positive");
  if (epochs < 0) throw InvalidArgument("epochs must be non-negative");
  if (triplets_per_client_per_epoch < 1) throw InvalidArgument("triplets per client must be >= 1");
  if (!(random_negative_prob >= 0.0 && random_negative_prob <= 1.0)) {
    throw InvalidArgument("random_negative_prob must be in [0, 1]");
  }
  if (batch_size < 1) throw InvalidArgument("batch size must be >= 1");
  if (hidden1 < 1 || hidden2 < 1 || embedding < 1) throw InvalidArgument("model dimensions must be positive");
}

namespace {

void featurize_all(const std::vector<const OnlineSignature*>& sigs, const FeatureConfig& features,
                   unsigned threads, std::vector<FeatureSequence>& out) {
  out.resize(sigs.size());
  parallel_for(sigs.size(), threads, [&](std::size_t i) { out[i] = featurize(*sigs[i], features); });
}

}  // namespace

TrainingSet make_training_set(const Split& split, const FeatureConfig& features, unsigned threads) {
  TrainingSet set;
  for (const auto& [id, cs] : split.clients) {
    auto& entry = set[id];
    featurize_all(cs.templates, features, threads, entry.genuine);
    featurize_all(cs.train_forgeries, features, threads, entry.forgeries);
  }
  return set;
}

TrainingSet make_training_set(const Dataset& dataset, const FeatureConfig& features, unsigned threads) {
  TrainingSet set;
  for (const auto& [id, samples] : dataset.clients()) {
    std::vector<const OnlineSignature*> genuine, forgeries;
    for (const auto& s : samples.genuine) genuine.push_back(&s);
    for (const auto& s : samples.forgeries) forgeries.push_back(&s);
    auto& entry = set[id];
    featurize_all(genuine, features, threads, entry.genuine);
    featurize_all(forgeries, features, threads, entry.forgeries);
  }
  return set;
}

void merge_training_sets(TrainingSet& into, TrainingSet extra) {
  for (auto& [id, data] : extra) {
    if (into.contains(id)) throw InvalidArgument("training client '" + id + "' appears twice");
    into.emplace(id, std::move(data));
  }
}

ClientCenters update_centers(const GruModel& model, const TrainingSet& data, unsigned threads) {
  ClientCenters centers;
  for (const auto& [id, client] : data) {
    if (client.genuine.empty()) throw InvalidArgument("client '" + id + "' has no training genuines");
    std::vector<Vector> embs(client.genuine.size());
    parallel_for(embs.size(), threads, [&](std::size_t i) { embs[i] = embed(model, client.genuine[i]); });
    Vector sum = Vector::Zero(model.embedding_dim());
    for (const auto& e : embs) sum += e;
    centers.emplace(id, sum / static_cast<double>(embs.size()));
  }
  return centers;
}

std::vector<Triplet> sample_triplets(const TrainingSet& data, int count_per_client,
                                     double random_negative_prob, Rng& rng) {
  if (count_per_client < 1) throw InvalidArgument("triplet count per client must be >= 1");
  std::vector<const std::string*> ids;
  for (const auto& [id, client] : data) {
    if (client.genuine.size() < 2) {
      throw InvalidArgument("client '" + id + "' needs at least 2 training genuines for triplets");
    }
    ids.push_back(&id);
  }
  if (random_negative_prob > 0.0 && ids.size() < 2) {
    throw InvalidArgument("random negatives need at least 2 clients");
  }

  std::vector<Triplet> triplets;
  triplets.reserve(ids.size() * static_cast<std::size_t>(count_per_client));
  for (std::size_t c = 0; c < ids.size(); ++c) {
    const auto& client = data.at(*ids[c]);
    for (int k = 0; k < count_per_client; ++k) {
      const auto pair = rng.sample_without_replacement(client.genuine.size(), 2);
      Triplet t;
      t.client = *ids[c];
      t.anchor = &client.genuine[pair[0]];
      t.positive = &client.genuine[pair[1]];
      const bool use_random = client.forgeries.empty() || rng.bernoulli(random_negative_prob);
      if (use_random) {
        if (ids.size() < 2) throw InvalidArgument("client '" + t.client + "' has no forgeries and no other clients");
        std::size_t other = rng.index(ids.size() - 1);
        if (other >= c) ++other;
        const auto& neg_client = data.at(*ids[other]);
        t.negative = &neg_client.genuine[rng.index(neg_client.genuine.size())];
        t.skilled_negative = false;
      } else {
        t.negative = &client.forgeries[rng.index(client.forgeries.size())];
        t.skilled_negative = true;
      }
      triplets.push_back(std::move(t));
    }
  }
  return triplets;
}

namespace {

// d||v||/dv, with the zero vector mapped to zero.
Vector norm_gradient(const Vector& v, double norm) {
  return norm > 0.0 ? Vector(v / norm) : Vector::Zero(v.size());
}

struct TripletGradient {
  double triplet = 0.0;
  double center = 0.0;
  GruModel gradient;
};

TripletGradient triplet_gradient(const Triplet& t, const GruModel& model, const Vector& center,
                                 const TrainConfig& config) {
  TripletGradient out;
  out.gradient = GruModel::zeros(model.dims());

  const auto ta = embed_trace(model, *t.anchor);
  const auto tp = embed_trace(model, *t.positive);
  const auto tn = embed_trace(model, *t.negative);
  const Vector ap = ta.embedding - tp.embedding;
  const Vector an = ta.embedding - tn.embedding;
  const Vector ac = ta.embedding - center;
  const Vector pc = tp.embedding - center;
  const double d_ap = ap.norm();
  const double d_an = an.norm();
  const double d_ac = ac.norm();
  const double d_pc = pc.norm();

  out.triplet = triplet_loss(d_ap, d_an, config.margin);
  out.center = d_ac + d_pc;

  Vector da = config.lambda_center * norm_gradient(ac, d_ac);
  Vector dp = config.lambda_center * norm_gradient(pc, d_pc);
  Vector dn = Vector::Zero(model.embedding_dim());
  // Hinge subgradient at exactly zero is taken as 0.
  if (d_ap - d_an + config.margin > 0.0) {
    const Vector g_ap = norm_gradient(ap, d_ap);
    const Vector g_an = norm_gradient(an, d_an);
    da += g_ap - g_an;
    dp -= g_ap;
    dn += g_an;
  }

  embed_backward(model, ta, da, out.gradient);
  embed_backward(model, tp, dp, out.gradient);
  if (dn.squaredNorm() > 0.0) embed_backward(model, tn, dn, out.gradient);
  return out;
}

}  // namespace

LossAndGradient total_loss(std::span<const Triplet> batch, const GruModel& model,
                           const ClientCenters& centers, const TrainConfig& config) {
  if (batch.empty()) throw InvalidArgument("total_loss: empty batch");
  std::vector<const Vector*> batch_centers;
  for (const auto& t : batch) {
    const auto it = centers.find(t.client);
    if (it == centers.end()) throw InvalidArgument("total_loss: no center for client '" + t.client + "'");
    batch_centers.push_back(&it->second);
  }

  std::vector<TripletGradient> parts(batch.size());
  parallel_for(batch.size(), config.threads, [&](std::size_t i) {
    parts[i] = triplet_gradient(batch[i], model, *batch_centers[i], config);
  });

  LossAndGradient out;
  out.gradient = GruModel::zeros(model.dims());
  for (const auto& p : parts) {
    out.loss.triplet += p.triplet;
    out.loss.center += p.center;
    out.gradient += p.gradient;
  }
  out.loss.decay = fc_weight_decay(model);
  out.gradient.fc_weight += 2.0 * config.lambda_decay * model.fc_weight;
  out.loss.total = out.loss.triplet + config.lambda_center * out.loss.center +
                   config.lambda_decay * out.loss.decay;
  return out;
}

TrainResult train(const TrainingSet& data, int input_dim, const TrainConfig& config) {
  config.validate();
  if (data.empty()) throw InvalidArgument("train: no training clients");
  const ModelDims dims{input_dim, config.hidden1, config.hidden2, config.embedding};

  TrainResult result;
  result.model = GruModel::random(dims, derive_seed(config.seed, 0));
  if (config.epochs == 0) return result;

  Rng rng(derive_seed(config.seed, 1));
  AdamaxState state(result.model.parameter_count());
  const AdamaxConfig opt{config.learning_rate, 0.9, 0.999, 1e-8, config.clip};

  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto centers = update_centers(result.model, data, config.threads);
    auto triplets = sample_triplets(data, config.triplets_per_client_per_epoch,
                                    config.random_negative_prob, rng);
    rng.shuffle(triplets);

    double epoch_total = 0.0;
    const std::size_t bs = static_cast<std::size_t>(config.batch_size);
    for (std::size_t start = 0; start < triplets.size(); start += bs) {
      const std::size_t len = std::min(bs, triplets.size() - start);
      const std::span<const Triplet> batch(triplets.data() + start, len);
      const auto lg = total_loss(batch, result.model, centers, config);
      if (!std::isfinite(lg.loss.total)) {
        std::ostringstream msg;
        msg << "train: non-finite loss at epoch " << epoch + 1 << ", batch " << start / bs + 1
            << " (triplet " << lg.loss.triplet << ", center " << lg.loss.center << ")";
        throw NumericalError(msg.str());
      }
      epoch_total += lg.loss.total;
      adamax_step(result.model, lg.gradient, state, opt);
    }
    result.epoch_loss.push_back(epoch_total / static_cast<double>(triplets.size()));
  }
  return result;
}

}  // namespace sigverify
