#include "sigverify/synthetic.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>

#include "sigverify/errors.hpp"
#include "sigverify/rng.hpp"

namespace sigverify {

void SyntheticConfig::validate() const {
  if (n_clients < 2) throw InvalidArgument("synthetic dataset needs at least 2 clients");
  if (genuine_per_client < 1) throw InvalidArgument("genuine_per_client must be >= 1");
  if (forgeries_per_client < 0) throw InvalidArgument("forgeries_per_client must be >= 0");
  if (!(noise >= 0.0)) throw InvalidArgument("noise must be non-negative");
  if (!(min_scale > 0.0 && max_scale >= min_scale)) throw InvalidArgument("invalid scale range");
  if (!(max_rotation_deg >= 0.0)) throw InvalidArgument("max_rotation_deg must be non-negative");
}

namespace {

struct Harmonic {
  double amplitude, frequency, phase;
};

struct Prototype {
  std::vector<Harmonic> x, y;
  int points = 0;

  Point2 at(double s) const {
    Point2 p;
    for (const auto& h : x) p.x += h.amplitude * std::sin(2.0 * std::numbers::pi * h.frequency * s + h.phase);
    for (const auto& h : y) p.y += h.amplitude * std::sin(2.0 * std::numbers::pi * h.frequency * s + h.phase);
    return p;
  }
};

std::vector<Harmonic> random_harmonics(Rng& rng) {
  const int terms = 3 + static_cast<int>(rng.index(3));
  std::vector<Harmonic> hs;
  for (int i = 0; i < terms; ++i) {
    hs.push_back({rng.uniform(0.3, 1.0), rng.uniform(0.5, 3.0), rng.uniform(0.0, 2.0 * std::numbers::pi)});
  }
  return hs;
}

OnlineSignature render(const Prototype& proto, const Prototype* blend_from, const SyntheticConfig& cfg, Rng& rng) {
  const double theta = rng.uniform(-cfg.max_rotation_deg, cfg.max_rotation_deg) * std::numbers::pi / 180.0;
  const double scale = rng.uniform(cfg.min_scale, cfg.max_scale);
  const double tx = rng.uniform(-50.0, 50.0);
  const double ty = rng.uniform(-50.0, 50.0);
  const double c = std::cos(theta), s = std::sin(theta);

  OnlineSignature sig;
  sig.points.reserve(static_cast<std::size_t>(proto.points));
  for (int i = 0; i < proto.points; ++i) {
    const double u = static_cast<double>(i) / (proto.points - 1);
    Point2 p = proto.at(u);
    if (blend_from != nullptr) {
      const Point2 q = blend_from->at(u);
      p = {0.5 * (p.x + q.x), 0.5 * (p.y + q.y)};
    }
    p.x += cfg.noise * rng.normal();
    p.y += cfg.noise * rng.normal();
    PenPoint pp;
    pp.x = scale * (c * p.x - s * p.y) + tx;
    pp.y = scale * (s * p.x + c * p.y) + ty;
    pp.t = 10 * i;
    sig.points.push_back(pp);
  }
  return sig;
}

}  // namespace

Dataset generate_synthetic_dataset(const SyntheticConfig& config) {
  config.validate();
  Rng rng(config.seed);
  std::vector<Prototype> protos(static_cast<std::size_t>(config.n_clients));
  for (auto& p : protos) {
    p.x = random_harmonics(rng);
    p.y = random_harmonics(rng);
    p.points = 80 + static_cast<int>(rng.index(121));
  }

  Dataset dataset;
  for (int c = 0; c < config.n_clients; ++c) {
    char id[16];
    std::snprintf(id, sizeof id, "s%02d", c + 1);
    const auto& own = protos[static_cast<std::size_t>(c)];
    for (int g = 0; g < config.genuine_per_client; ++g) {
      auto sig = render(own, nullptr, config, rng);
      sig.client_id = id;
      sig.label = SampleLabel::genuine;
      sig.sample_index = g + 1;
      dataset.add(std::move(sig));
    }
    // The forger traces another client's shape pulled halfway toward this
    // client's prototype, sampled at this client's point count.
    Prototype imitation = protos[static_cast<std::size_t>((c + 1) % config.n_clients)];
    imitation.points = own.points;
    for (int f = 0; f < config.forgeries_per_client; ++f) {
      auto sig = render(imitation, &own, config, rng);
      sig.client_id = id;
      sig.label = SampleLabel::skilled_forgery;
      sig.sample_index = config.genuine_per_client + f + 1;
      dataset.add(std::move(sig));
    }
  }
  return dataset;
}

}  // namespace sigverify
