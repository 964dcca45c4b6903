#include "sigverify/scoring.hpp"

#include <iostream>
#include <numeric>

namespace sigverify {

double template_score(std::span<const double> d_test, std::span<const double> d_pairwise) {
  const std::size_t n = d_test.size();
  if (n < 2) throw InvalidArgument("template_score: need at least 2 templates");
  if (d_pairwise.size() != n * (n - 1) / 2) {
    throw InvalidArgument("template_score: expected " + std::to_string(n * (n - 1) / 2) +
                          " pairwise distances, got " + std::to_string(d_pairwise.size()));
  }
  for (double d : d_test) {
    if (!(d >= 0.0)) throw InvalidArgument("template_score: negative or NaN probe distance");
  }
  for (double d : d_pairwise) {
    if (!(d >= 0.0)) throw InvalidArgument("template_score: negative or NaN template distance");
  }
  const double pair_sum = std::accumulate(d_pairwise.begin(), d_pairwise.end(), 0.0);
  if (pair_sum == 0.0) throw DegenerateTemplates("template_score: all template distances are zero");
  const double test_sum = std::accumulate(d_test.begin(), d_test.end(), 0.0);
  return (static_cast<double>(n - 1) / 2.0) * test_sum / pair_sum;
}

namespace {

double backend_distance(const FeatureSequence& a, const FeatureSequence& b, const DtwBackend& dtw) {
  return dtw_distance(a, b, dtw.config);
}

std::vector<Vector> embed_all(std::span<const FeatureSequence> seqs, const GruModel& model) {
  std::vector<Vector> out;
  out.reserve(seqs.size());
  for (const auto& s : seqs) out.push_back(embed(model, s));
  return out;
}

const GruModel& require_model(const RnnBackend& rnn) {
  if (rnn.model == nullptr) throw InvalidArgument("rnn backend has no model");
  return *rnn.model;
}

}  // namespace

std::vector<double> pairwise_distances(std::span<const FeatureSequence> templates, const Backend& backend) {
  std::vector<double> out;
  if (const auto* dtw = std::get_if<DtwBackend>(&backend)) {
    for (std::size_t i = 0; i < templates.size(); ++i) {
      for (std::size_t j = i + 1; j < templates.size(); ++j) {
        out.push_back(backend_distance(templates[i], templates[j], *dtw));
      }
    }
    return out;
  }
  const auto embs = embed_all(templates, require_model(std::get<RnnBackend>(backend)));
  for (std::size_t i = 0; i < embs.size(); ++i) {
    for (std::size_t j = i + 1; j < embs.size(); ++j) out.push_back((embs[i] - embs[j]).norm());
  }
  return out;
}

std::vector<double> probe_distances(const FeatureSequence& probe, std::span<const FeatureSequence> templates,
                                    const Backend& backend) {
  std::vector<double> out;
  if (const auto* dtw = std::get_if<DtwBackend>(&backend)) {
    for (const auto& t : templates) out.push_back(backend_distance(probe, t, *dtw));
    return out;
  }
  const auto& model = require_model(std::get<RnnBackend>(backend));
  const Vector p = embed(model, probe);
  for (const auto& t : templates) out.push_back((p - embed(model, t)).norm());
  return out;
}

VerificationScore score_from_distances(std::span<const double> d_test, std::span<const double> d_pairwise) {
  VerificationScore s;
  try {
    s.score = template_score(d_test, d_pairwise);
  } catch (const DegenerateTemplates&) {
    std::clog << "warning: templates are indistinguishable; using mean probe distance\n";
    s.score = std::accumulate(d_test.begin(), d_test.end(), 0.0) / static_cast<double>(d_test.size());
    s.degenerate = true;
  }
  return s;
}

VerificationScore score_probe(const OnlineSignature& probe, std::span<const OnlineSignature> templates,
                              const Backend& backend, const FeatureConfig& features) {
  if (templates.size() < 2) throw InvalidArgument("score_probe: need at least 2 templates");
  std::vector<FeatureSequence> tfeat;
  tfeat.reserve(templates.size());
  for (const auto& t : templates) tfeat.push_back(featurize(t, features));
  const auto pfeat = featurize(probe, features);

  auto s = score_from_distances(probe_distances(pfeat, tfeat, backend), pairwise_distances(tfeat, backend));
  s.client_id = templates.front().client_id;
  s.truth = probe.label;
  return s;
}

}  // namespace sigverify
