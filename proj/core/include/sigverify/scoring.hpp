#pragma once

#include <span>
#include <string>
#include <variant>
#include <vector>

#include "sigverify/dtw.hpp"
#include "sigverify/errors.hpp"
#include "sigverify/features.hpp"
#include "sigverify/gru.hpp"
#include "sigverify/signature.hpp"

namespace sigverify {

/// Raised when every pairwise template distance is zero, so the
/// template-relative score is undefined.
class DegenerateTemplates : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// ((N - 1) / 2) * sum(d_test) / sum(d_pairwise) for N templates.
/// d_pairwise holds the N(N-1)/2 distances between distinct templates.
double template_score(std::span<const double> d_test, std::span<const double> d_pairwise);

struct DtwBackend {
  DtwConfig config;
};

struct RnnBackend {
  const GruModel* model = nullptr;
};

using Backend = std::variant<DtwBackend, RnnBackend>;

/// Pairwise distances between featurized templates, in (0,1), (0,2), ...,
/// (N-2,N-1) order.
std::vector<double> pairwise_distances(std::span<const FeatureSequence> templates, const Backend& backend);

/// Distances from a featurized probe to each template.
std::vector<double> probe_distances(const FeatureSequence& probe, std::span<const FeatureSequence> templates,
                                    const Backend& backend);

struct VerificationScore {
  std::string client_id;
  double score = 0.0;
  SampleLabel truth = SampleLabel::genuine;
  bool degenerate = false;  // templates coincide; score is the mean probe distance
};

/// Template score from precomputed distances; falls back to the mean probe
/// distance (and sets `degenerate`) when the pairwise sum is zero.
VerificationScore score_from_distances(std::span<const double> d_test, std::span<const double> d_pairwise);

/// Featurizes everything and scores the probe against the templates.
VerificationScore score_probe(const OnlineSignature& probe, std::span<const OnlineSignature> templates,
                              const Backend& backend, const FeatureConfig& features);

struct OperatingPoint {
  double threshold = 0.0;
  double far = 0.0;
  double frr = 0.0;
};

struct EerResult {
  double eer = 0.0;
  double threshold = 0.0;
  std::vector<OperatingPoint> curve;  // every candidate threshold, ascending
};

/// Pooled equal error rate under a single global threshold: a probe is
/// accepted iff score < t. Candidate thresholds are the distinct scores and
/// their midpoints, padded by one point past each end. The EER is interpolated
/// linearly where FAR - FRR changes sign. Genuine scores are those with
/// truth == genuine, everything else counts as forgery.
EerResult compute_eer(std::span<const VerificationScore> scores);

}  // namespace sigverify
