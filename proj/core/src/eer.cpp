#include <algorithm>
#include <cmath>
#include <cstdint>

#include "sigverify/scoring.hpp"

namespace sigverify {

EerResult compute_eer(std::span<const VerificationScore> scores) {
  std::vector<double> genuine, forgery;
  for (const auto& s : scores) {
    if (!std::isfinite(s.score)) throw InvalidArgument("compute_eer: non-finite score");
    (s.truth == SampleLabel::genuine ? genuine : forgery).push_back(s.score);
  }
  if (genuine.empty() || forgery.empty()) {
    throw InvalidArgument("compute_eer: need at least one genuine and one forgery score");
  }
  std::sort(genuine.begin(), genuine.end());
  std::sort(forgery.begin(), forgery.end());

  std::vector<double> distinct(genuine);
  distinct.insert(distinct.end(), forgery.begin(), forgery.end());
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());

  std::vector<double> candidates;
  candidates.push_back(distinct.front() - 1.0);
  for (std::size_t i = 0; i < distinct.size(); ++i) {
    if (i > 0) candidates.push_back(0.5 * (distinct[i - 1] + distinct[i]));
    candidates.push_back(distinct[i]);
  }
  candidates.push_back(distinct.back() + 1.0);

  // accept iff score < t
  const auto accepted = [](const std::vector<double>& sorted, double t) {
    return static_cast<double>(std::lower_bound(sorted.begin(), sorted.end(), t) - sorted.begin());
  };
  // The crossing is formed from integer counts with one final division, so
  // the EER is the correctly rounded value of an exact rational.
  const auto ng = static_cast<std::int64_t>(genuine.size());
  const auto nf = static_cast<std::int64_t>(forgery.size());
  struct Counts {
    std::int64_t fa, fr;
  };
  std::vector<Counts> counts;
  counts.reserve(candidates.size());
  EerResult result;
  result.curve.reserve(candidates.size());
  for (double t : candidates) {
    const auto fa = static_cast<std::int64_t>(accepted(forgery, t));
    const auto fr = ng - static_cast<std::int64_t>(accepted(genuine, t));
    counts.push_back({fa, fr});
    result.curve.push_back({t, static_cast<double>(fa) / nf, static_cast<double>(fr) / ng});
  }

  // FAR - FRR is non-decreasing over ascending thresholds, from -1 to +1.
  for (std::size_t i = 0; i < counts.size(); ++i) {
    const auto [fa, fr] = counts[i];
    const std::int64_t diff = fa * ng - fr * nf;  // sign of FAR - FRR
    if (diff < 0) continue;
    if (diff == 0 || i == 0) {
      result.eer = result.curve[i].far;
      result.threshold = result.curve[i].threshold;
      return result;
    }
    const auto [pa, pr] = counts[i - 1];
    const std::int64_t prev_diff = pa * ng - pr * nf;
    const std::int64_t den = diff - prev_diff;
    // FAR at fraction alpha = -prev_diff / den between the two candidates
    const std::int64_t num = pa * den - prev_diff * (fa - pa);
    result.eer = static_cast<double>(num) / static_cast<double>(nf * den);
    const double alpha = static_cast<double>(-prev_diff) / static_cast<double>(den);
    result.threshold = result.curve[i - 1].threshold + alpha * (result.curve[i].threshold - result.curve[i - 1].threshold);
    return result;
  }
  return result;  // unreachable: the last candidate has FAR 1, FRR 0
}

}  // namespace sigverify
