#include "sigverify/adamax.hpp"

#include <algorithm>
#include <cmath>

#include "sigverify/errors.hpp"

namespace sigverify {

void adamax_step(std::span<double> params, std::span<const double> grads, AdamaxState& state,
                 const AdamaxConfig& config) {
  if (params.size() != grads.size()) throw InvalidArgument("adamax: gradient size mismatch");
  if (state.first_moment.empty() && state.step == 0) state = AdamaxState(params.size());
  if (state.first_moment.size() != params.size()) throw InvalidArgument("adamax: state size mismatch");
  for (std::size_t i = 0; i < grads.size(); ++i) {
    if (!std::isfinite(grads[i])) {
      throw NumericalError("adamax: non-finite gradient at index " + std::to_string(i));
    }
  }

  ++state.step;
  const double step_size =
      config.learning_rate / (1.0 - std::pow(config.beta1, static_cast<double>(state.step)));
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double g = std::clamp(grads[i], -config.clip, config.clip);
    double& m = state.first_moment[i];
    double& u = state.inf_norm[i];
    m = config.beta1 * m + (1.0 - config.beta1) * g;
    u = std::max(config.beta2 * u, std::abs(g));
    if (m != 0.0) params[i] -= step_size * m / std::max(u, config.epsilon);
  }
}

void adamax_step(GruModel& model, const GruModel& grads, AdamaxState& state,
                 const AdamaxConfig& config) {
  auto params = model.flatten();
  const auto g = grads.flatten();
  adamax_step(params, g, state, config);
  model.assign(params);
}

}  // namespace sigverify
