#include "adrnet/core/adam.hpp"

#include <cmath>

#include "adrnet/core/error.hpp"

namespace adrnet {

void AdamConfig::validate() const {
  if (!(learning_rate > 0.0)) throw ConfigError("adam: learning_rate must be positive");
  if (!(beta1 > 0.0 && beta1 < 1.0)) throw ConfigError("adam: beta1 must lie in (0, 1)");
  if (!(beta2 > 0.0 && beta2 < 1.0)) throw ConfigError("adam: beta2 must lie in (0, 1)");
  if (!(epsilon > 0.0)) throw ConfigError("adam: epsilon must be positive");
  if (!(weight_decay >= 0.0)) throw ConfigError("adam: weight_decay must be nonnegative");
}

void adam_step(ParamBlock& param, const AdamConfig& cfg) {
  if (!param.grad.all_finite()) {
    throw NumericError("adam: non-finite gradient in parameter '" + param.name + "'");
  }
  param.step_count += 1;
  const double t = static_cast<double>(param.step_count);
  const double bias1 = 1.0 - std::pow(cfg.beta1, t);
  const double bias2 = 1.0 - std::pow(cfg.beta2, t);

  auto value = param.value.values();
  auto grad = param.grad.values();
  auto m = param.m.values();
  auto v = param.v.values();
  for (std::size_t k = 0; k < value.size(); ++k) {
    const double g = grad[k] + cfg.weight_decay * value[k];
    m[k] = cfg.beta1 * m[k] + (1.0 - cfg.beta1) * g;
    v[k] = cfg.beta2 * v[k] + (1.0 - cfg.beta2) * g * g;
    const double m_hat = m[k] / bias1;
    const double v_hat = v[k] / bias2;
    value[k] -= cfg.learning_rate * m_hat / (std::sqrt(v_hat) + cfg.epsilon);
    grad[k] = 0.0;
  }
}

}  // namespace adrnet
