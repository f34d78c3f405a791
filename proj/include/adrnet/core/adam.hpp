#pragma once

#include "adrnet/core/param.hpp"

namespace adrnet {

struct AdamConfig {
  double learning_rate = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double epsilon = 1e-8;
  // Coupled L2: added to the gradient before the moment update.
  double weight_decay = 0.0;

  // Throws ConfigError when a field is out of range.
  void validate() const;
};

// One bias-corrected Adam update of param.value from param.grad. Resets the
// gradient to zero and increments step_count. Throws NumericError naming the
// block if any gradient entry is non-finite.
void adam_step(ParamBlock& param, const AdamConfig& cfg);

}  // namespace adrnet
