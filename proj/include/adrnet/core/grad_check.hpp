#pragma once

#include <cstdint>
#include <functional>
#include <span>

#include "adrnet/core/param.hpp"

namespace adrnet {

struct GradCheckOptions {
  double h = 1e-5;
  // Coordinates probed per block; blocks smaller than this are checked in full.
  std::size_t samples_per_block = 32;
  std::uint64_t seed = 0;
};

struct GradCheckResult {
  double max_relative_error = 0.0;
  // Where the worst error was observed.
  const ParamBlock* worst_block = nullptr;
  std::size_t worst_index = 0;
  double worst_analytic = 0.0;
  double worst_numeric = 0.0;
  std::size_t coordinates_checked = 0;
};

// Compares the analytic gradients already stored in each block's grad buffer
// against central differences (f(x + h) - f(x - h)) / 2h of `loss`. The
// relative error per coordinate is |a - n| / max(|a|, |n|, 1e-8). `loss` must
// be a deterministic forward pass that does not touch the grad buffers.
GradCheckResult grad_check(const std::function<double()>& loss, std::span<ParamBlock* const> params,
                           const GradCheckOptions& options = {});

}  // namespace adrnet
