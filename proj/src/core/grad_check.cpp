#include "adrnet/core/grad_check.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <vector>

namespace adrnet {

GradCheckResult grad_check(const std::function<double()>& loss, std::span<ParamBlock* const> params,
                           const GradCheckOptions& options) {
  GradCheckResult result;
  Rng rng(options.seed);
  for (ParamBlock* block : params) {
    std::vector<std::size_t> coords(block->size());
    std::iota(coords.begin(), coords.end(), std::size_t{0});
    if (coords.size() > options.samples_per_block) {
      rng.shuffle(std::span<std::size_t>(coords));
      coords.resize(options.samples_per_block);
    }
    for (std::size_t idx : coords) {
      double& x = block->value[idx];
      const double saved = x;
      x = saved + options.h;
      const double f_plus = loss();
      x = saved - options.h;
      const double f_minus = loss();
      x = saved;

      const double numeric = (f_plus - f_minus) / (2.0 * options.h);
      const double analytic = block->grad[idx];
      const double denom = std::max({std::abs(analytic), std::abs(numeric), 1e-8});
      const double rel = std::abs(analytic - numeric) / denom;
      ++result.coordinates_checked;
      if (rel > result.max_relative_error || result.worst_block == nullptr) {
        result.max_relative_error = std::max(rel, result.max_relative_error);
        result.worst_block = block;
        result.worst_index = idx;
        result.worst_analytic = analytic;
        result.worst_numeric = numeric;
      }
    }
  }
  return result;
}

}  // namespace adrnet
