#pragma once

#include <cstddef>
#include <string>

#include "adrnet/core/matrix.hpp"
#include "adrnet/core/random.hpp"

namespace adrnet {

// A learnable tensor together with its gradient buffer and Adam moments.
// Gradients accumulate with += so a block reached by several paths in one
// backward pass receives the sum of their contributions.
struct ParamBlock {
  std::string name;
  Matrix value;
  Matrix grad;
  Matrix m;
  Matrix v;
  std::size_t step_count = 0;

  ParamBlock() = default;
  ParamBlock(std::string name, Matrix initial);

  std::size_t rows() const { return value.rows(); }
  std::size_t cols() const { return value.cols(); }
  std::size_t size() const { return value.size(); }

  void zero_grad() { grad.fill(0.0); }
  // Forget optimizer state (moments and step count).
  void reset_moments();
};

enum class InitScheme { UniformScaled, NormalScaled, Zeros };

InitScheme parse_init_scheme(const std::string& name);
std::string to_string(InitScheme scheme);

// Draws a rows x cols block. UniformScaled samples U(-s, s) with
// s = sqrt(6 / (fan_in + fan_out)); NormalScaled samples N(0, 2 / (fan_in + fan_out)).
// fan_in is rows and fan_out is cols. Gradients and moments start at zero.
ParamBlock init_params(std::string name, std::size_t rows, std::size_t cols, InitScheme scheme, Rng& rng);

double uniform_scaled_bound(std::size_t fan_in, std::size_t fan_out);

}  // namespace adrnet
