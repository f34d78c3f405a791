#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "adrnet/core/ops.hpp"
#include "adrnet/core/param.hpp"

namespace adrnet {

struct DenseLayer {
  ParamBlock W;  // in x out
  ParamBlock b;  // 1 x out
};

// Activations kept by Tower::forward for the backward pass.
struct TowerCache {
  SparseAffineCache sparse_input;
  std::vector<AffineCache> affine;
  std::vector<Matrix> pre_activation;
  bool ready = false;
};

// A stack of affine + ReLU layers. widths = {in, h1, ..., out}; every layer,
// including the last, applies ReLU.
class Tower {
 public:
  Tower() = default;
  Tower(const std::string& name, const std::vector<std::size_t>& widths, InitScheme scheme, Rng& rng);

  std::size_t depth() const { return layers_.size(); }
  std::size_t input_width() const;
  std::size_t output_width() const;

  Matrix forward(const Matrix& input, TowerCache* cache = nullptr) const;
  // Same as forward on the dense multi-hot matrix, but the first layer sums
  // the weight rows of the active bits.
  Matrix forward_sparse(std::span<const ActiveBits> input, TowerCache* cache = nullptr) const;

  // Accumulates layer gradients; returns d/d input (empty for a sparse-input pass).
  Matrix backward(const TowerCache& cache, const Matrix& upstream);

  std::vector<DenseLayer>& layers() { return layers_; }
  const std::vector<DenseLayer>& layers() const { return layers_; }

 private:
  Matrix run_from(std::size_t first, Matrix z, TowerCache* cache) const;

  std::vector<DenseLayer> layers_;
};

}  // namespace adrnet
