#include "adrnet/core/tower.hpp"

#include "adrnet/core/error.hpp"

namespace adrnet {

Tower::Tower(const std::string& name, const std::vector<std::size_t>& widths, InitScheme scheme, Rng& rng) {
  if (widths.size() < 2) throw ConfigError(name + ": a tower needs at least an input and an output width");
  for (std::size_t w : widths) {
    if (w == 0) throw ConfigError(name + ": layer widths must be positive");
  }
  for (std::size_t l = 0; l + 1 < widths.size(); ++l) {
    const std::string tag = name + "." + std::to_string(l);
    DenseLayer layer;
    layer.W = init_params(tag + ".W", widths[l], widths[l + 1], scheme, rng);
    layer.b = init_params(tag + ".b", 1, widths[l + 1], InitScheme::Zeros, rng);
    layers_.push_back(std::move(layer));
  }
}

std::size_t Tower::input_width() const { return layers_.empty() ? 0 : layers_.front().W.rows(); }
std::size_t Tower::output_width() const { return layers_.empty() ? 0 : layers_.back().W.cols(); }

Matrix Tower::run_from(std::size_t first, Matrix z, TowerCache* cache) const {
  if (cache != nullptr) cache->pre_activation[first - 1] = z;
  z = relu(z);
  for (std::size_t l = first; l < layers_.size(); ++l) {
    Matrix a = affine_forward(layers_[l].W, layers_[l].b, z, cache ? &cache->affine[l] : nullptr);
    z = relu(a);
    if (cache != nullptr) cache->pre_activation[l] = std::move(a);
  }
  if (cache != nullptr) cache->ready = true;
  return z;
}

Matrix Tower::forward(const Matrix& input, TowerCache* cache) const {
  if (layers_.empty()) throw StateError("tower has no layers");
  if (cache != nullptr) {
    *cache = TowerCache{};
    cache->affine.resize(layers_.size());
    cache->pre_activation.resize(layers_.size());
  }
  Matrix a = affine_forward(layers_[0].W, layers_[0].b, input, cache ? &cache->affine[0] : nullptr);
  return run_from(1, std::move(a), cache);
}

Matrix Tower::forward_sparse(std::span<const ActiveBits> input, TowerCache* cache) const {
  if (layers_.empty()) throw StateError("tower has no layers");
  if (cache != nullptr) {
    *cache = TowerCache{};
    cache->affine.resize(layers_.size());
    cache->pre_activation.resize(layers_.size());
  }
  Matrix a = sparse_affine_forward(layers_[0].W, layers_[0].b, input, cache ? &cache->sparse_input : nullptr);
  return run_from(1, std::move(a), cache);
}

Matrix Tower::backward(const TowerCache& cache, const Matrix& upstream) {
  if (!cache.ready) throw StateError("tower backward called before forward");
  Matrix g = upstream;
  for (std::size_t l = layers_.size(); l-- > 1;) {
    g = relu_backward(cache.pre_activation[l], g);
    g = affine_backward(cache.affine[l], layers_[l].W, layers_[l].b, g);
  }
  g = relu_backward(cache.pre_activation[0], g);
  if (cache.sparse_input.ready) {
    sparse_affine_backward(cache.sparse_input, layers_[0].W, layers_[0].b, g);
    return Matrix{};
  }
  return affine_backward(cache.affine[0], layers_[0].W, layers_[0].b, g);
}

}  // namespace adrnet
