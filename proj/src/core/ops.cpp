#include "adrnet/core/ops.hpp"

#include <algorithm>
#include <cmath>

#include "adrnet/core/error.hpp"

namespace adrnet {

namespace {

void require_same_shape(const char* op, const Matrix& a, const Matrix& b) {
  if (!a.same_shape(b)) {
    throw DimensionError(std::string(op) + ": shapes " + a.shape_string() + " and " + b.shape_string());
  }
}

bool on_clamp_bound(double p) { return p <= kProbEps || p >= 1.0 - kProbEps; }

}  // namespace

Matrix affine_forward(const ParamBlock& W, const ParamBlock& b, const Matrix& z, AffineCache* cache) {
  if (z.cols() != W.rows()) {
    throw DimensionError("affine: input " + z.shape_string() + " does not match weight " + W.value.shape_string());
  }
  if (b.rows() != 1 || b.cols() != W.cols()) {
    throw DimensionError("affine: bias " + b.value.shape_string() + " does not match weight " +
                         W.value.shape_string());
  }
  Matrix out = matmul(z, W.value);
  for (std::size_t r = 0; r < out.rows(); ++r) {
    auto row = out.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) row[c] += b.value[c];
  }
  if (cache != nullptr) {
    cache->input = z;
    cache->ready = true;
  }
  return out;
}

Matrix affine_backward(const AffineCache& cache, ParamBlock& W, ParamBlock& b, const Matrix& upstream) {
  if (!cache.ready) throw StateError("affine_backward called before affine_forward");
  if (upstream.rows() != cache.input.rows() || upstream.cols() != W.cols()) {
    throw DimensionError("affine_backward: upstream " + upstream.shape_string() + " expected " +
                         std::to_string(cache.input.rows()) + "x" + std::to_string(W.cols()));
  }
  Matrix dW = matmul_at_b(cache.input, upstream);
  for (std::size_t k = 0; k < dW.size(); ++k) W.grad[k] += dW[k];
  for (std::size_t r = 0; r < upstream.rows(); ++r) {
    auto row = upstream.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) b.grad[c] += row[c];
  }
  return matmul_a_bt(upstream, W.value);
}

Matrix sparse_affine_forward(const ParamBlock& W, const ParamBlock& b, std::span<const ActiveBits> rows,
                             SparseAffineCache* cache) {
  if (b.rows() != 1 || b.cols() != W.cols()) {
    throw DimensionError("sparse affine: bias " + b.value.shape_string() + " does not match weight " +
                         W.value.shape_string());
  }
  Matrix out(rows.size(), W.cols());
  for (std::size_t r = 0; r < rows.size(); ++r) {
    auto dst = out.row(r);
    std::copy(b.value.values().begin(), b.value.values().end(), dst.begin());
    for (std::uint32_t bit : rows[r]) {
      if (bit >= W.rows()) {
        throw DimensionError("sparse affine: active bit " + std::to_string(bit) + " outside input width " +
                             std::to_string(W.rows()));
      }
      auto w = W.value.row(bit);
      for (std::size_t c = 0; c < dst.size(); ++c) dst[c] += w[c];
    }
  }
  if (cache != nullptr) {
    cache->input.assign(rows.begin(), rows.end());
    cache->ready = true;
  }
  return out;
}

void sparse_affine_backward(const SparseAffineCache& cache, ParamBlock& W, ParamBlock& b, const Matrix& upstream) {
  if (!cache.ready) throw StateError("sparse_affine_backward called before sparse_affine_forward");
  if (upstream.rows() != cache.input.size() || upstream.cols() != W.cols()) {
    throw DimensionError("sparse_affine_backward: upstream " + upstream.shape_string() + " expected " +
                         std::to_string(cache.input.size()) + "x" + std::to_string(W.cols()));
  }
  for (std::size_t r = 0; r < upstream.rows(); ++r) {
    auto g = upstream.row(r);
    for (std::size_t c = 0; c < g.size(); ++c) b.grad[c] += g[c];
    for (std::uint32_t bit : cache.input[r]) {
      auto dst = W.grad.row(bit);
      for (std::size_t c = 0; c < g.size(); ++c) dst[c] += g[c];
    }
  }
}

Matrix relu(const Matrix& z) {
  Matrix out = z;
  for (double& x : out.values()) x = x > 0.0 ? x : 0.0;
  return out;
}

Matrix relu_backward(const Matrix& input, const Matrix& upstream) {
  require_same_shape("relu_backward", input, upstream);
  Matrix out(input.rows(), input.cols());
  for (std::size_t k = 0; k < input.size(); ++k) out[k] = input[k] > 0.0 ? upstream[k] : 0.0;
  return out;
}

double sigmoid(double x) {
  double p;
  if (x >= 0.0) {
    p = 1.0 / (1.0 + std::exp(-x));
  } else {
    const double e = std::exp(x);
    p = e / (1.0 + e);
  }
  return std::clamp(p, kProbEps, 1.0 - kProbEps);
}

Matrix sigmoid(const Matrix& x) {
  Matrix out = x;
  for (double& v : out.values()) v = sigmoid(v);
  return out;
}

double sigmoid_backward(double output, double upstream) {
  if (on_clamp_bound(output)) return 0.0;
  return upstream * output * (1.0 - output);
}

double logit(double y) {
  if (!(y >= 0.0 && y <= 1.0)) throw DomainError("logit: argument " + std::to_string(y) + " outside [0, 1]");
  const double p = std::clamp(y, kProbEps, 1.0 - kProbEps);
  return std::log(p / (1.0 - p));
}

Matrix concat(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows()) {
    throw DimensionError("concat: batch sizes " + a.shape_string() + " and " + b.shape_string());
  }
  Matrix out(a.rows(), a.cols() + b.cols());
  for (std::size_t r = 0; r < a.rows(); ++r) {
    auto dst = out.row(r);
    std::copy(a.row(r).begin(), a.row(r).end(), dst.begin());
    std::copy(b.row(r).begin(), b.row(r).end(), dst.begin() + static_cast<std::ptrdiff_t>(a.cols()));
  }
  return out;
}

std::pair<Matrix, Matrix> concat_backward(const Matrix& upstream, std::size_t a_cols) {
  if (a_cols > upstream.cols()) {
    throw DimensionError("concat_backward: split at " + std::to_string(a_cols) + " of " + upstream.shape_string());
  }
  Matrix ga(upstream.rows(), a_cols);
  Matrix gb(upstream.rows(), upstream.cols() - a_cols);
  for (std::size_t r = 0; r < upstream.rows(); ++r) {
    auto src = upstream.row(r);
    std::copy(src.begin(), src.begin() + static_cast<std::ptrdiff_t>(a_cols), ga.row(r).begin());
    std::copy(src.begin() + static_cast<std::ptrdiff_t>(a_cols), src.end(), gb.row(r).begin());
  }
  return {std::move(ga), std::move(gb)};
}

Matrix elementwise_product(const Matrix& a, const Matrix& b) {
  require_same_shape("elementwise_product", a, b);
  Matrix out(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = a[k] * b[k];
  return out;
}

std::pair<Matrix, Matrix> elementwise_product_backward(const Matrix& a, const Matrix& b, const Matrix& upstream) {
  require_same_shape("elementwise_product_backward", a, b);
  require_same_shape("elementwise_product_backward", a, upstream);
  Matrix ga(a.rows(), a.cols());
  Matrix gb(a.rows(), a.cols());
  for (std::size_t k = 0; k < a.size(); ++k) {
    ga[k] = upstream[k] * b[k];
    gb[k] = upstream[k] * a[k];
  }
  return {std::move(ga), std::move(gb)};
}

double bce_loss(std::span<const double> y_hat, std::span<const double> y) {
  if (y_hat.size() != y.size()) {
    throw DimensionError("bce_loss: " + std::to_string(y_hat.size()) + " predictions vs " +
                         std::to_string(y.size()) + " labels");
  }
  double loss = 0.0;
  for (std::size_t r = 0; r < y.size(); ++r) {
    const double p = std::clamp(y_hat[r], kProbEps, 1.0 - kProbEps);
    loss -= y[r] * std::log(p) + (1.0 - y[r]) * std::log1p(-p);
  }
  return loss;
}

std::vector<double> bce_backward(std::span<const double> y_hat, std::span<const double> y) {
  if (y_hat.size() != y.size()) {
    throw DimensionError("bce_backward: " + std::to_string(y_hat.size()) + " predictions vs " +
                         std::to_string(y.size()) + " labels");
  }
  std::vector<double> g(y.size());
  for (std::size_t r = 0; r < y.size(); ++r) {
    const double p = y_hat[r];
    g[r] = on_clamp_bound(p) ? 0.0 : -y[r] / p + (1.0 - y[r]) / (1.0 - p);
  }
  return g;
}

double sigmoid_bce_logit_grad(double y_hat, double y) {
  if (on_clamp_bound(y_hat)) return 0.0;
  return y_hat - y;
}

}  // namespace adrnet
