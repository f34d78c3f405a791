#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "adrnet/core/matrix.hpp"
#include "adrnet/core/param.hpp"

namespace adrnet {

// Probabilities are kept inside [kProbEps, 1 - kProbEps] so logs and logits stay finite.
inline constexpr double kProbEps = 1e-12;

// ---- affine -----------------------------------------------------------------
// W is (in x out), b is (1 x out), z is (batch x in); output is z W + b, i.e.
// W^T z_r + b for every row z_r.

struct AffineCache {
  Matrix input;
  bool ready = false;
};

Matrix affine_forward(const ParamBlock& W, const ParamBlock& b, const Matrix& z, AffineCache* cache = nullptr);

// Accumulates into W.grad and b.grad, returns the gradient with respect to z.
Matrix affine_backward(const AffineCache& cache, ParamBlock& W, ParamBlock& b, const Matrix& upstream);

// Multi-hot input given as sorted active indices per row. The product is the
// sum of the rows of W selected by the active bits, plus b.
using ActiveBits = std::span<const std::uint32_t>;

struct SparseAffineCache {
  std::vector<ActiveBits> input;
  bool ready = false;
};

Matrix sparse_affine_forward(const ParamBlock& W, const ParamBlock& b, std::span<const ActiveBits> rows,
                             SparseAffineCache* cache = nullptr);
void sparse_affine_backward(const SparseAffineCache& cache, ParamBlock& W, ParamBlock& b, const Matrix& upstream);

// ---- activations -------------------------------------------------------------

Matrix relu(const Matrix& z);
// Passes upstream where input > 0; zero elsewhere, including input == 0.
Matrix relu_backward(const Matrix& input, const Matrix& upstream);

// Numerically stable two-branch sigmoid, clamped to [kProbEps, 1 - kProbEps].
double sigmoid(double x);
Matrix sigmoid(const Matrix& x);
// Derivative through the clamp: zero where the output sits on a bound.
double sigmoid_backward(double output, double upstream);

// ln(y / (1 - y)) with y clamped to [kProbEps, 1 - kProbEps]. Throws DomainError outside [0, 1].
double logit(double y);

// ---- structural --------------------------------------------------------------

// Row-wise [a | b].
Matrix concat(const Matrix& a, const Matrix& b);
// Splits an upstream gradient of concat(a, b) back into (a-grad, b-grad).
std::pair<Matrix, Matrix> concat_backward(const Matrix& upstream, std::size_t a_cols);

Matrix elementwise_product(const Matrix& a, const Matrix& b);
std::pair<Matrix, Matrix> elementwise_product_backward(const Matrix& a, const Matrix& b, const Matrix& upstream);

// ---- loss ----------------------------------------------------------------------

// -sum_r [y log yh + (1 - y) log(1 - yh)], with yh clamped first. Summed, not averaged.
double bce_loss(std::span<const double> y_hat, std::span<const double> y);
// d loss / d y_hat (zero where the clamp is active).
std::vector<double> bce_backward(std::span<const double> y_hat, std::span<const double> y);

// d bce / d logit for y_hat = sigmoid(logit): y_hat - y, or zero on a clamp bound.
// Equal to bce_backward composed with sigmoid_backward.
double sigmoid_bce_logit_grad(double y_hat, double y);

}  // namespace adrnet
