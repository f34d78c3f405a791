#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

namespace adrnet {

// Dense row-major matrix of doubles. A batch of vectors is stored one vector
// per row.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0);
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> values);

  // Single-row matrix from a list of values.
  static Matrix row_vector(std::initializer_list<double> values);
  static Matrix row_vector(std::span<const double> values);
  static Matrix identity(std::size_t n);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  std::size_t size() const { return values_.size(); }
  bool empty() const { return values_.empty(); }

  double& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }
  double& operator[](std::size_t idx) { return values_[idx]; }
  double operator[](std::size_t idx) const { return values_[idx]; }

  std::span<double> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
  std::span<const double> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  void fill(double v);
  bool same_shape(const Matrix& other) const { return rows_ == other.rows_ && cols_ == other.cols_; }
  bool all_finite() const;

  // "RxC", used in error messages.
  std::string shape_string() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.values_ == b.values_;
  }

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> values_;
};

// a (n x k) * b (k x m)
Matrix matmul(const Matrix& a, const Matrix& b);
// a^T (k x n)^T * b (k x m) -> n x m
Matrix matmul_at_b(const Matrix& a, const Matrix& b);
// a (n x k) * b^T (m x k)^T -> n x m
Matrix matmul_a_bt(const Matrix& a, const Matrix& b);

double dot(std::span<const double> a, std::span<const double> b);

}  // namespace adrnet
