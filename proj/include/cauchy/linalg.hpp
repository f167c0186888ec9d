#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace cauchy {

using Vector = std::vector<double>;

/// Dense row-major matrix. Sized for desk-scale problems (a few hundred rows).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n);
  static Matrix diagonal(std::span<const double> d);
  /// Builds from nested rows; all rows must have equal length.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const double> row(std::size_t i) const {
    return {data_.data() + i * cols_, cols_};
  }
  std::span<const double> data() const { return data_; }

  Matrix transposed() const;
  Matrix scaled(double s) const;
  double max_abs() const;

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm(std::span<const double> a);
double norm_squared(std::span<const double> a);

/// a - b
Vector subtract(std::span<const double> a, std::span<const double> b);
/// a + s*b
Vector axpy(std::span<const double> a, double s, std::span<const double> b);
Vector scale(std::span<const double> a, double s);

/// A x
Vector multiply(const Matrix& a, std::span<const double> x);
/// Aᵀ y
Vector multiply_transposed(const Matrix& a, std::span<const double> y);
/// A B
Matrix multiply(const Matrix& a, const Matrix& b);

bool all_finite(std::span<const double> v);

}  // namespace cauchy
