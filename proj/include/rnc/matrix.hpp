#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace rnc {

using Vector = std::vector<double>;

/// Dense row-major real matrix. Small and square in practice (n <= 256).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
  Matrix(std::initializer_list<std::initializer_list<double>> rows);

  static Matrix identity(std::size_t n);
  /// Nested-vector view, as produced by parsers. Rows must be equal length.
  static Matrix from_rows(const std::vector<std::vector<double>>& rows);

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool square() const noexcept { return rows_ == cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<double> row(std::size_t i) { return {data_.data() + i * cols_, cols_}; }
  std::span<const double> row(std::size_t i) const { return {data_.data() + i * cols_, cols_}; }

  std::span<const double> data() const noexcept { return data_; }
  std::span<double> data() noexcept { return data_; }

  Matrix transpose() const;
  std::vector<std::vector<double>> to_rows() const;

  /// Induced infinity norm (max absolute row sum).
  double norm_inf() const;
  /// Largest absolute entry.
  double max_abs() const;

  Matrix& operator+=(const Matrix& other);
  Matrix& operator-=(const Matrix& other);
  Matrix& operator*=(double s);

  friend bool operator==(const Matrix&, const Matrix&) = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

Matrix operator+(Matrix a, const Matrix& b);
Matrix operator-(Matrix a, const Matrix& b);
Matrix operator*(double s, Matrix a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, std::span<const double> x);

/// Writes a*x into out without allocating. out must not alias x.
void multiply_into(const Matrix& a, std::span<const double> x, std::span<double> out);

Matrix matrix_power(const Matrix& a, unsigned exponent);

/// Largest absolute entrywise difference; matrices must share a shape.
double max_abs_diff(const Matrix& a, const Matrix& b);

double norm_inf(std::span<const double> x);
double norm_l1(std::span<const double> x);
double norm_l2(std::span<const double> x);

}  // namespace rnc
