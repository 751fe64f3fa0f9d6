#include "rnc/matrix.hpp"

#include <algorithm>
#include <cmath>

#include "rnc/errors.hpp"

namespace rnc {

Matrix::Matrix(std::initializer_list<std::initializer_list<double>> rows) {
  rows_ = rows.size();
  cols_ = rows_ == 0 ? 0 : rows.begin()->size();
  data_.reserve(rows_ * cols_);
  for (const auto& r : rows) {
    if (r.size() != cols_) throw PreconditionError("ragged matrix literal");
    data_.insert(data_.end(), r.begin(), r.end());
  }
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
  Matrix m(rows.size(), rows.empty() ? 0 : rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols_) throw PreconditionError("ragged matrix rows");
    std::copy(rows[i].begin(), rows[i].end(), m.row(i).begin());
  }
  return m;
}

Matrix Matrix::transpose() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

std::vector<std::vector<double>> Matrix::to_rows() const {
  std::vector<std::vector<double>> out(rows_);
  for (std::size_t i = 0; i < rows_; ++i) out[i].assign(row(i).begin(), row(i).end());
  return out;
}

double Matrix::norm_inf() const {
  double best = 0.0;
  for (std::size_t i = 0; i < rows_; ++i) best = std::max(best, norm_l1(row(i)));
  return best;
}

double Matrix::max_abs() const {
  double best = 0.0;
  for (double v : data_) best = std::max(best, std::abs(v));
  return best;
}

Matrix& Matrix::operator+=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw PreconditionError("shape mismatch in +=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += other.data_[k];
  return *this;
}

Matrix& Matrix::operator-=(const Matrix& other) {
  if (rows_ != other.rows_ || cols_ != other.cols_) throw PreconditionError("shape mismatch in -=");
  for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= other.data_[k];
  return *this;
}

Matrix& Matrix::operator*=(double s) {
  for (double& v : data_) v *= s;
  return *this;
}

Matrix operator+(Matrix a, const Matrix& b) { return a += b; }
Matrix operator-(Matrix a, const Matrix& b) { return a -= b; }
Matrix operator*(double s, Matrix a) { return a *= s; }

Matrix operator*(const Matrix& a, const Matrix& b) {
  if (a.cols() != b.rows()) throw PreconditionError("shape mismatch in matrix product");
  Matrix c(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto out = c.row(i);
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      auto brow = b.row(k);
      for (std::size_t j = 0; j < b.cols(); ++j) out[j] += aik * brow[j];
    }
  }
  return c;
}

void multiply_into(const Matrix& a, std::span<const double> x, std::span<double> out) {
  if (a.cols() != x.size() || a.rows() != out.size())
    throw PreconditionError("shape mismatch in matrix-vector product");
  for (std::size_t i = 0; i < a.rows(); ++i) {
    auto r = a.row(i);
    double s = 0.0;
    for (std::size_t j = 0; j < r.size(); ++j) s += r[j] * x[j];
    out[i] = s;
  }
}

Vector operator*(const Matrix& a, std::span<const double> x) {
  Vector out(a.rows());
  multiply_into(a, x, out);
  return out;
}

Matrix matrix_power(const Matrix& a, unsigned exponent) {
  if (!a.square()) throw PreconditionError("matrix_power needs a square matrix");
  Matrix result = Matrix::identity(a.rows());
  Matrix base = a;
  while (exponent > 0) {
    if (exponent & 1u) result = result * base;
    exponent >>= 1u;
    if (exponent > 0) base = base * base;
  }
  return result;
}

double max_abs_diff(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw PreconditionError("shape mismatch");
  double best = 0.0;
  auto da = a.data();
  auto db = b.data();
  for (std::size_t k = 0; k < da.size(); ++k) best = std::max(best, std::abs(da[k] - db[k]));
  return best;
}

double norm_inf(std::span<const double> x) {
  double best = 0.0;
  for (double v : x) best = std::max(best, std::abs(v));
  return best;
}

double norm_l1(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += std::abs(v);
  return s;
}

double norm_l2(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

}  // namespace rnc
