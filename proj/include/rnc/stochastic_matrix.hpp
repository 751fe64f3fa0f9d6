#pragma once

#include <cstddef>
#include <utility>
#include <vector>

#include "rnc/matrix.hpp"

namespace rnc {

inline constexpr double kRowSumTolerance = 1e-9;
inline constexpr double kNegativeClamp = 1e-12;

/// A validated element of S_N: nonnegative entries, unit row sums.
///
/// Only constructible through validate_matrix (or the trusted factories
/// below), so holding one is proof that the invariants were checked.
class StochasticMatrix {
 public:
  std::size_t n() const noexcept { return m_.rows(); }
  const Matrix& matrix() const noexcept { return m_; }
  double operator()(std::size_t i, std::size_t j) const { return m_(i, j); }

  bool has_positive_diagonal() const;

  static StochasticMatrix identity(std::size_t n);
  /// Every entry 1/n.
  static StochasticMatrix uniform_average(std::size_t n);
  /// Permutation matrix with row i having its 1 at column perm[i].
  static StochasticMatrix permutation(const std::vector<std::size_t>& perm);

  friend bool operator==(const StochasticMatrix&, const StochasticMatrix&) = default;

 private:
  explicit StochasticMatrix(Matrix m) : m_(std::move(m)) {}
  friend StochasticMatrix validate_matrix(Matrix raw);

  Matrix m_;
};

/// Validates raw against the S_N invariants. Entries in [-1e-12, 0) are
/// clamped to zero; rows are never renormalized.
/// Throws ValidationError (dimension_mismatch, negative_entry, row_sum,
/// non_finite).
StochasticMatrix validate_matrix(Matrix raw);

}  // namespace rnc
