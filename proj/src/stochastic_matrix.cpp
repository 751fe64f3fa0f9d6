#include "rnc/stochastic_matrix.hpp"

#include <cmath>
#include <sstream>

#include "rnc/errors.hpp"

namespace rnc {

StochasticMatrix validate_matrix(Matrix raw) {
  if (raw.rows() == 0 || !raw.square()) {
    std::ostringstream msg;
    msg << "dimension mismatch: expected a non-empty square matrix, got " << raw.rows() << "x"
        << raw.cols();
    throw ValidationError(ValidationError::Kind::dimension_mismatch, msg.str());
  }
  const std::size_t n = raw.rows();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      double& v = raw(i, j);
      if (!std::isfinite(v)) {
        std::ostringstream msg;
        msg << "non-finite entry at (" << i << ", " << j << ")";
        throw ValidationError(ValidationError::Kind::non_finite, msg.str());
      }
      if (v < 0.0) {
        if (v < -kNegativeClamp) {
          std::ostringstream msg;
          msg.precision(17);
          msg << "negative entry " << v << " at (" << i << ", " << j << ")";
          throw ValidationError(ValidationError::Kind::negative_entry, msg.str());
        }
        v = 0.0;
      }
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = 0.0;
    for (double v : raw.row(i)) s += v;
    if (std::abs(s - 1.0) > kRowSumTolerance) {
      std::ostringstream msg;
      msg.precision(17);
      msg << "row " << i << " sums to " << s << ", not 1";
      throw ValidationError(ValidationError::Kind::row_sum, msg.str());
    }
  }
  return StochasticMatrix(std::move(raw));
}

bool StochasticMatrix::has_positive_diagonal() const {
  for (std::size_t i = 0; i < n(); ++i)
    if (!(m_(i, i) > 0.0)) return false;
  return true;
}

StochasticMatrix StochasticMatrix::identity(std::size_t n) {
  return StochasticMatrix(Matrix::identity(n));
}

StochasticMatrix StochasticMatrix::uniform_average(std::size_t n) {
  return StochasticMatrix(Matrix(n, n, 1.0 / static_cast<double>(n)));
}

StochasticMatrix StochasticMatrix::permutation(const std::vector<std::size_t>& perm) {
  const std::size_t n = perm.size();
  std::vector<bool> seen(n, false);
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) {
    if (perm[i] >= n || seen[perm[i]]) throw PreconditionError("not a permutation");
    seen[perm[i]] = true;
    m(i, perm[i]) = 1.0;
  }
  return StochasticMatrix(std::move(m));
}

}  // namespace rnc
