#include "rnc/random_matrices.hpp"

#include <numeric>
#include <random>

namespace rnc {
namespace {

std::vector<std::size_t> random_permutation(std::size_t n, Rng& rng) {
  std::vector<std::size_t> perm(n);
  std::iota(perm.begin(), perm.end(), std::size_t{0});
  for (std::size_t i = n; i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
  return perm;
}

StochasticMatrix normalize_rows(Matrix m) {
  for (std::size_t i = 0; i < m.rows(); ++i) {
    auto row = m.row(i);
    double s = 0.0;
    for (double v : row) s += v;
    for (double& v : row) v /= s;
  }
  return validate_matrix(std::move(m));
}

}  // namespace

StochasticMatrix random_stochastic(std::size_t n, StochasticFamily family, Rng& rng) {
  Matrix m(n, n);
  switch (family) {
    case StochasticFamily::dense:
      for (double& v : m.data()) v = 1e-3 + uniform01(rng);
      return normalize_rows(std::move(m));
    case StochasticFamily::sparse:
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i == j || uniform01(rng) < 0.3) m(i, j) = 0.05 + uniform01(rng);
      return normalize_rows(std::move(m));
    case StochasticFamily::zero_diagonal:
      if (n == 1) return StochasticMatrix::identity(1);
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          if (i != j) m(i, j) = 1e-3 + uniform01(rng);
      return normalize_rows(std::move(m));
    case StochasticFamily::permutation_mix:
      return random_doubly_stochastic(n, rng);
  }
  return StochasticMatrix::identity(n);
}

StochasticMatrix random_stochastic(std::size_t n, Rng& rng) {
  return random_stochastic(n, static_cast<StochasticFamily>(uniform_index(rng, 4)), rng);
}

StochasticMatrix random_positive_diagonal(std::size_t n, Rng& rng) {
  return random_stochastic(n, StochasticFamily::dense, rng);
}

StochasticMatrix random_doubly_stochastic(std::size_t n, Rng& rng) {
  const std::size_t terms = 1 + uniform_index(rng, 3);
  std::vector<double> w(terms);
  double total = 0.0;
  for (double& v : w) total += (v = 0.1 + uniform01(rng));
  Matrix m(n, n);
  for (std::size_t k = 0; k < terms; ++k) {
    const auto perm = random_permutation(n, rng);
    for (std::size_t i = 0; i < n; ++i) m(i, perm[i]) += w[k] / total;
  }
  return validate_matrix(std::move(m));
}

Matrix random_gaussian(std::size_t n, Rng& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Matrix m(n, n);
  for (double& v : m.data()) v = normal(rng);
  return m;
}

MatrixDistribution random_finite(std::size_t n, std::size_t atoms, StochasticFamily family, Rng& rng) {
  std::vector<double> w(atoms);
  double total = 0.0;
  for (double& v : w) total += (v = 0.1 + uniform01(rng));
  std::vector<Atom> out;
  for (std::size_t k = 0; k < atoms; ++k) out.push_back(Atom{w[k] / total, random_stochastic(n, family, rng)});
  return MatrixDistribution::finite(std::move(out));
}

}  // namespace rnc
