#pragma once

#include <cstddef>

#include "rnc/distribution.hpp"
#include "rnc/random_matrices.hpp"

namespace rnc::testing {

// Two-block diagonal stochastic matrix with positive diagonal. Mixtures of
// these never merge the blocks, so consensus fails for generic x0.
inline StochasticMatrix block_diagonal(std::size_t n, std::size_t split, Rng& rng) {
  const StochasticMatrix top = random_positive_diagonal(split, rng);
  const StochasticMatrix bottom = random_positive_diagonal(n - split, rng);
  Matrix m(n, n);
  for (std::size_t i = 0; i < split; ++i)
    for (std::size_t j = 0; j < split; ++j) m(i, j) = top.matrix()(i, j);
  for (std::size_t i = split; i < n; ++i)
    for (std::size_t j = split; j < n; ++j) m(i, j) = bottom.matrix()(i - split, j - split);
  return validate_matrix(std::move(m));
}

// Battery instance k: even k mixes dense positive-diagonal atoms, odd k mixes
// reducible block-diagonal atoms sharing one split.
inline MatrixDistribution battery_instance(std::size_t k, Rng& rng) {
  const std::size_t n = 3 + uniform_index(rng, 6);
  const std::size_t atoms = 1 + uniform_index(rng, 4);
  std::vector<Atom> list;
  std::vector<double> weights(atoms);
  double total = 0.0;
  for (double& w : weights) total += (w = 0.1 + uniform01(rng));
  const std::size_t split = 1 + uniform_index(rng, n - 1);
  for (std::size_t a = 0; a < atoms; ++a) {
    StochasticMatrix m = k % 2 == 0 ? random_positive_diagonal(n, rng) : block_diagonal(n, split, rng);
    list.push_back(Atom{weights[a] / total, std::move(m)});
  }
  return MatrixDistribution::finite(std::move(list));
}

}  // namespace rnc::testing
