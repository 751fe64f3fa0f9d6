#pragma once

#include <cstddef>

#include "rnc/distribution.hpp"
#include "rnc/matrix.hpp"
#include "rnc/rng.hpp"
#include "rnc/stochastic_matrix.hpp"

namespace rnc {

/// Random stochastic matrix families for property batteries.
enum class StochasticFamily {
  dense,          // i.i.d. uniform weights per row
  sparse,         // positive diagonal, off-diagonal support with prob 0.3
  zero_diagonal,  // dense off-diagonal, zero diagonal
  permutation_mix // convex combination of 1-3 random permutations (doubly stochastic)
};

StochasticMatrix random_stochastic(std::size_t n, StochasticFamily family, Rng& rng);
/// Family picked uniformly at random.
StochasticMatrix random_stochastic(std::size_t n, Rng& rng);
/// Dense stochastic matrix with strictly positive diagonal.
StochasticMatrix random_positive_diagonal(std::size_t n, Rng& rng);
/// Doubly stochastic via a random convex combination of permutations.
StochasticMatrix random_doubly_stochastic(std::size_t n, Rng& rng);

/// i.i.d. standard normal entries.
Matrix random_gaussian(std::size_t n, Rng& rng);

/// Finite distribution with `atoms` random atoms drawn from `family`.
MatrixDistribution random_finite(std::size_t n, std::size_t atoms, StochasticFamily family, Rng& rng);

}  // namespace rnc
