#pragma once

#include <cstddef>
#include <span>

#include "rnc/matrix.hpp"

namespace rnc {

/// The projector onto the consensus line R0 = span{1} and its orthogonal
/// complement (the zero-sum subspace).
struct ProjectionPair {
  std::size_t n = 0;
  Matrix pi;       // v0 v0^T, every entry 1/n
  Matrix pi_perp;  // I - pi
  Vector v0;       // (1/sqrt n, ..., 1/sqrt n)
};

ProjectionPair make_projections(std::size_t n);

/// pi_perp * x, computed as x minus its coordinate mean. Throws
/// PreconditionError on dimension mismatch.
Vector disagreement(std::span<const double> x, const ProjectionPair& proj);
/// Closed form without a ProjectionPair.
Vector disagreement(std::span<const double> x);

/// max_i x_i - min_i x_i; zero for n <= 1.
double diameter(std::span<const double> x);

}  // namespace rnc
