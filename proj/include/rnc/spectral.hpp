#pragma once

#include <complex>
#include <string_view>
#include <vector>

#include "rnc/matrix.hpp"
#include "rnc/stochastic_matrix.hpp"

namespace rnc {

inline constexpr double kMarginalTolerance = 1e-7;

/// All eigenvalues of a real matrix, sorted by modulus descending, then real
/// part descending, then imaginary part descending.
struct Spectrum {
  std::vector<std::complex<double>> eigenvalues;
  /// Backward error of the computed real Schur form, ||M - Z T Z^T||_inf.
  double residual = 0.0;
};

/// Eigenvalues via Householder Hessenberg reduction and Francis double-shift
/// QR. Throws PreconditionError for non-square or non-finite input and
/// NumericalError when the iteration cap (100 n sweeps) is exhausted.
Spectrum eigen_spectrum(const Matrix& m, std::string_view label = "matrix");

/// |lambda_2(A)|. Checks that |lambda_1| is 1 within 1e-7 and throws
/// NumericalError otherwise. Returns 0 for n = 1.
double second_eigenvalue_modulus(const StochasticMatrix& a);

double spectral_radius(const Matrix& m);

enum class Decision { consensus, no_consensus, marginal };

std::string_view to_string(Decision d);

/// Banded decision on a lambda_2 modulus: consensus below 1 - band, no
/// consensus above 1 + band, marginal in between.
Decision classify_lambda2(double lambda2_modulus, double band);

/// Consensus of the deterministic system x(t) = A^t x.
Decision deterministic_verdict(const StochasticMatrix& a, double tol = kMarginalTolerance);

}  // namespace rnc
