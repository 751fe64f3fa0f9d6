#include "rnc/spectral.hpp"

#include <cmath>
#include <sstream>

#include "rnc/errors.hpp"

namespace rnc {

double second_eigenvalue_modulus(const StochasticMatrix& a) {
  const Spectrum spectrum = eigen_spectrum(a.matrix(), "stochastic matrix");
  const double lead = std::abs(spectrum.eigenvalues.front());
  if (std::abs(lead - 1.0) > kMarginalTolerance) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "leading eigenvalue modulus of a stochastic matrix is " << lead << ", expected 1";
    throw NumericalError(msg.str());
  }
  if (spectrum.eigenvalues.size() < 2) return 0.0;
  return std::abs(spectrum.eigenvalues[1]);
}

double spectral_radius(const Matrix& m) {
  const Spectrum spectrum = eigen_spectrum(m);
  return spectrum.eigenvalues.empty() ? 0.0 : std::abs(spectrum.eigenvalues.front());
}

std::string_view to_string(Decision d) {
  switch (d) {
    case Decision::consensus:
      return "consensus";
    case Decision::no_consensus:
      return "no_consensus";
    case Decision::marginal:
      return "marginal";
  }
  return "marginal";
}

Decision classify_lambda2(double lambda2_modulus, double band) {
  if (lambda2_modulus < 1.0 - band) return Decision::consensus;
  if (lambda2_modulus > 1.0 + band) return Decision::no_consensus;
  return Decision::marginal;
}

Decision deterministic_verdict(const StochasticMatrix& a, double tol) {
  if (!(tol >= 0.0)) throw PreconditionError("deterministic_verdict: tol must be non-negative");
  return classify_lambda2(second_eigenvalue_modulus(a), tol);
}

}  // namespace rnc
