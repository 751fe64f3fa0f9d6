#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>

#include "rnc/distribution.hpp"
#include "rnc/dynamics.hpp"
#include "rnc/matrix.hpp"
#include "rnc/spectral.hpp"

namespace rnc {

/// Estimate of E[A(1)].
struct ExpectedMatrix {
  Matrix matrix;
  bool exact = false;
  std::uint64_t sample_count = 0;      // 0 if exact
  double entry_standard_error = 0.0;   // max entrywise sample std / sqrt(M); 0 if exact
};

inline constexpr std::uint64_t kMinMonteCarloSamples = 1000;

struct VerdictOptions {
  std::uint64_t mc_samples = 4000;
  std::uint64_t bootstrap_resamples = 200;
  double tol = kMarginalTolerance;
  std::uint64_t seed = 0;
};

/// Exact mixture for dirac/finite kinds and generators with a closed-form
/// mean; otherwise the sample mean of mc_samples draws from the
/// expectation stream of `seed`. Throws PreconditionError when Monte Carlo
/// is needed and mc_samples < 1000.
ExpectedMatrix expected_matrix(const MatrixDistribution& dist, std::uint64_t mc_samples,
                               std::uint64_t seed);

struct ConsensusVerdict {
  double lambda2_modulus = 0.0;
  Decision decision = Decision::marginal;
  bool positive_diagonal_support = false;
  double uncertainty_halfwidth = 0.0;
  std::optional<std::string> discrepancy;
};

/// Spectral verdict on E[A(1)]. For Monte Carlo expectations the marginal
/// band is widened by 3x the bootstrap std of lambda_2.
ConsensusVerdict random_verdict(const MatrixDistribution& dist, const VerdictOptions& opts = {});

struct CrossValidation {
  ConsensusVerdict verdict;  // discrepancy populated on disagreement
  ModeReport modes;
};

/// Runs the spectral verdict and the empirical mode estimators side by side
/// and records, without resolving, any disagreement between them.
CrossValidation cross_validate(const MatrixDistribution& dist, std::span<const double> x0,
                               const SimulationOptions& sim, const VerdictOptions& verdict = {});

/// The block companion matrix [[alpha A, beta B], [I, 0]].
StochasticMatrix lift_block(double alpha, double beta, const StochasticMatrix& a,
                            const StochasticMatrix& b);

/// Law of the lifted matrix C(t) on S_2N for independent A(t) ~ dist_a and
/// B(t) ~ dist_b. Explicit supports give an explicit product support;
/// anything involving a generator gives a joint-sampling generator.
/// Throws ConfigError on bad weights or mismatched dimensions.
MatrixDistribution lift_second_order(double alpha, double beta, const MatrixDistribution& dist_a,
                                     const MatrixDistribution& dist_b);

/// Norms of the mean versus means of the norms for a discrete random vector
/// Y taking values[k] with probability probs[k].
struct NormExpectations {
  double mean_l1 = 0.0;     // E ||Y||_1
  double l1_of_mean = 0.0;  // ||E Y||_1
  double mean_inf = 0.0;    // E ||Y||_inf
  double inf_of_mean = 0.0; // ||E Y||_inf
};

/// Throws PreconditionError on length or dimension mismatch.
NormExpectations expectation_norms(std::span<const Vector> values, std::span<const double> probs);

}  // namespace rnc
