#include <cmath>

#include <gtest/gtest.h>

#include "battery.hpp"
#include "rnc/analysis.hpp"
#include "rnc/dynamics.hpp"
#include "rnc/errors.hpp"
#include "rnc/projection.hpp"
#include "rnc/random_matrices.hpp"
#include "rnc/spectral.hpp"

namespace rnc {
namespace {

MatrixDistribution identity_swap_mixture() {
  return MatrixDistribution::finite({Atom{0.5, StochasticMatrix::identity(2)},
                                     Atom{0.5, StochasticMatrix::permutation({1, 0})}});
}

MatrixDistribution gossip(std::size_t n) {
  return MatrixDistribution::generator("pairwise_gossip", {{"n", static_cast<double>(n)}});
}

TEST(SimulatePath, AveragingMatrixReachesConsensusInOneStep) {
  const auto dist = MatrixDistribution::dirac(StochasticMatrix::uniform_average(3));
  Rng rng(1);
  const Vector x0{1, 0, 0};
  const TrajectoryRecord r = simulate_path(dist, x0, 3, rng);
  ASSERT_EQ(r.series.size(), 4u);
  EXPECT_EQ(r.series[0].diameter, 1.0);
  for (std::size_t t = 1; t < 4; ++t) {
    EXPECT_EQ(r.series[t].t, t);
    EXPECT_EQ(r.series[t].diameter, 0.0);
  }
  for (double v : r.final_state) EXPECT_NEAR(v, 1.0 / 3, 1e-15);
}

TEST(SimulatePath, IdentityKeepsTheStateFixed) {
  const auto dist = MatrixDistribution::dirac(StochasticMatrix::identity(4));
  Rng rng(2);
  const Vector x0{0.3, -1.0, 2.0, 0.0};
  const TrajectoryRecord r = simulate_path(dist, x0, 25, rng);
  for (const auto& s : r.series) EXPECT_EQ(s.diameter, 3.0);
  EXPECT_EQ(r.final_state, x0);
}

TEST(SimulatePath, IdentitySwapMixtureNeverContracts) {
  const auto dist = identity_swap_mixture();
  Rng rng(3);
  const Vector x0{0, 1};
  const TrajectoryRecord r = simulate_path(dist, x0, 100, rng);
  for (const auto& s : r.series) EXPECT_EQ(s.diameter, 1.0);
}

TEST(SimulatePath, RejectsBadArguments) {
  const auto dist = gossip(3);
  Rng rng(4);
  const Vector x0{1, 2, 3};
  EXPECT_THROW(simulate_path(dist, x0, 0, rng), PreconditionError);
  const Vector wrong{1, 2};
  EXPECT_THROW(simulate_path(dist, wrong, 5, rng), PreconditionError);
}

TEST(SimulatePath, DiagnosticsMatchTheState) {
  const auto dist = gossip(5);
  Rng rng(5);
  const Vector x0{4, -1, 0.5, 2, 3};
  const TrajectoryRecord r = simulate_path(dist, x0, 1, rng);
  EXPECT_EQ(r.series[0].diameter, 5.0);
  EXPECT_NEAR(r.series[0].disagreement_inf, norm_inf(disagreement(x0)), 1e-15);
  EXPECT_NEAR(r.series[0].disagreement_l2, norm_l2(disagreement(x0)), 1e-15);
  EXPECT_NEAR(r.series[1].diameter, diameter(r.final_state), 0.0);
}

TEST(EstimateModes, GossipConvergesInEveryMode) {
  SimulationOptions opts;
  opts.seed = 11;
  const Vector x0{0.9, 0.1, 0.4};
  const ModeReport m = estimate_modes(gossip(3), x0, opts);
  EXPECT_TRUE(m.all_converged());
  EXPECT_EQ(m.as_fraction, 1.0);
  EXPECT_EQ(m.prob_curve.size(), opts.horizon + 1);
  EXPECT_EQ(m.prob_curve.front(), 1.0);
  EXPECT_EQ(m.prob_curve.back(), 0.0);
}

TEST(EstimateModes, IdentityConvergesInNoMode) {
  SimulationOptions opts;
  opts.paths = 20;
  opts.horizon = 30;
  const Vector x0{0, 1};
  const ModeReport m = estimate_modes(MatrixDistribution::dirac(StochasticMatrix::identity(2)), x0, opts);
  EXPECT_TRUE(m.none_converged());
  EXPECT_TRUE(m.agreement());
  EXPECT_EQ(m.as_fraction, 0.0);
  for (double v : m.lp_curve) EXPECT_EQ(v, 1.0);
}

TEST(EstimateModes, LpCurveUsesTheExponent) {
  SimulationOptions opts;
  opts.paths = 5;
  opts.horizon = 3;
  opts.p = 3.0;
  const Vector x0{0, 0.5};
  const ModeReport m = estimate_modes(MatrixDistribution::dirac(StochasticMatrix::identity(2)), x0, opts);
  EXPECT_DOUBLE_EQ(m.lp_curve.back(), 0.125);
}

TEST(EstimateModes, RejectsBadOptions) {
  const Vector x0{0, 1};
  const auto dist = MatrixDistribution::dirac(StochasticMatrix::identity(2));
  SimulationOptions opts;
  opts.paths = 0;
  EXPECT_THROW(estimate_modes(dist, x0, opts), PreconditionError);
  opts = {};
  opts.eps = 0.0;
  EXPECT_THROW(estimate_modes(dist, x0, opts), PreconditionError);
  opts = {};
  opts.p = 0.5;
  EXPECT_THROW(estimate_modes(dist, x0, opts), PreconditionError);
}

TEST(ShiftInvariance, Examples) {
  const auto dist = gossip(4);
  const Vector x0{0.2, 0.7, 0.1, 0.9};
  EXPECT_TRUE(shift_invariance_check(dist, x0, 0.0, 50, 9));
  EXPECT_TRUE(shift_invariance_check(dist, x0, 5.0, 50, 9, 9));
  EXPECT_THROW(shift_invariance_check(dist, x0, 5.0, 50, 9, 10), PreconditionError);
}

TEST(ShiftInvariance, HoldsForRandomLaws) {
  Rng rng(12);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + trial % 10;
    const auto dist = random_finite(n, 3, StochasticFamily::dense, rng);
    Vector x0(n);
    for (double& v : x0) v = uniform01(rng);
    EXPECT_TRUE(shift_invariance_check(dist, x0, 20.0 * uniform01(rng) - 10.0, 40, trial));
  }
}

TEST(ZeroOne, Examples) {
  SimulationOptions opts;
  opts.paths = 50;
  opts.horizon = 200;
  const Vector x2{0, 1};
  EXPECT_EQ(zero_one_probe(MatrixDistribution::dirac(StochasticMatrix::identity(2)), x2, opts), 0.0);
  const Vector x3{0, 1, 0.5};
  EXPECT_EQ(zero_one_probe(gossip(3), x3, opts), 1.0);
}

TEST(Monotonicity, DiameterNeverIncreases) {
  Rng rng(13);
  const StochasticFamily families[] = {StochasticFamily::dense, StochasticFamily::sparse,
                                       StochasticFamily::zero_diagonal, StochasticFamily::permutation_mix};
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = 2 + trial % 12;
    const auto dist = random_finite(n, 3, families[trial % 4], rng);
    Vector x0(n);
    for (double& v : x0) v = 10.0 * uniform01(rng) - 5.0;
    const TrajectoryRecord r = simulate_path(dist, x0, 60, rng);
    EXPECT_TRUE(r.diameter_nonincreasing()) << "trial " << trial;
    EXPECT_TRUE(r.projection_bounds_hold());
  }
}

TEST(Monotonicity, DisagreementNeverIncreasesForDoublyStochasticLaws) {
  Rng rng(14);
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = 2 + trial % 12;
    const auto dist = random_finite(n, 3, StochasticFamily::permutation_mix, rng);
    Vector x0(n);
    for (double& v : x0) v = 10.0 * uniform01(rng) - 5.0;
    EXPECT_TRUE(simulate_path(dist, x0, 60, rng).disagreement_nonincreasing()) << "trial " << trial;
  }
}

// A row-stochastic but not doubly stochastic step can increase the
// inf-norm distance to the mean: 0.5 -> 2/3.
TEST(Monotonicity, DisagreementCanIncreaseForGeneralStochasticMatrices) {
  const auto a = validate_matrix(Matrix{{1, 0, 0}, {1, 0, 0}, {0, 0, 1}});
  Rng rng(0);
  const Vector x0{1, 0.5, 0};
  const TrajectoryRecord r = simulate_path(MatrixDistribution::dirac(a), x0, 1, rng);
  EXPECT_DOUBLE_EQ(r.series[0].disagreement_inf, 0.5);
  EXPECT_DOUBLE_EQ(r.series[1].disagreement_inf, 2.0 / 3);
  EXPECT_FALSE(r.disagreement_nonincreasing());
  EXPECT_TRUE(r.diameter_nonincreasing());
}

TEST(Reproducibility, ThreadCountDoesNotChangeResults) {
  SimulationOptions opts;
  opts.paths = 64;
  opts.horizon = 80;
  opts.seed = 99;
  const auto dist = MatrixDistribution::generator("dirichlet_rows", {{"n", 5}, {"alpha", 0.7}});
  const Vector x0{1, 2, 3, 4, 5};
  opts.threads = 1;
  const auto one = simulate_paths(dist, x0, opts);
  opts.threads = 7;
  const auto many = simulate_paths(dist, x0, opts);
  ASSERT_EQ(one.size(), many.size());
  for (std::size_t k = 0; k < one.size(); ++k) {
    EXPECT_EQ(one[k].path_id, k);
    EXPECT_EQ(one[k].final_state, many[k].final_state);
    for (std::size_t t = 0; t < one[k].series.size(); ++t)
      EXPECT_EQ(one[k].series[t].disagreement_l2, many[k].series[t].disagreement_l2);
  }
  const ModeReport a = summarize_modes(one, 1e-3, 2.0), b = summarize_modes(many, 1e-3, 2.0);
  EXPECT_EQ(a.lp_curve, b.lp_curve);
  EXPECT_EQ(a.mean_diameter, b.mean_diameter);
}

TEST(Battery, ConvergedInstancesHaveASpectralGap) {
  Rng rng(15);
  SimulationOptions opts;
  opts.paths = 50;
  opts.horizon = 200;
  for (std::size_t k = 0; k < 8; ++k) {
    const auto dist = testing::battery_instance(k, rng);
    Vector x0(dist.n());
    for (double& v : x0) v = uniform01(rng);
    const ModeReport m = estimate_modes(dist, x0, opts);
    EXPECT_TRUE(m.agreement()) << "instance " << k;
    if (m.all_converged()) {
      EXPECT_LT(random_verdict(dist).lambda2_modulus, 1.0 - 1e-7) << "instance " << k;
    }
  }
}

TEST(NormExpectations, OneNormCommutesButInfNormDoesNot) {
  const std::vector<Vector> values{{0, 1}, {1, 0}};
  const std::vector<double> probs{0.5, 0.5};
  const NormExpectations e = expectation_norms(values, probs);
  EXPECT_EQ(e.mean_l1, 1.0);
  EXPECT_EQ(e.l1_of_mean, 1.0);
  EXPECT_EQ(e.mean_inf, 1.0);
  EXPECT_EQ(e.inf_of_mean, 0.5);
}

TEST(NormExpectations, OneNormIdentityForRandomNonnegativeVectors) {
  Rng rng(16);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Vector> values(4, Vector(5));
    std::vector<double> probs(4);
    double total = 0.0;
    for (auto& v : values)
      for (double& x : v) x = uniform01(rng);
    for (double& p : probs) total += (p = uniform01(rng) + 0.1);
    for (double& p : probs) p /= total;
    const NormExpectations e = expectation_norms(values, probs);
    EXPECT_NEAR(e.mean_l1, e.l1_of_mean, 1e-14);
    EXPECT_GE(e.mean_inf, e.inf_of_mean - 1e-15);
  }
}

TEST(NormExpectations, RejectsMismatchedInput) {
  const std::vector<Vector> values{{0, 1}, {1}};
  const std::vector<double> probs{0.5, 0.5};
  EXPECT_THROW(expectation_norms(values, probs), PreconditionError);
  const std::vector<double> short_probs{1.0};
  const std::vector<Vector> ok{{0, 1}, {1, 0}};
  EXPECT_THROW(expectation_norms(ok, short_probs), PreconditionError);
}

}  // namespace
}  // namespace rnc
