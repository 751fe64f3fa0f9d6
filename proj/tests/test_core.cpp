#include <cmath>
#include <map>

#include <gtest/gtest.h>

#include "rnc/config.hpp"
#include "rnc/distribution.hpp"
#include "rnc/errors.hpp"
#include "rnc/random_matrices.hpp"

namespace rnc {
namespace {

StochasticMatrix swap2() { return validate_matrix(Matrix{{0, 1}, {1, 0}}); }

ValidationError::Kind validation_kind(Matrix m) {
  try {
    validate_matrix(std::move(m));
  } catch (const ValidationError& e) {
    return e.kind();
  }
  ADD_FAILURE() << "matrix unexpectedly validated";
  return ValidationError::Kind::non_finite;
}

TEST(ValidateMatrix, AcceptsAveragingMatrix) {
  const auto a = validate_matrix(Matrix{{0.5, 0.5}, {0.5, 0.5}});
  EXPECT_EQ(a.n(), 2u);
  EXPECT_DOUBLE_EQ(a(1, 0), 0.5);
}

TEST(ValidateMatrix, ZeroDiagonalIsAllowed) {
  const auto a = validate_matrix(Matrix{{1, 0}, {1, 0}});
  EXPECT_FALSE(a.has_positive_diagonal());
}

TEST(ValidateMatrix, RejectsBadRowSum) {
  EXPECT_EQ(validation_kind(Matrix{{0.6, 0.5}, {0.5, 0.5}}), ValidationError::Kind::row_sum);
}

TEST(ValidateMatrix, RejectsNonSquareAndEmpty) {
  EXPECT_EQ(validation_kind(Matrix(2, 3, 1.0 / 3)), ValidationError::Kind::dimension_mismatch);
  EXPECT_EQ(validation_kind(Matrix()), ValidationError::Kind::dimension_mismatch);
}

TEST(ValidateMatrix, ClampsTinyNegativesAndRejectsLargeOnes) {
  const auto a = validate_matrix(Matrix{{1.0 + 5e-13, -5e-13}, {0.0, 1.0}});
  EXPECT_EQ(a(0, 1), 0.0);
  // Rows are not renormalized after clamping.
  EXPECT_EQ(a(0, 0), 1.0 + 5e-13);
  EXPECT_EQ(validation_kind(Matrix{{1.1, -0.1}, {0.0, 1.0}}), ValidationError::Kind::negative_entry);
  EXPECT_EQ(validation_kind(Matrix{{1.0 + 2e-12, -2e-12}, {0.0, 1.0}}), ValidationError::Kind::negative_entry);
}

TEST(ValidateMatrix, RejectsNonFinite) {
  EXPECT_EQ(validation_kind(Matrix{{NAN, 1.0}, {0.0, 1.0}}), ValidationError::Kind::non_finite);
}

TEST(ValidateMatrix, ConstantVectorsAreFixed) {
  Rng rng(11);
  for (int trial = 0; trial < 50; ++trial) {
    const auto a = random_stochastic(2 + trial % 10, rng);
    const Vector ones(a.n(), 3.25);
    for (double v : a.matrix() * ones) EXPECT_NEAR(v, 3.25, 1e-9 * 3.25);
  }
}

TEST(Sample, DiracAlwaysReturnsItsMatrix) {
  const auto dist = MatrixDistribution::dirac(swap2());
  Rng rng(1);
  for (int k = 0; k < 10; ++k) EXPECT_EQ(dist.sample(rng), swap2());
}

TEST(Sample, FiniteInverseCdf) {
  const auto dist = MatrixDistribution::finite({{0.5, StochasticMatrix::identity(2)}, {0.5, swap2()}});
  EXPECT_EQ(dist.select(0.3), StochasticMatrix::identity(2));
  EXPECT_EQ(dist.select(0.5), swap2());
  EXPECT_EQ(dist.select(0.999), swap2());
}

TEST(Sample, ZeroProbabilityAtomsAreNeverSelected) {
  const auto dist = MatrixDistribution::finite(
      {{0.0, swap2()}, {1.0 - 1e-12, StochasticMatrix::identity(2)}, {0.0, swap2()}});
  for (double u : {0.0, 0.25, 0.999999999999, 0.9999999999999999}) EXPECT_EQ(dist.select(u), StochasticMatrix::identity(2));
}

TEST(Sample, SelectRejectsGenerators) {
  const auto dist = MatrixDistribution::generator("pairwise_gossip", {{"n", 3}});
  EXPECT_THROW(dist.select(0.1), PreconditionError);
}

// Chi-square goodness of fit with 2 degrees of freedom, whose survival
// function is exp(-x/2).
TEST(Sample, PairwiseGossipIsUniformOverPairs) {
  const auto dist = MatrixDistribution::generator("pairwise_gossip", {{"n", 3}});
  Rng rng = RngPolicy{2024}.stream(StreamDomain::battery, 0);
  std::map<std::pair<int, int>, int> counts;
  const int draws = 100000;
  for (int k = 0; k < draws; ++k) {
    const auto a = dist.sample(rng);
    std::pair<int, int> pair{-1, -1};
    for (int i = 0; i < 3; ++i)
      for (int j = i + 1; j < 3; ++j)
        if (a(i, j) == 0.5) pair = {i, j};
    ASSERT_NE(pair.first, -1);
    // The third node is untouched.
    const int other = 3 - pair.first - pair.second;
    ASSERT_EQ(a(other, other), 1.0);
    ++counts[pair];
  }
  ASSERT_EQ(counts.size(), 3u);
  const double expected = draws / 3.0;
  double chi2 = 0.0;
  for (const auto& [pair, c] : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_GT(std::exp(-chi2 / 2.0), 0.01) << "chi2=" << chi2;
}

TEST(Sample, GeneratorDrawsAreStochastic) {
  const std::vector<MatrixDistribution> gens = {
      MatrixDistribution::generator("pairwise_gossip", {{"n", 5}}),
      MatrixDistribution::generator("dirichlet_rows", {{"n", 5}, {"alpha", 0.3}}),
      MatrixDistribution::generator("dirichlet_rows", {{"n", 4}, {"alpha", 1e-3}}),
      MatrixDistribution::generator("lazy_permutation", {{"n", 6}, {"hold_prob", 0.25}}),
  };
  Rng rng(5);
  for (const auto& g : gens)
    for (int k = 0; k < 10000; ++k) EXPECT_NO_THROW(validate_matrix(g.sample(rng).matrix()));
}

TEST(Sample, FiniteFrequenciesMatchProbabilities) {
  Rng rng(99);
  const auto dist = random_finite(3, 4, StochasticFamily::dense, rng);
  const auto& fin = *dist.as_finite();
  std::vector<int> hits(fin.atoms.size(), 0);
  const int draws = 100000;
  Rng sampler = RngPolicy{3}.path_stream(0);
  for (int k = 0; k < draws; ++k) {
    const auto a = dist.sample(sampler);
    for (std::size_t j = 0; j < fin.atoms.size(); ++j)
      if (a == fin.atoms[j].matrix) ++hits[j];
  }
  for (std::size_t j = 0; j < fin.atoms.size(); ++j) {
    const double p = fin.atoms[j].prob;
    const double se = std::sqrt(p * (1 - p) / draws);
    EXPECT_NEAR(hits[j] / double(draws), p, 4 * se) << "atom " << j;
  }
}

TEST(Generators, InvalidParametersAreConfigErrors) {
  EXPECT_THROW(MatrixDistribution::generator("pairwise_gossip", {{"n", 1}}), ConfigError);
  EXPECT_THROW(MatrixDistribution::generator("pairwise_gossip", {{"n", 2.5}}), ConfigError);
  EXPECT_THROW(MatrixDistribution::generator("pairwise_gossip", {}), ConfigError);
  EXPECT_THROW(MatrixDistribution::generator("dirichlet_rows", {{"n", 3}, {"alpha", 0}}), ConfigError);
  EXPECT_THROW(MatrixDistribution::generator("lazy_permutation", {{"n", 3}, {"hold_prob", 1.5}}), ConfigError);
  EXPECT_THROW(MatrixDistribution::generator("lazy_permutation", {{"n", 3}, {"hold_prob", 0.5}, {"x", 1}}), ConfigError);
  EXPECT_THROW(MatrixDistribution::generator("erdos_renyi", {{"n", 3}}), ConfigError);
}

TEST(Distribution, FiniteRejectsBadAtoms) {
  EXPECT_THROW(MatrixDistribution::finite({}), ConfigError);
  EXPECT_THROW(MatrixDistribution::finite({{0.7, swap2()}, {0.4, swap2()}}), ConfigError);
  EXPECT_THROW(MatrixDistribution::finite({{-0.1, swap2()}, {1.1, swap2()}}), ConfigError);
  EXPECT_THROW(MatrixDistribution::finite({{0.5, swap2()}, {0.5, StochasticMatrix::identity(3)}}), ConfigError);
}

TEST(Rng, StreamsAreReproducibleAndDistinct) {
  const RngPolicy policy{42};
  Rng a = policy.path_stream(3);
  Rng b = policy.path_stream(3);
  Rng c = policy.path_stream(4);
  Rng d = policy.stream(StreamDomain::initial_state, 3);
  const auto va = a();
  EXPECT_EQ(va, b());
  EXPECT_NE(va, c());
  EXPECT_NE(va, d());
  EXPECT_NE(RngPolicy{43}.path_stream(3)(), va);
}

TEST(Config, LoadsDirac) {
  const Config c = parse_config(R"({"n": 2, "distribution": {"type": "dirac", "matrix": [[1,0],[0.25,0.75]]}})");
  ASSERT_NE(c.distribution.as_dirac(), nullptr);
  EXPECT_EQ(c.distribution.n(), 2u);
  EXPECT_FALSE(c.simulation.paths.has_value());
}

TEST(Config, LoadsFiniteAndSimulationBlock) {
  const Config c = parse_config(R"({
    "n": 2,
    "distribution": {"type": "finite", "atoms": [
      {"prob": 0.7, "matrix": [[1,0],[0,1]]},
      {"prob": 0.3, "matrix": [[0,1],[1,0]]}]},
    "simulation": {"paths": 10, "horizon": 50, "eps": 0.01, "seed": 18446744073709551615, "x0": [1, 0]}})");
  ASSERT_NE(c.distribution.as_finite(), nullptr);
  EXPECT_EQ(c.distribution.as_finite()->atoms.size(), 2u);
  EXPECT_EQ(*c.simulation.paths, 10u);
  EXPECT_EQ(*c.simulation.seed, 18446744073709551615ULL);
  EXPECT_FALSE(c.simulation.x0->uniform01);
}

TEST(Config, LoadsGeneratorWithInheritedDimension) {
  const Config c = parse_config(R"({"n": 4, "distribution": {"type": "generator", "name": "lazy_permutation",
                                    "params": {"hold_prob": 0.5}}, "simulation": {"x0": "uniform01"}})");
  EXPECT_EQ(c.distribution.n(), 4u);
  EXPECT_TRUE(c.simulation.x0->uniform01);
}

std::string config_error(std::string_view text) {
  try {
    parse_config(text, "cfg.json");
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "<no error>";
}

TEST(Config, SchemaDiagnostics) {
  EXPECT_NE(config_error(R"({"n": 2, "distribution": {"type": "finite", "atoms": [
      {"prob": 0.7, "matrix": [[1,0],[0,1]]}, {"prob": 0.4, "matrix": [[1,0],[0,1]]}]}})")
                .find("atom probabilities sum to 1.1"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"n": 2, "distribution": {"type": "dirac", "matrix": [[0.6,0.5],[0.5,0.5]]}})")
                .find("distribution.matrix"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"n": 2, "distribution": {"type": "dirac", "matrix": [[1,0]]}})").find("expected 2 rows"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"n": 2, "distribution": {"type": "poisson"}})").find("distribution.type"), std::string::npos);
  EXPECT_NE(config_error(R"({"distribution": {"type": "dirac"}})").find("'n'"), std::string::npos);
  EXPECT_NE(config_error(R"({"n": 3, "distribution": {"type": "generator", "name": "pairwise_gossip", "params": {"n": 4}}})")
                .find("distribution.params.n"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"n": 2, "distribution": {"type": "dirac", "matrix": [[1,0],[0,1]]}, "simulation": {"x0": [1]}})")
                .find("simulation.x0"),
            std::string::npos);
  EXPECT_NE(config_error(R"({"n": 2, "bogus": 1, "distribution": {"type": "dirac", "matrix": [[1,0],[0,1]]}})")
                .find("unknown field 'bogus'"),
            std::string::npos);
}

TEST(Config, ParseErrorsCarryLineNumbers) {
  const std::string msg = config_error("{\n  \"n\": 2,\n  \"distribution\": {,\n}");
  EXPECT_NE(msg.find("cfg.json:3:"), std::string::npos) << msg;
}

TEST(Config, RoundTripPreservesMatricesExactly) {
  Rng rng(8);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + trial % 12;
    const auto a = random_stochastic(n, rng);
    const Config back = parse_config(dump_config(MatrixDistribution::dirac(a)));
    EXPECT_LE(max_abs_diff(back.distribution.as_dirac()->matrix.matrix(), a.matrix()), 1e-15);
  }
  const auto fin = random_finite(3, 3, StochasticFamily::sparse, rng);
  SimulationDefaults sim;
  sim.paths = 5;
  sim.x0 = InitialState::explicit_values({0.1, 0.2, 0.3});
  const Config back = parse_config(dump_config(fin, sim));
  const auto& a = fin.as_finite()->atoms;
  const auto& b = back.distribution.as_finite()->atoms;
  ASSERT_EQ(a.size(), b.size());
  for (std::size_t k = 0; k < a.size(); ++k) {
    EXPECT_EQ(a[k].prob, b[k].prob);
    EXPECT_EQ(a[k].matrix, b[k].matrix);
  }
  EXPECT_EQ(*back.simulation.paths, 5u);
}

TEST(InitialState, ParsesAllForms) {
  EXPECT_TRUE(parse_initial_state("uniform01").uniform01);
  EXPECT_EQ(parse_initial_state("[1, 0.5, -2]").values, (Vector{1, 0.5, -2}));
  EXPECT_EQ(parse_initial_state("1,0.5,-2").values, (Vector{1, 0.5, -2}));
  EXPECT_THROW(parse_initial_state("1,abc"), ConfigError);
}

TEST(InitialState, Uniform01IsSeededAndInRange) {
  const Vector a = InitialState::uniform().resolve(5, RngPolicy{1});
  const Vector b = InitialState::uniform().resolve(5, RngPolicy{1});
  const Vector c = InitialState::uniform().resolve(5, RngPolicy{2});
  EXPECT_EQ(a, b);
  EXPECT_NE(a, c);
  for (double v : a) {
    EXPECT_GE(v, 0.0);
    EXPECT_LT(v, 1.0);
  }
  EXPECT_THROW(InitialState::explicit_values({1, 2}).resolve(3, RngPolicy{}), PreconditionError);
}

}  // namespace
}  // namespace rnc
