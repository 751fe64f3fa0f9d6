#pragma once

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "rnc/rng.hpp"
#include "rnc/stochastic_matrix.hpp"

namespace rnc {

using ParamMap = std::map<std::string, double>;

/// A parametric sampler of stochastic matrices.
class Generator {
 public:
  virtual ~Generator() = default;

  virtual std::string_view name() const = 0;
  virtual std::size_t n() const = 0;
  virtual const ParamMap& params() const = 0;
  virtual StochasticMatrix sample(Rng& rng) const = 0;

  /// Closed-form E[A] when the generator has one that is cheap to evaluate.
  virtual std::optional<Matrix> exact_mean() const { return std::nullopt; }
  /// Whether every matrix in the support has a strictly positive diagonal,
  /// when that is known without sampling.
  virtual std::optional<bool> positive_diagonal_support() const { return std::nullopt; }
  /// Whether the generator can be written back as a config document.
  virtual bool registered() const { return true; }
};

struct Atom {
  double prob;
  StochasticMatrix matrix;
};

inline constexpr double kProbabilitySumTolerance = 1e-9;

/// The law of A(t): a point mass, a finite mixture, or a generator.
class MatrixDistribution {
 public:
  struct Dirac {
    StochasticMatrix matrix;
  };
  struct Finite {
    std::vector<Atom> atoms;
    std::vector<double> cdf;  // cumulative probs, last entry forced to 1
  };
  struct Generated {
    std::shared_ptr<const Generator> generator;
  };
  using Kind = std::variant<Dirac, Finite, Generated>;

  static MatrixDistribution dirac(StochasticMatrix matrix);
  /// Throws ConfigError on negative probs, probs not summing to 1, empty
  /// atom list or mixed dimensions.
  static MatrixDistribution finite(std::vector<Atom> atoms);
  /// Builds a registered generator by name. Throws ConfigError on unknown
  /// names or invalid params.
  static MatrixDistribution generator(std::string_view name, const ParamMap& params);
  static MatrixDistribution generated(std::shared_ptr<const Generator> generator);

  std::size_t n() const noexcept { return n_; }
  const Kind& kind() const noexcept { return kind_; }
  std::string_view kind_name() const;

  const Dirac* as_dirac() const { return std::get_if<Dirac>(&kind_); }
  const Finite* as_finite() const { return std::get_if<Finite>(&kind_); }
  const Generated* as_generated() const { return std::get_if<Generated>(&kind_); }

  /// One independent draw.
  StochasticMatrix sample(Rng& rng) const;

  /// Inverse-CDF selection for finite and dirac kinds given a uniform
  /// u in [0, 1). Throws PreconditionError for generator kinds.
  const StochasticMatrix& select(double u) const;

  /// Atoms of the distribution when its support is an explicit finite list
  /// (dirac as a single atom). Empty for generators.
  std::optional<std::vector<Atom>> atoms() const;

 private:
  MatrixDistribution(std::size_t n, Kind kind) : n_(n), kind_(std::move(kind)) {}

  std::size_t n_;
  Kind kind_;
};

/// Registered generator names, in a fixed order.
std::vector<std::string> registered_generators();

/// Factory behind MatrixDistribution::generator.
std::shared_ptr<const Generator> make_generator(std::string_view name, const ParamMap& params);

}  // namespace rnc
