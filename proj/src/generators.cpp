#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

#include "rnc/distribution.hpp"
#include "rnc/errors.hpp"

namespace rnc {
namespace {

constexpr std::size_t kMaxGeneratorDimension = 256;

double require_param(const ParamMap& params, std::string_view gen, const std::string& key) {
  auto it = params.find(key);
  if (it == params.end()) {
    std::ostringstream msg;
    msg << "generator '" << gen << "' requires parameter '" << key << "'";
    throw ConfigError(msg.str());
  }
  return it->second;
}

void reject_unknown(const ParamMap& params, std::string_view gen, std::set<std::string> allowed) {
  for (const auto& [key, value] : params) {
    if (!allowed.contains(key)) {
      std::ostringstream msg;
      msg << "generator '" << gen << "' has no parameter '" << key << "'";
      throw ConfigError(msg.str());
    }
  }
}

std::size_t require_dimension(const ParamMap& params, std::string_view gen, std::size_t min_n) {
  const double raw = require_param(params, gen, "n");
  if (!(raw >= static_cast<double>(min_n)) || raw != std::floor(raw) ||
      raw > static_cast<double>(kMaxGeneratorDimension)) {
    std::ostringstream msg;
    msg << "generator '" << gen << "': n must be an integer in [" << min_n << ", "
        << kMaxGeneratorDimension << "], got " << raw;
    throw ConfigError(msg.str());
  }
  return static_cast<std::size_t>(raw);
}

// Uniform choice among the n(n-1)/2 matrices that average one pair of
// coordinates and leave the rest alone.
class PairwiseGossip final : public Generator {
 public:
  explicit PairwiseGossip(const ParamMap& params) : params_(params) {
    reject_unknown(params, name(), {"n"});
    n_ = require_dimension(params, name(), 2);
  }

  std::string_view name() const override { return "pairwise_gossip"; }
  std::size_t n() const override { return n_; }
  const ParamMap& params() const override { return params_; }

  StochasticMatrix sample(Rng& rng) const override {
    const std::uint64_t pairs = n_ * (n_ - 1) / 2;
    std::uint64_t k = uniform_index(rng, pairs);
    std::size_t i = 0;
    while (k >= n_ - 1 - i) {
      k -= n_ - 1 - i;
      ++i;
    }
    const std::size_t j = i + 1 + static_cast<std::size_t>(k);
    Matrix m = Matrix::identity(n_);
    m(i, i) = m(j, j) = m(i, j) = m(j, i) = 0.5;
    return validate_matrix(std::move(m));
  }

  std::optional<Matrix> exact_mean() const override {
    // Node i sits in n-1 of the n(n-1)/2 pairs.
    const double nd = static_cast<double>(n_);
    Matrix m(n_, n_, 1.0 / (nd * (nd - 1.0)));
    for (std::size_t i = 0; i < n_; ++i) m(i, i) = 1.0 - 1.0 / nd;
    return m;
  }

  std::optional<bool> positive_diagonal_support() const override { return true; }

 private:
  ParamMap params_;
  std::size_t n_;
};

// Rows i.i.d. Dirichlet(alpha, ..., alpha).
class DirichletRows final : public Generator {
 public:
  explicit DirichletRows(const ParamMap& params) : params_(params) {
    reject_unknown(params, name(), {"n", "alpha"});
    n_ = require_dimension(params, name(), 1);
    alpha_ = require_param(params, name(), "alpha");
    if (!(alpha_ > 0.0) || !std::isfinite(alpha_))
      throw ConfigError("generator 'dirichlet_rows': alpha must be positive and finite");
  }

  std::string_view name() const override { return "dirichlet_rows"; }
  std::size_t n() const override { return n_; }
  const ParamMap& params() const override { return params_; }

  StochasticMatrix sample(Rng& rng) const override {
    std::gamma_distribution<double> gamma(alpha_, 1.0);
    Matrix m(n_, n_);
    for (std::size_t i = 0; i < n_; ++i) {
      auto row = m.row(i);
      double total = 0.0;
      for (double& v : row) {
        v = gamma(rng);
        total += v;
      }
      if (total > 0.0) {
        for (double& v : row) v /= total;
      } else {
        // Every gamma draw underflowed (tiny alpha); the limit law is a vertex.
        row[uniform_index(rng, n_)] = 1.0;
      }
    }
    return validate_matrix(std::move(m));
  }

  std::optional<bool> positive_diagonal_support() const override {
    // Gamma draws are almost surely positive, but underflow can produce
    // exact zeros, so this is left to sampling.
    return std::nullopt;
  }

 private:
  ParamMap params_;
  std::size_t n_;
  double alpha_;
};

// With probability hold_prob the identity, else a uniform random permutation.
class LazyPermutation final : public Generator {
 public:
  explicit LazyPermutation(const ParamMap& params) : params_(params) {
    reject_unknown(params, name(), {"n", "hold_prob"});
    n_ = require_dimension(params, name(), 1);
    hold_ = require_param(params, name(), "hold_prob");
    if (!(hold_ >= 0.0 && hold_ <= 1.0))
      throw ConfigError("generator 'lazy_permutation': hold_prob must lie in [0, 1]");
  }

  std::string_view name() const override { return "lazy_permutation"; }
  std::size_t n() const override { return n_; }
  const ParamMap& params() const override { return params_; }

  StochasticMatrix sample(Rng& rng) const override {
    if (uniform01(rng) < hold_) return StochasticMatrix::identity(n_);
    std::vector<std::size_t> perm(n_);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n_; i > 1; --i) std::swap(perm[i - 1], perm[uniform_index(rng, i)]);
    return StochasticMatrix::permutation(perm);
  }

  std::optional<Matrix> exact_mean() const override {
    // A uniform permutation has mean J/n.
    const double nd = static_cast<double>(n_);
    Matrix m(n_, n_, (1.0 - hold_) / nd);
    for (std::size_t i = 0; i < n_; ++i) m(i, i) += hold_;
    return m;
  }

  std::optional<bool> positive_diagonal_support() const override {
    return n_ == 1 || hold_ == 1.0;
  }

 private:
  ParamMap params_;
  std::size_t n_;
  double hold_;
};

}  // namespace

std::vector<std::string> registered_generators() {
  return {"pairwise_gossip", "dirichlet_rows", "lazy_permutation"};
}

std::shared_ptr<const Generator> make_generator(std::string_view name, const ParamMap& params) {
  if (name == "pairwise_gossip") return std::make_shared<PairwiseGossip>(params);
  if (name == "dirichlet_rows") return std::make_shared<DirichletRows>(params);
  if (name == "lazy_permutation") return std::make_shared<LazyPermutation>(params);
  std::ostringstream msg;
  msg << "unknown generator '" << name << "' (registered: pairwise_gossip, dirichlet_rows, "
         "lazy_permutation)";
  throw ConfigError(msg.str());
}

}  // namespace rnc
