#include "rnc/distribution.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "rnc/errors.hpp"

namespace rnc {

MatrixDistribution MatrixDistribution::dirac(StochasticMatrix matrix) {
  const std::size_t n = matrix.n();
  return MatrixDistribution(n, Dirac{std::move(matrix)});
}

MatrixDistribution MatrixDistribution::finite(std::vector<Atom> atoms) {
  if (atoms.empty()) throw ConfigError("finite distribution needs at least one atom");
  const std::size_t n = atoms.front().matrix.n();
  double total = 0.0;
  std::vector<double> cdf;
  cdf.reserve(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const Atom& a = atoms[k];
    if (!std::isfinite(a.prob) || a.prob < 0.0) {
      std::ostringstream msg;
      msg << "atom " << k << " has invalid probability " << a.prob;
      throw ConfigError(msg.str());
    }
    if (a.matrix.n() != n) {
      std::ostringstream msg;
      msg << "atom " << k << " has dimension " << a.matrix.n() << ", expected " << n;
      throw ConfigError(msg.str());
    }
    total += a.prob;
    cdf.push_back(total);
  }
  if (std::abs(total - 1.0) > kProbabilitySumTolerance) {
    std::ostringstream msg;
    msg.precision(12);
    msg << "atom probabilities sum to " << total;
    throw ConfigError(msg.str());
  }
  cdf.back() = 1.0;
  return MatrixDistribution(n, Finite{std::move(atoms), std::move(cdf)});
}

MatrixDistribution MatrixDistribution::generator(std::string_view name, const ParamMap& params) {
  return generated(make_generator(name, params));
}

MatrixDistribution MatrixDistribution::generated(std::shared_ptr<const Generator> generator) {
  if (!generator) throw PreconditionError("null generator");
  const std::size_t n = generator->n();
  return MatrixDistribution(n, Generated{std::move(generator)});
}

std::string_view MatrixDistribution::kind_name() const {
  if (as_dirac()) return "dirac";
  if (as_finite()) return "finite";
  return "generator";
}

const StochasticMatrix& MatrixDistribution::select(double u) const {
  if (const auto* d = as_dirac()) return d->matrix;
  if (const auto* f = as_finite()) {
    auto it = std::upper_bound(f->cdf.begin(), f->cdf.end(), u);
    auto k = static_cast<std::size_t>(it - f->cdf.begin());
    k = std::min(k, f->atoms.size() - 1);
    // Only reachable for a zero-probability tail atom, via the forced cdf.back() == 1.
    while (k > 0 && f->atoms[k].prob == 0.0) --k;
    return f->atoms[k].matrix;
  }
  throw PreconditionError("inverse-CDF selection is only defined for dirac and finite kinds");
}

StochasticMatrix MatrixDistribution::sample(Rng& rng) const {
  if (as_dirac()) return as_dirac()->matrix;
  if (as_finite()) return select(uniform01(rng));
  return as_generated()->generator->sample(rng);
}

std::optional<std::vector<Atom>> MatrixDistribution::atoms() const {
  if (const auto* d = as_dirac()) return std::vector<Atom>{Atom{1.0, d->matrix}};
  if (const auto* f = as_finite()) return f->atoms;
  return std::nullopt;
}

}  // namespace rnc
