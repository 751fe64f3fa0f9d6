#include "rnc/analysis.hpp"

#include <cmath>
#include <sstream>

#include "rnc/errors.hpp"

namespace rnc {
namespace {

std::optional<Matrix> exact_mean_of(const MatrixDistribution& dist) {
  if (auto atoms = dist.atoms()) {
    Matrix mean(dist.n(), dist.n());
    for (const Atom& a : *atoms) mean += a.prob * a.matrix.matrix();
    return mean;
  }
  return dist.as_generated()->generator->exact_mean();
}

std::optional<bool> known_positive_diagonal(const MatrixDistribution& dist) {
  if (auto atoms = dist.atoms()) {
    for (const Atom& a : *atoms)
      if (a.prob > 0.0 && !a.matrix.has_positive_diagonal()) return false;
    return true;
  }
  return dist.as_generated()->generator->positive_diagonal_support();
}

struct Draws {
  std::vector<Matrix> samples;
  bool positive_diagonal = true;
};

Draws draw_samples(const MatrixDistribution& dist, std::uint64_t count, std::uint64_t seed) {
  Rng rng = RngPolicy{seed}.stream(StreamDomain::expectation, 0);
  Draws d;
  d.samples.reserve(count);
  for (std::uint64_t k = 0; k < count; ++k) {
    StochasticMatrix a = dist.sample(rng);
    d.positive_diagonal = d.positive_diagonal && a.has_positive_diagonal();
    d.samples.push_back(a.matrix());
  }
  return d;
}

ExpectedMatrix sample_mean(const std::vector<Matrix>& samples, std::size_t n) {
  const double count = static_cast<double>(samples.size());
  ExpectedMatrix e;
  e.matrix = Matrix(n, n);
  for (const Matrix& s : samples) e.matrix += s;
  e.matrix *= 1.0 / count;
  // Two-pass variance, entrywise.
  Matrix var(n, n);
  for (const Matrix& s : samples) {
    auto ds = s.data();
    auto dm = e.matrix.data();
    auto dv = var.data();
    for (std::size_t k = 0; k < dv.size(); ++k) dv[k] += (ds[k] - dm[k]) * (ds[k] - dm[k]);
  }
  double max_std = 0.0;
  for (double v : var.data()) max_std = std::max(max_std, std::sqrt(v / std::max(count - 1.0, 1.0)));
  e.exact = false;
  e.sample_count = samples.size();
  e.entry_standard_error = max_std / std::sqrt(count);
  return e;
}

double lambda2_of(const Matrix& mean) { return second_eigenvalue_modulus(validate_matrix(mean)); }

double bootstrap_std(const std::vector<Matrix>& samples, std::size_t n, std::uint64_t resamples,
                     std::uint64_t seed) {
  if (resamples < 2) return 0.0;
  const RngPolicy policy{seed};
  const std::uint64_t m = samples.size();
  std::vector<double> values;
  values.reserve(resamples);
  for (std::uint64_t b = 0; b < resamples; ++b) {
    Rng rng = policy.stream(StreamDomain::bootstrap, b);
    Matrix mean(n, n);
    for (std::uint64_t k = 0; k < m; ++k) mean += samples[uniform_index(rng, m)];
    mean *= 1.0 / static_cast<double>(m);
    values.push_back(lambda2_of(mean));
  }
  double avg = 0.0;
  for (double v : values) avg += v;
  avg /= static_cast<double>(values.size());
  double ss = 0.0;
  for (double v : values) ss += (v - avg) * (v - avg);
  return std::sqrt(ss / static_cast<double>(values.size() - 1));
}

void check_mc_budget(std::uint64_t mc_samples) {
  if (mc_samples < kMinMonteCarloSamples) {
    std::ostringstream msg;
    msg << "Monte Carlo expectation needs at least " << kMinMonteCarloSamples << " samples, got " << mc_samples;
    throw PreconditionError(msg.str());
  }
}

// Law of [[alpha A, beta B], [I, 0]] with A, B independent.
class SecondOrderLift final : public Generator {
 public:
  SecondOrderLift(double alpha, double beta, MatrixDistribution a, MatrixDistribution b)
      : alpha_(alpha), beta_(beta), a_(std::move(a)), b_(std::move(b)) {
    params_ = {{"alpha", alpha_}, {"beta", beta_}, {"n", static_cast<double>(2 * a_.n())}};
  }

  std::string_view name() const override { return "second_order_lift"; }
  std::size_t n() const override { return 2 * a_.n(); }
  const ParamMap& params() const override { return params_; }
  bool registered() const override { return false; }

  StochasticMatrix sample(Rng& rng) const override {
    StochasticMatrix a = a_.sample(rng);
    StochasticMatrix b = b_.sample(rng);
    return lift_block(alpha_, beta_, a, b);
  }

  std::optional<Matrix> exact_mean() const override {
    auto ma = exact_mean_of(a_);
    auto mb = exact_mean_of(b_);
    if (!ma || !mb) return std::nullopt;
    return lift_raw(*ma, *mb);
  }

  // Rows n..2n-1 copy the previous state, so their diagonal is zero.
  std::optional<bool> positive_diagonal_support() const override { return false; }

 private:
  Matrix lift_raw(const Matrix& a, const Matrix& b) const {
    const std::size_t n = a_.n();
    Matrix c(2 * n, 2 * n);
    for (std::size_t i = 0; i < n; ++i) {
      for (std::size_t j = 0; j < n; ++j) {
        c(i, j) = alpha_ * a(i, j);
        c(i, n + j) = beta_ * b(i, j);
      }
      c(n + i, i) = 1.0;
    }
    return c;
  }

  double alpha_;
  double beta_;
  MatrixDistribution a_;
  MatrixDistribution b_;
  ParamMap params_;
};

void check_lift_weights(double alpha, double beta) {
  if (!std::isfinite(alpha) || !std::isfinite(beta) || alpha < 0.0 || beta < 0.0 ||
      std::abs(alpha + beta - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg.precision(17);
    msg << "lift weights must be non-negative and sum to 1, got alpha=" << alpha << ", beta=" << beta;
    throw ConfigError(msg.str());
  }
}

}  // namespace

ExpectedMatrix expected_matrix(const MatrixDistribution& dist, std::uint64_t mc_samples, std::uint64_t seed) {
  if (auto exact = exact_mean_of(dist)) {
    ExpectedMatrix e;
    e.matrix = std::move(*exact);
    e.exact = true;
    return e;
  }
  check_mc_budget(mc_samples);
  return sample_mean(draw_samples(dist, mc_samples, seed).samples, dist.n());
}

ConsensusVerdict random_verdict(const MatrixDistribution& dist, const VerdictOptions& opts) {
  if (!(opts.tol >= 0.0)) throw PreconditionError("random_verdict: tol must be non-negative");
  ConsensusVerdict v;
  if (auto exact = exact_mean_of(dist)) {
    v.lambda2_modulus = lambda2_of(*exact);
    v.uncertainty_halfwidth = 0.0;
    if (auto pd = known_positive_diagonal(dist)) {
      v.positive_diagonal_support = *pd;
    } else {
      check_mc_budget(opts.mc_samples);
      v.positive_diagonal_support = draw_samples(dist, opts.mc_samples, opts.seed).positive_diagonal;
    }
  } else {
    check_mc_budget(opts.mc_samples);
    const Draws draws = draw_samples(dist, opts.mc_samples, opts.seed);
    const ExpectedMatrix e = sample_mean(draws.samples, dist.n());
    v.lambda2_modulus = lambda2_of(e.matrix);
    v.uncertainty_halfwidth = 3.0 * bootstrap_std(draws.samples, dist.n(), opts.bootstrap_resamples, opts.seed);
    v.positive_diagonal_support = draws.positive_diagonal;
  }
  v.decision = classify_lambda2(v.lambda2_modulus, opts.tol + v.uncertainty_halfwidth);
  return v;
}

CrossValidation cross_validate(const MatrixDistribution& dist, std::span<const double> x0,
                               const SimulationOptions& sim, const VerdictOptions& verdict) {
  CrossValidation cv{random_verdict(dist, verdict), estimate_modes(dist, x0, sim)};
  const ModeReport& m = cv.modes;
  const bool spectral_consensus = cv.verdict.decision == Decision::consensus;

  std::ostringstream note;
  note.precision(6);
  const auto empirical = [&] {
    std::ostringstream s;
    s.precision(6);
    s << "as_fraction=" << m.as_fraction << ", p_exceed_eps(T)=" << m.prob_curve.back()
      << ", lp_mean(T)=" << m.lp_curve.back() << " over " << m.paths << " paths, T=" << m.horizon
      << ", eps=" << m.eps;
    return s.str();
  };
  if (spectral_consensus && !m.all_converged()) {
    note << "spectral decision is consensus (lambda2_modulus=" << cv.verdict.lambda2_modulus
         << ") but simulation did not converge in every mode: " << empirical();
  } else if (!spectral_consensus && m.all_converged()) {
    note << "spectral decision is " << to_string(cv.verdict.decision)
         << " (lambda2_modulus=" << cv.verdict.lambda2_modulus
         << ") but simulation converged in every mode: " << empirical();
  } else if (!m.agreement()) {
    note << "convergence modes disagree among themselves: " << empirical();
  }
  if (!note.str().empty()) cv.verdict.discrepancy = note.str();
  return cv;
}

StochasticMatrix lift_block(double alpha, double beta, const StochasticMatrix& a, const StochasticMatrix& b) {
  check_lift_weights(alpha, beta);
  if (a.n() != b.n()) throw ConfigError("lift: A and B have different dimensions");
  const std::size_t n = a.n();
  Matrix c(2 * n, 2 * n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      c(i, j) = alpha * a(i, j);
      c(i, n + j) = beta * b(i, j);
    }
    c(n + i, i) = 1.0;
  }
  return validate_matrix(std::move(c));
}

MatrixDistribution lift_second_order(double alpha, double beta, const MatrixDistribution& dist_a,
                                     const MatrixDistribution& dist_b) {
  check_lift_weights(alpha, beta);
  if (dist_a.n() != dist_b.n()) {
    std::ostringstream msg;
    msg << "lift: dimension mismatch (" << dist_a.n() << " vs " << dist_b.n() << ")";
    throw ConfigError(msg.str());
  }
  if (dist_a.as_dirac() && dist_b.as_dirac())
    return MatrixDistribution::dirac(lift_block(alpha, beta, dist_a.as_dirac()->matrix, dist_b.as_dirac()->matrix));

  auto atoms_a = dist_a.atoms();
  auto atoms_b = dist_b.atoms();
  if (atoms_a && atoms_b) {
    std::vector<Atom> product;
    product.reserve(atoms_a->size() * atoms_b->size());
    for (const Atom& a : *atoms_a)
      for (const Atom& b : *atoms_b) product.push_back(Atom{a.prob * b.prob, lift_block(alpha, beta, a.matrix, b.matrix)});
    return MatrixDistribution::finite(std::move(product));
  }
  return MatrixDistribution::generated(std::make_shared<SecondOrderLift>(alpha, beta, dist_a, dist_b));
}

NormExpectations expectation_norms(std::span<const Vector> values, std::span<const double> probs) {
  if (values.empty() || values.size() != probs.size())
    throw PreconditionError("expectation_norms: need one probability per value");
  const std::size_t n = values.front().size();
  NormExpectations out;
  Vector mean(n, 0.0);
  for (std::size_t k = 0; k < values.size(); ++k) {
    if (values[k].size() != n) throw PreconditionError("expectation_norms: dimension mismatch");
    out.mean_l1 += probs[k] * norm_l1(values[k]);
    out.mean_inf += probs[k] * norm_inf(values[k]);
    for (std::size_t i = 0; i < n; ++i) mean[i] += probs[k] * values[k][i];
  }
  out.l1_of_mean = norm_l1(mean);
  out.inf_of_mean = norm_inf(mean);
  return out;
}

}  // namespace rnc
