#include "rnc/selfcheck.hpp"

#include <cmath>
#include <functional>
#include <sstream>

#include "rnc/analysis.hpp"
#include "rnc/config.hpp"
#include "rnc/dynamics.hpp"
#include "rnc/errors.hpp"
#include "rnc/projection.hpp"
#include "rnc/random_matrices.hpp"
#include "rnc/spectral.hpp"

namespace rnc {
namespace {

class Battery {
 public:
  Battery(std::string name, const SelfcheckOptions& opts, std::uint64_t index)
      : opts_(opts), index_(index) {
    result_.name = std::move(name);
  }

  /// Runs `check(n, rng)` for every n in [n_min, n_max] and every trial.
  /// The check returns an empty string on success, else a failure note.
  void sweep(std::size_t n_min, const std::function<std::string(std::size_t, Rng&)>& check) {
    for (std::size_t n = n_min; n <= opts_.n_max; ++n) {
      for (std::uint64_t trial = 0; trial < opts_.trials; ++trial) {
        Rng rng = RngPolicy{opts_.seed}.stream(StreamDomain::battery, (index_ << 40) | (n << 24) | trial);
        std::string note;
        try {
          note = check(n, rng);
        } catch (const std::exception& e) {
          note = std::string("exception: ") + e.what();
        }
        record(note, n, trial);
      }
    }
  }

  PropertyResult finish() { return std::move(result_); }

 private:
  void record(const std::string& note, std::size_t n, std::uint64_t trial) {
    ++result_.checks;
    if (note.empty()) return;
    ++result_.failures;
    if (result_.first_failure.empty()) {
      std::ostringstream msg;
      msg << note << " (n=" << n << ", trial=" << trial << ", reproduce with --seed " << opts_.seed << ")";
      result_.first_failure = msg.str();
    }
  }

  const SelfcheckOptions& opts_;
  std::uint64_t index_;
  PropertyResult result_;
};

std::string fail_if(bool bad, const std::string& what) { return bad ? what : std::string(); }

std::string describe(const char* what, double value, double bound) {
  std::ostringstream msg;
  msg.precision(6);
  msg << what << ": " << value << " exceeds " << bound;
  return msg.str();
}

Vector random_vector(std::size_t n, Rng& rng, double scale = 1.0) {
  Vector x(n);
  for (double& v : x) v = scale * (2.0 * uniform01(rng) - 1.0);
  return x;
}

MatrixDistribution injected(const MatrixDistribution& dist, InjectedFault fault, Rng& rng, Matrix& raw) {
  raw = dist.sample(rng).matrix();
  if (fault == InjectedFault::row_sum) raw(0, 0) += 1e-6;
  return MatrixDistribution::dirac(validate_matrix(raw));
}

}  // namespace

std::vector<PropertyResult> run_selfcheck(const SelfcheckOptions& opts) {
  if (opts.trials == 0) throw PreconditionError("selfcheck: --trials must be positive");
  if (opts.n_max < 2) throw PreconditionError("selfcheck: --n-max must be at least 2");
  std::vector<PropertyResult> results;
  std::uint64_t index = 0;

  {
    Battery b("matrix_validation", opts, index++);
    b.sweep(2, [&](std::size_t n, Rng& rng) -> std::string {
      const double nd = static_cast<double>(n);
      const MatrixDistribution gens[] = {
          MatrixDistribution::generator("pairwise_gossip", {{"n", nd}}),
          MatrixDistribution::generator("dirichlet_rows", {{"n", nd}, {"alpha", 0.5}}),
          MatrixDistribution::generator("lazy_permutation", {{"n", nd}, {"hold_prob", 0.3}}),
      };
      Matrix raw;
      for (const auto& g : gens) {
        const MatrixDistribution d = injected(g, opts.fault, rng, raw);
        const Config back = parse_config(dump_config(d));
        const double diff = max_abs_diff(back.distribution.as_dirac()->matrix.matrix(), raw);
        if (diff > 1e-15) return describe("serialization round trip", diff, 1e-15);
      }
      return {};
    });
    results.push_back(b.finish());
  }

  {
    Battery b("projection_algebra", opts, index++);
    b.sweep(2, [](std::size_t n, Rng& rng) -> std::string {
      const ProjectionPair p = make_projections(n);
      const Matrix id = Matrix::identity(n);
      double err = max_abs_diff(p.pi + p.pi_perp, id);
      err = std::max(err, max_abs_diff(p.pi * p.pi, p.pi));
      err = std::max(err, max_abs_diff(p.pi_perp * p.pi_perp, p.pi_perp));
      err = std::max(err, (p.pi * p.pi_perp).max_abs());
      const Matrix a = random_stochastic(n, rng).matrix();
      const Matrix pa = p.pi_perp * a;
      err = std::max(err, max_abs_diff(pa, pa * p.pi_perp));
      return err > 1e-12 ? describe("projection identity residual", err, 1e-12) : std::string();
    });
    results.push_back(b.finish());
  }

  {
    Battery b("projection_bounds", opts, index++);
    b.sweep(2, [](std::size_t n, Rng& rng) -> std::string {
      const Vector x = random_vector(n, rng, 10.0);
      const double dis = norm_inf(disagreement(x));
      const double diam = diameter(x);
      if (dis > diam + 1e-9 || diam > 2.0 * dis + 1e-9) return "diameter/disagreement sandwich violated";
      // Over R0 the inf-norm distance is minimized by the midrange, at diam/2;
      // the mean-based projection can only be farther.
      if (dis < 0.5 * diam - 1e-9) return "disagreement below half the diameter";
      const double c = 20.0 * uniform01(rng) - 10.0;
      double dist_to_c = 0.0;
      for (double v : x) dist_to_c = std::max(dist_to_c, std::abs(v - c));
      if (dist_to_c < 0.5 * diam - 1e-9) return "a consensus vector is closer than diam/2";
      Vector shifted = x;
      for (double& v : shifted) v += c;
      const Vector d0 = disagreement(x);
      const Vector d1 = disagreement(shifted);
      double err = 0.0;
      for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(d0[i] - d1[i]));
      return err > 1e-12 * std::max(1.0, std::abs(c)) ? describe("shift changed disagreement", err, 1e-12) : std::string();
    });
    results.push_back(b.finish());
  }

  {
    Battery b("spectral_identity", opts, index++);
    b.sweep(2, [](std::size_t n, Rng& rng) -> std::string {
      const StochasticMatrix a = random_stochastic(n, rng);
      const double lambda2 = second_eigenvalue_modulus(a);
      const double rho = spectral_radius(make_projections(n).pi_perp * a.matrix());
      const double err = std::abs(rho - lambda2);
      return err > 1e-7 ? describe("|rho(pi_perp A) - |lambda2(A)||", err, 1e-7) : std::string();
    });
    results.push_back(b.finish());
  }

  {
    Battery b("stability_radius", opts, index++);
    b.sweep(2, [](std::size_t n, Rng& rng) -> std::string {
      Matrix m = random_gaussian(n, rng);
      const double rho = spectral_radius(m);
      if (rho == 0.0) return {};
      const bool stable = uniform01(rng) < 0.5;
      const double target = stable ? 0.3 + 0.55 * uniform01(rng) : 1.15 + 0.35 * uniform01(rng);
      m *= target / rho;
      const double rescaled = spectral_radius(m);
      const double growth = matrix_power(m, 200).norm_inf();
      if (rescaled < 0.9 && growth >= 1e-6) return describe("||M^200|| with rho < 0.9", growth, 1e-6);
      if (rescaled > 1.1 && growth <= 1e-3) return "||M^200|| <= 1e-3 although rho > 1.1";
      return {};
    });
    results.push_back(b.finish());
  }

  {
    Battery b("deterministic_chain", opts, index++);
    b.sweep(2, [](std::size_t n, Rng& rng) -> std::string {
      const StochasticMatrix a = random_stochastic(n, rng);
      const Matrix pa = make_projections(n).pi_perp * a.matrix();
      Vector x = random_vector(n, rng);
      const Vector x0 = x;
      Matrix power = Matrix::identity(n);
      for (unsigned t = 1; t <= 20; ++t) {
        x = a.matrix() * x;
        power = pa * power;
        const Vector direct = disagreement(x);
        const Vector via_power = power * x0;
        double err = 0.0;
        for (std::size_t i = 0; i < n; ++i) err = std::max(err, std::abs(direct[i] - via_power[i]));
        if (err > 1e-9 * std::max(1.0, norm_inf(x0))) return describe("pi_perp X(t) vs (pi_perp A)^t x", err, 1e-9);
      }
      return {};
    });
    results.push_back(b.finish());
  }

  {
    Battery b("infinity_norm_bound", opts, index++);
    b.sweep(2, [](std::size_t n, Rng& rng) -> std::string {
      const StochasticMatrix a = random_stochastic(n, rng);
      Vector x = random_vector(n, rng, 5.0);
      const double bound = norm_inf(x);
      const auto steps = 1 + uniform_index(rng, 50);
      for (std::uint64_t t = 0; t < steps; ++t) x = a.matrix() * x;
      return norm_inf(x) > bound * (1.0 + 1e-12) ? "||A^t x||_inf exceeds ||x||_inf" : std::string();
    });
    results.push_back(b.finish());
  }

  {
    Battery b("trajectory_monotonicity", opts, index++);
    b.sweep(2, [](std::size_t n, Rng& rng) -> std::string {
      const MatrixDistribution general = random_finite(n, 3, StochasticFamily::sparse, rng);
      const MatrixDistribution doubly = MatrixDistribution::generator("pairwise_gossip", {{"n", static_cast<double>(n)}});
      const Vector x0 = random_vector(n, rng);
      const TrajectoryRecord g = simulate_path(general, x0, 30, rng);
      const TrajectoryRecord d = simulate_path(doubly, x0, 30, rng);
      if (!g.diameter_nonincreasing() || !d.diameter_nonincreasing()) return "diameter increased";
      if (!d.disagreement_nonincreasing()) return "disagreement increased under a doubly stochastic law";
      if (!g.projection_bounds_hold() || !d.projection_bounds_hold()) return "diameter/disagreement sandwich violated";
      return {};
    });
    results.push_back(b.finish());
  }

  {
    Battery b("second_order_lift", opts, index++);
    b.sweep(2, [](std::size_t n, Rng& rng) -> std::string {
      const double alpha = uniform01(rng);
      const double beta = 1.0 - alpha;
      const MatrixDistribution da = random_finite(n, 2, StochasticFamily::dense, rng);
      const MatrixDistribution db = random_finite(n, 2, StochasticFamily::zero_diagonal, rng);
      const MatrixDistribution lifted = lift_second_order(alpha, beta, da, db);
      const auto atoms = lifted.atoms();
      for (const Atom& atom : *atoms) validate_matrix(atom.matrix.matrix());

      Vector prev = random_vector(n, rng);
      Vector cur = random_vector(n, rng);
      Vector y(cur);
      y.insert(y.end(), prev.begin(), prev.end());
      for (int t = 0; t < 20; ++t) {
        const StochasticMatrix a = da.sample(rng);
        const StochasticMatrix bm = db.sample(rng);
        const Vector ax = a.matrix() * cur;
        const Vector bx = bm.matrix() * prev;
        Vector next(n);
        for (std::size_t i = 0; i < n; ++i) next[i] = alpha * ax[i] + beta * bx[i];
        prev = cur;
        cur = next;
        y = lift_block(alpha, beta, a, bm).matrix() * y;
        for (std::size_t i = 0; i < n; ++i)
          if (std::abs(y[i] - cur[i]) > 1e-10) return describe("lifted vs direct recursion", std::abs(y[i] - cur[i]), 1e-10);
      }
      return {};
    });
    results.push_back(b.finish());
  }

  {
    Battery b("dirac_verdict_consistency", opts, index++);
    b.sweep(2, [](std::size_t n, Rng& rng) -> std::string {
      const StochasticMatrix a = random_stochastic(n, rng);
      const Decision det = deterministic_verdict(a);
      const Decision rnd = random_verdict(MatrixDistribution::dirac(a)).decision;
      return fail_if(det != rnd, "random verdict on a point mass differs from the deterministic verdict");
    });
    results.push_back(b.finish());
  }

  return results;
}

}  // namespace rnc
