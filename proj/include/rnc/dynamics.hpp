#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "rnc/distribution.hpp"
#include "rnc/matrix.hpp"
#include "rnc/rng.hpp"

namespace rnc {

struct StepDiagnostics {
  std::uint64_t t = 0;
  double diameter = 0.0;
  double disagreement_inf = 0.0;
  double disagreement_l2 = 0.0;
};

/// One simulated path of X(t) = A(t) X(t-1), with diagnostics at t = 0..T.
struct TrajectoryRecord {
  std::uint64_t path_id = 0;
  Vector x0;
  std::vector<StepDiagnostics> series;
  Vector final_state;

  /// Slack used by the monotonicity checks: 1e-12 scaled by max(1, ||x0||_inf).
  double monotone_slack() const;
  bool diameter_nonincreasing() const;
  bool disagreement_nonincreasing() const;
  /// ||pi_perp x||_inf <= diam(x) <= 2 ||pi_perp x||_inf at every t, to tol.
  bool projection_bounds_hold(double tol = 1e-9) const;
};

/// Iterates the recursion for `horizon` steps with a fresh draw per step.
/// Throws PreconditionError if horizon == 0 or x0 has the wrong length.
TrajectoryRecord simulate_path(const MatrixDistribution& dist, std::span<const double> x0,
                               std::uint64_t horizon, Rng& rng, std::uint64_t path_id = 0);

struct ModeThresholds {
  double as_fraction_min = 0.99;
  double prob_exceed_max = 0.01;
};

struct SimulationOptions {
  std::uint64_t paths = 200;
  std::uint64_t horizon = 300;
  double eps = 1e-3;
  double p = 1.0;
  std::uint64_t seed = 0;
  /// Worker threads; 0 means hardware concurrency. Results do not depend on it.
  unsigned threads = 0;
  ModeThresholds thresholds{};
};

enum class ModeStatus { converged, not_converged };

/// Empirical estimators of the three convergence modes, driven by diameter.
struct ModeReport {
  double eps = 0.0;
  double p = 1.0;
  std::uint64_t horizon = 0;
  std::uint64_t paths = 0;
  ModeThresholds thresholds{};

  double as_fraction = 0.0;          // fraction with diameter(T) <= eps
  std::vector<double> prob_curve;    // per t: fraction with diameter(t) > eps
  std::vector<double> lp_curve;      // per t: mean diameter(t)^p
  std::vector<double> mean_diameter; // per t
  std::vector<double> max_diameter;  // per t

  ModeStatus almost_sure = ModeStatus::not_converged;
  ModeStatus in_probability = ModeStatus::not_converged;
  ModeStatus in_lp = ModeStatus::not_converged;

  bool all_converged() const;
  bool none_converged() const;
  /// The three classifications coincide.
  bool agreement() const { return all_converged() || none_converged(); }
};

/// Runs `opts.paths` independent paths, path k on RngPolicy{seed}.path_stream(k).
/// Output order is by path index regardless of thread count.
std::vector<TrajectoryRecord> simulate_paths(const MatrixDistribution& dist,
                                             std::span<const double> x0,
                                             const SimulationOptions& opts);

/// Aggregates simulated paths into a ModeReport. Sums run in path order so
/// the result is bit-identical for any degree of parallelism.
ModeReport summarize_modes(std::span<const TrajectoryRecord> paths, double eps, double p,
                           const ModeThresholds& thresholds = {});

/// Throws PreconditionError unless paths >= 1, eps > 0, p >= 1.
ModeReport estimate_modes(const MatrixDistribution& dist, std::span<const double> x0,
                          const SimulationOptions& opts);

/// Runs x0 and x0 + c 1 through the same matrix draws and compares their
/// diameter series to 1e-10 (scaled by the state magnitude).
/// Throws PreconditionError when seed != shifted_seed.
bool shift_invariance_check(const MatrixDistribution& dist, std::span<const double> x0, double c,
                            std::uint64_t horizon, std::uint64_t seed, std::uint64_t shifted_seed);
bool shift_invariance_check(const MatrixDistribution& dist, std::span<const double> x0, double c,
                            std::uint64_t horizon, std::uint64_t seed);

/// Empirical almost-sure consensus fraction; 0-1 behaviour expected.
double zero_one_probe(const MatrixDistribution& dist, std::span<const double> x0,
                      const SimulationOptions& opts);

}  // namespace rnc
