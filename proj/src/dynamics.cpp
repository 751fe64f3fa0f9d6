#include "rnc/dynamics.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <mutex>
#include <optional>
#include <thread>

#include "rnc/errors.hpp"
#include "rnc/projection.hpp"

namespace rnc {
namespace {

// Same draw sequence as dist.sample(rng), without copying explicit atoms.
const StochasticMatrix& draw(const MatrixDistribution& dist, Rng& rng,
                             std::optional<StochasticMatrix>& scratch) {
  if (const auto* d = dist.as_dirac()) return d->matrix;
  if (dist.as_finite()) return dist.select(uniform01(rng));
  scratch.emplace(dist.sample(rng));
  return *scratch;
}

StepDiagnostics diagnose(std::uint64_t t, std::span<const double> x) {
  const Vector dis = disagreement(x);
  return {t, diameter(x), norm_inf(dis), norm_l2(dis)};
}

unsigned resolve_threads(unsigned requested, std::uint64_t work) {
  unsigned t = requested != 0 ? requested : std::max(1u, std::thread::hardware_concurrency());
  return static_cast<unsigned>(std::min<std::uint64_t>(t, std::max<std::uint64_t>(work, 1)));
}

}  // namespace

double TrajectoryRecord::monotone_slack() const { return 1e-12 * std::max(1.0, norm_inf(x0)); }

bool TrajectoryRecord::diameter_nonincreasing() const {
  const double slack = monotone_slack();
  for (std::size_t k = 1; k < series.size(); ++k)
    if (series[k].diameter > series[k - 1].diameter + slack) return false;
  return true;
}

bool TrajectoryRecord::disagreement_nonincreasing() const {
  const double slack = monotone_slack();
  for (std::size_t k = 1; k < series.size(); ++k)
    if (series[k].disagreement_inf > series[k - 1].disagreement_inf + slack) return false;
  return true;
}

bool TrajectoryRecord::projection_bounds_hold(double tol) const {
  return std::all_of(series.begin(), series.end(), [tol](const StepDiagnostics& s) {
    return s.disagreement_inf <= s.diameter + tol && s.diameter <= 2.0 * s.disagreement_inf + tol;
  });
}

TrajectoryRecord simulate_path(const MatrixDistribution& dist, std::span<const double> x0,
                               std::uint64_t horizon, Rng& rng, std::uint64_t path_id) {
  if (horizon == 0) throw PreconditionError("simulate_path: horizon must be at least 1");
  if (x0.size() != dist.n()) throw PreconditionError("simulate_path: x0 dimension does not match the distribution");

  TrajectoryRecord rec;
  rec.path_id = path_id;
  rec.x0.assign(x0.begin(), x0.end());
  rec.series.reserve(horizon + 1);
  rec.series.push_back(diagnose(0, x0));

  Vector x(x0.begin(), x0.end());
  Vector next(x.size());
  std::optional<StochasticMatrix> scratch;
  for (std::uint64_t t = 1; t <= horizon; ++t) {
    multiply_into(draw(dist, rng, scratch).matrix(), x, next);
    std::swap(x, next);
    rec.series.push_back(diagnose(t, x));
  }
  rec.final_state = std::move(x);
  return rec;
}

std::vector<TrajectoryRecord> simulate_paths(const MatrixDistribution& dist, std::span<const double> x0,
                                             const SimulationOptions& opts) {
  if (opts.paths == 0) throw PreconditionError("simulate_paths: paths must be at least 1");
  if (opts.horizon == 0) throw PreconditionError("simulate_paths: horizon must be at least 1");
  if (x0.size() != dist.n()) throw PreconditionError("simulate_paths: x0 dimension does not match the distribution");

  const RngPolicy policy{opts.seed};
  std::vector<std::optional<TrajectoryRecord>> slots(opts.paths);
  std::atomic<std::uint64_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;

  auto worker = [&] {
    for (std::uint64_t k = next.fetch_add(1); k < opts.paths; k = next.fetch_add(1)) {
      try {
        Rng rng = policy.path_stream(k);
        slots[k] = simulate_path(dist, x0, opts.horizon, rng, k);
      } catch (...) {
        std::lock_guard lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };

  const unsigned threads = resolve_threads(opts.threads, opts.paths);
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(threads);
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<TrajectoryRecord> out;
  out.reserve(opts.paths);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

bool ModeReport::all_converged() const {
  return almost_sure == ModeStatus::converged && in_probability == ModeStatus::converged &&
         in_lp == ModeStatus::converged;
}

bool ModeReport::none_converged() const {
  return almost_sure == ModeStatus::not_converged && in_probability == ModeStatus::not_converged &&
         in_lp == ModeStatus::not_converged;
}

ModeReport summarize_modes(std::span<const TrajectoryRecord> paths, double eps, double p,
                           const ModeThresholds& thresholds) {
  if (paths.empty()) throw PreconditionError("summarize_modes: no paths");
  if (!(eps > 0.0)) throw PreconditionError("summarize_modes: eps must be positive");
  if (!(p >= 1.0)) throw PreconditionError("summarize_modes: p must be at least 1");
  const std::size_t steps = paths.front().series.size();
  for (const auto& path : paths)
    if (path.series.size() != steps) throw PreconditionError("summarize_modes: paths have different horizons");

  ModeReport rep;
  rep.eps = eps;
  rep.p = p;
  rep.horizon = steps - 1;
  rep.paths = paths.size();
  rep.thresholds = thresholds;
  rep.prob_curve.assign(steps, 0.0);
  rep.lp_curve.assign(steps, 0.0);
  rep.mean_diameter.assign(steps, 0.0);
  rep.max_diameter.assign(steps, 0.0);

  for (const auto& path : paths) {
    for (std::size_t t = 0; t < steps; ++t) {
      const double d = path.series[t].diameter;
      if (d > eps) rep.prob_curve[t] += 1.0;
      rep.lp_curve[t] += (p == 1.0) ? d : std::pow(d, p);
      rep.mean_diameter[t] += d;
      rep.max_diameter[t] = std::max(rep.max_diameter[t], d);
    }
  }
  const double count = static_cast<double>(paths.size());
  for (std::size_t t = 0; t < steps; ++t) {
    rep.prob_curve[t] /= count;
    rep.lp_curve[t] /= count;
    rep.mean_diameter[t] /= count;
  }
  std::size_t settled = 0;
  for (const auto& path : paths)
    if (path.series.back().diameter <= eps) ++settled;
  rep.as_fraction = static_cast<double>(settled) / count;

  auto status = [](bool ok) { return ok ? ModeStatus::converged : ModeStatus::not_converged; };
  rep.almost_sure = status(rep.as_fraction >= thresholds.as_fraction_min);
  rep.in_probability = status(rep.prob_curve.back() <= thresholds.prob_exceed_max);
  rep.in_lp = status(rep.lp_curve.back() <= std::pow(eps, p));
  return rep;
}

ModeReport estimate_modes(const MatrixDistribution& dist, std::span<const double> x0,
                          const SimulationOptions& opts) {
  if (!(opts.eps > 0.0)) throw PreconditionError("estimate_modes: eps must be positive");
  if (!(opts.p >= 1.0)) throw PreconditionError("estimate_modes: p must be at least 1");
  const auto paths = simulate_paths(dist, x0, opts);
  return summarize_modes(paths, opts.eps, opts.p, opts.thresholds);
}

bool shift_invariance_check(const MatrixDistribution& dist, std::span<const double> x0, double c,
                            std::uint64_t horizon, std::uint64_t seed, std::uint64_t shifted_seed) {
  if (seed != shifted_seed)
    throw PreconditionError("shift_invariance_check: both runs must share one seed so the matrix draws coincide");
  Vector shifted(x0.begin(), x0.end());
  for (double& v : shifted) v += c;

  const RngPolicy policy{seed};
  Rng rng_a = policy.path_stream(0);
  Rng rng_b = policy.path_stream(0);
  const TrajectoryRecord a = simulate_path(dist, x0, horizon, rng_a);
  const TrajectoryRecord b = simulate_path(dist, shifted, horizon, rng_b);

  const double tol = 1e-10 * std::max({1.0, norm_inf(x0), norm_inf(shifted)});
  for (std::size_t t = 0; t < a.series.size(); ++t)
    if (std::abs(a.series[t].diameter - b.series[t].diameter) > tol) return false;
  return true;
}

bool shift_invariance_check(const MatrixDistribution& dist, std::span<const double> x0, double c,
                            std::uint64_t horizon, std::uint64_t seed) {
  return shift_invariance_check(dist, x0, c, horizon, seed, seed);
}

double zero_one_probe(const MatrixDistribution& dist, std::span<const double> x0,
                      const SimulationOptions& opts) {
  return estimate_modes(dist, x0, opts).as_fraction;
}

}  // namespace rnc
