#include "rnc/cli.hpp"

#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "rnc/analysis.hpp"
#include "rnc/config.hpp"
#include "rnc/errors.hpp"
#include "rnc/manifest.hpp"
#include "rnc/projection.hpp"
#include "rnc/report.hpp"
#include "rnc/selfcheck.hpp"
#include "rnc/spectral.hpp"

namespace rnc {
namespace {

namespace fs = std::filesystem;
using nlohmann::json;

struct LoadedConfig {
  Config config;
  std::string bytes;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ConfigError("cannot read config file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

LoadedConfig load(const std::string& path) {
  if (path.empty()) throw ConfigError("--config is required");
  std::string bytes = read_file(path);
  Config cfg = parse_config(bytes, path);
  return {std::move(cfg), std::move(bytes)};
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write '" + path.string() + "'");
  f << text;
  f.flush();
  if (!f) throw IoError("failed writing '" + path.string() + "'");
}

fs::path prepare_out_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw IoError("cannot create output directory '" + dir + "'");
  return fs::path(dir);
}

// Options shared by every subcommand; flags win over the config's simulation block.
struct GlobalFlags {
  std::string config;
  std::optional<std::uint64_t> seed;
  std::string out;
  std::string format = "csv";
  unsigned threads = 0;
};

struct SimFlags {
  std::optional<std::uint64_t> paths;
  std::optional<std::uint64_t> horizon;
  std::optional<double> eps;
  std::optional<std::string> x0;
  double p = 1.0;
};

struct VerdictFlags {
  std::uint64_t mc_samples = VerdictOptions{}.mc_samples;
  std::uint64_t bootstrap = VerdictOptions{}.bootstrap_resamples;
  double tol = kMarginalTolerance;
};

std::uint64_t resolve_seed(const GlobalFlags& g, const SimulationDefaults& d) {
  if (g.seed) return *g.seed;
  return d.seed.value_or(0);
}

SimulationOptions resolve_sim(const GlobalFlags& g, const SimFlags& s, const SimulationDefaults& d) {
  SimulationOptions o;
  o.paths = s.paths ? *s.paths : d.paths.value_or(o.paths);
  o.horizon = s.horizon ? *s.horizon : d.horizon.value_or(o.horizon);
  o.eps = s.eps ? *s.eps : d.eps.value_or(o.eps);
  o.p = s.p;
  o.seed = resolve_seed(g, d);
  o.threads = g.threads;
  if (o.paths == 0) throw ConfigError("paths must be at least 1");
  if (o.horizon == 0) throw ConfigError("horizon must be at least 1");
  if (!(o.eps > 0.0)) throw ConfigError("eps must be positive");
  if (!(o.p >= 1.0)) throw ConfigError("p must be at least 1");
  return o;
}

InitialState resolve_x0(const SimFlags& s, const SimulationDefaults& d) {
  if (s.x0) return parse_initial_state(*s.x0);
  return d.x0.value_or(InitialState::uniform());
}

VerdictOptions resolve_verdict(const VerdictFlags& v, std::uint64_t seed) {
  VerdictOptions o;
  o.mc_samples = v.mc_samples;
  o.bootstrap_resamples = v.bootstrap;
  o.tol = v.tol;
  o.seed = seed;
  return o;
}

void emit_manifest(const fs::path& dir, const RunManifest& m) { write_text(dir / "manifest.json", m.to_json().dump(2) + "\n"); }

int cmd_verdict(const GlobalFlags& g, const VerdictFlags& vf, std::ostream& out) {
  const LoadedConfig lc = load(g.config);
  const VerdictOptions vo = resolve_verdict(vf, resolve_seed(g, lc.config.simulation));
  const ConsensusVerdict v = random_verdict(lc.config.distribution, vo);
  const std::string text = verdict_json(v).dump(2) + "\n";
  out << text;
  if (!g.out.empty()) {
    const fs::path dir = prepare_out_dir(g.out);
    write_text(dir / "verdict.json", text);
    RunManifest m;
    m.command = "verdict";
    m.seed = vo.seed;
    m.mc_samples = vo.mc_samples;
    m.config_digest = sha256_hex(lc.bytes);
    emit_manifest(dir, m);
  }
  return kExitOk;
}

int cmd_simulate(const GlobalFlags& g, const SimFlags& sf, std::ostream& out) {
  const LoadedConfig lc = load(g.config);
  if (g.out.empty()) throw ConfigError("simulate requires --out DIR");
  if (g.format != "csv" && g.format != "json") throw ConfigError("--format must be csv or json");
  const SimulationOptions so = resolve_sim(g, sf, lc.config.simulation);
  const InitialState x0_state = resolve_x0(sf, lc.config.simulation);
  const Vector x0 = x0_state.resolve(lc.config.distribution.n(), RngPolicy{so.seed});

  const auto paths = simulate_paths(lc.config.distribution, x0, so);
  const ModeReport report = summarize_modes(paths, so.eps, so.p, so.thresholds);

  const fs::path dir = prepare_out_dir(g.out);
  std::ostringstream per_path;
  std::ostringstream aggregate;
  if (g.format == "csv") {
    write_paths_csv(per_path, paths);
    write_aggregate_csv(aggregate, report);
  } else {
    per_path << paths_json(paths).dump(2) << "\n";
    aggregate << aggregate_json(report).dump(2) << "\n";
  }
  const std::string ext = g.format == "csv" ? ".csv" : ".json";
  write_text(dir / ("paths" + ext), per_path.str());
  write_text(dir / ("aggregate" + ext), aggregate.str());

  RunManifest m;
  m.command = "simulate";
  m.seed = so.seed;
  m.paths = so.paths;
  m.horizon = so.horizon;
  m.eps = so.eps;
  m.p = so.p;
  m.x0 = x0_state.describe();
  m.config_digest = sha256_hex(lc.bytes);
  emit_manifest(dir, m);

  out << "wrote " << (dir / ("paths" + ext)).string() << ", " << (dir / ("aggregate" + ext)).string() << ", "
      << (dir / "manifest.json").string() << "\n";
  return kExitOk;
}

int cmd_modes(const GlobalFlags& g, const SimFlags& sf, const VerdictFlags& vf, std::ostream& out) {
  const LoadedConfig lc = load(g.config);
  const SimulationOptions so = resolve_sim(g, sf, lc.config.simulation);
  const InitialState x0_state = resolve_x0(sf, lc.config.simulation);
  const Vector x0 = x0_state.resolve(lc.config.distribution.n(), RngPolicy{so.seed});
  const VerdictOptions vo = resolve_verdict(vf, so.seed);

  const CrossValidation cv = cross_validate(lc.config.distribution, x0, so, vo);
  json j = mode_report_json(cv.modes);
  j["cross_validation"] = verdict_json(cv.verdict);
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!g.out.empty()) {
    const fs::path dir = prepare_out_dir(g.out);
    write_text(dir / "modes.json", text);
    RunManifest m;
    m.command = "modes";
    m.seed = so.seed;
    m.paths = so.paths;
    m.horizon = so.horizon;
    m.eps = so.eps;
    m.p = so.p;
    m.mc_samples = vo.mc_samples;
    m.x0 = x0_state.describe();
    m.config_digest = sha256_hex(lc.bytes);
    emit_manifest(dir, m);
  }
  return kExitOk;
}

int cmd_deterministic(const GlobalFlags& g, const std::string& matrix_text, double tol, std::ostream& out) {
  std::optional<StochasticMatrix> a;
  std::string digest_source;
  if (!matrix_text.empty()) {
    json parsed;
    try {
      parsed = json::parse(matrix_text);
    } catch (const json::parse_error& e) {
      throw ConfigError(std::string("--matrix: ") + e.what());
    }
    std::vector<std::vector<double>> rows;
    try {
      rows = parsed.get<std::vector<std::vector<double>>>();
    } catch (const json::exception&) {
      throw ConfigError("--matrix: expected an array of arrays of numbers");
    }
    try {
      a = validate_matrix(Matrix::from_rows(rows));
    } catch (const PreconditionError& e) {
      throw ConfigError(std::string("--matrix: ") + e.what());
    }
    digest_source = matrix_text;
  } else {
    const LoadedConfig lc = load(g.config);
    const auto* d = lc.config.distribution.as_dirac();
    if (!d) throw ConfigError("deterministic needs a dirac config or --matrix");
    a = d->matrix;
    digest_source = lc.bytes;
  }
  const Spectrum spectrum = eigen_spectrum(a->matrix(), "deterministic matrix");
  json j;
  j["lambda2_modulus"] = second_eigenvalue_modulus(*a);
  j["disagreement_spectral_radius"] = spectral_radius(make_projections(a->n()).pi_perp * a->matrix());
  j["decision"] = to_string(deterministic_verdict(*a, tol));
  j["spectrum"] = spectrum_json(spectrum);
  const std::string text = j.dump(2) + "\n";
  out << text;
  if (!g.out.empty()) {
    const fs::path dir = prepare_out_dir(g.out);
    write_text(dir / "deterministic.json", text);
    RunManifest m;
    m.command = "deterministic";
    m.config_digest = sha256_hex(digest_source);
    emit_manifest(dir, m);
  }
  return kExitOk;
}

int cmd_lift(const GlobalFlags& g, const std::string& path_a, const std::string& path_b, double alpha,
             std::ostream& out) {
  const LoadedConfig a = load(path_a);
  const LoadedConfig b = load(path_b);
  const MatrixDistribution lifted = lift_second_order(alpha, 1.0 - alpha, a.config.distribution, b.config.distribution);
  const std::string text = dump_config(lifted);
  out << text;
  if (!g.out.empty()) {
    const fs::path dir = prepare_out_dir(g.out);
    write_text(dir / "lifted.json", text);
    RunManifest m;
    m.command = "lift";
    m.alpha = alpha;
    m.config_digest = sha256_hex(a.bytes + std::string(1, '\0') + b.bytes);
    emit_manifest(dir, m);
  }
  return kExitOk;
}

int cmd_selfcheck(const GlobalFlags& g, const SelfcheckOptions& base, const std::string& fault, std::ostream& out,
                  std::ostream& err) {
  SelfcheckOptions opts = base;
  opts.seed = g.seed.value_or(0);
  if (fault == "row_sum")
    opts.fault = InjectedFault::row_sum;
  else if (!fault.empty() && fault != "none")
    throw ConfigError("unknown fault '" + fault + "'");

  const auto results = run_selfcheck(opts);
  bool ok = true;
  json summary = json::array();
  for (const auto& r : results) {
    out << (r.passed() ? "PASS " : "FAIL ") << r.name << "  checks=" << r.checks << " failures=" << r.failures << "\n";
    if (!r.passed()) {
      ok = false;
      err << "property '" << r.name << "' failed: " << r.first_failure << "\n";
    }
    summary.push_back({{"property", r.name}, {"checks", r.checks}, {"failures", r.failures}, {"first_failure", r.first_failure}});
  }
  if (!g.out.empty()) {
    const fs::path dir = prepare_out_dir(g.out);
    write_text(dir / "selfcheck.json", summary.dump(2) + "\n");
    RunManifest m;
    m.command = "selfcheck";
    m.seed = opts.seed;
    emit_manifest(dir, m);
  }
  out << (ok ? "selfcheck passed\n" : "selfcheck FAILED\n");
  return ok ? kExitOk : kExitProperty;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Consensus analysis of linear networks driven by i.i.d. stochastic matrices", "rnc"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kToolVersion));

  GlobalFlags g;
  app.add_option("--config", g.config, "Config document (JSON)");
  app.add_option("--seed", g.seed, "Master seed (overrides the config)");
  app.add_option("--out", g.out, "Output directory");
  app.add_option("--format", g.format, "csv or json (simulate)")->check(CLI::IsMember({"csv", "json"}));
  app.add_option("--threads", g.threads, "Worker threads, 0 = all cores; outputs do not depend on it");

  SimFlags sim;
  VerdictFlags vf;
  auto add_sim = [&sim](CLI::App* sub) {
    sub->add_option("--paths", sim.paths, "Number of simulated paths");
    sub->add_option("--horizon", sim.horizon, "Simulation horizon T");
    sub->add_option("--eps", sim.eps, "Consensus threshold on the diameter");
    sub->add_option("--x0", sim.x0, "Initial state: uniform01, JSON array, or comma list");
    sub->add_option("--p", sim.p, "Moment order for the L^p mode (>= 1)");
  };
  auto add_verdict = [&vf](CLI::App* sub) {
    sub->add_option("--mc-samples", vf.mc_samples, "Monte Carlo draws for E[A] when no closed form exists");
    sub->add_option("--bootstrap", vf.bootstrap, "Bootstrap resamples for the lambda2 uncertainty");
    sub->add_option("--tol", vf.tol, "Half-width of the marginal band around 1");
  };

  auto* verdict = app.add_subcommand("verdict", "Spectral consensus verdict on E[A(1)]")->fallthrough();
  add_verdict(verdict);

  auto* simulate = app.add_subcommand("simulate", "Simulate paths and write per-path and aggregate series")->fallthrough();
  add_sim(simulate);

  auto* modes = app.add_subcommand("modes", "Estimate the three convergence modes and cross-check the verdict")->fallthrough();
  add_sim(modes);
  add_verdict(modes);

  std::string matrix_text;
  double det_tol = kMarginalTolerance;
  auto* deterministic = app.add_subcommand("deterministic", "Verdict for a single matrix")->fallthrough();
  deterministic->add_option("--matrix", matrix_text, "Matrix as a JSON array of rows (instead of --config)");
  deterministic->add_option("--tol", det_tol, "Half-width of the marginal band around 1");

  std::string lift_a, lift_b;
  double alpha = 0.5;
  auto* lift = app.add_subcommand("lift", "Lift a second-order recursion to a first-order config on 2n")->fallthrough();
  lift->add_option("--config-a", lift_a, "Config for A(t)")->required();
  lift->add_option("--config-b", lift_b, "Config for B(t)")->required();
  lift->add_option("--alpha", alpha, "Weight of A(t); B(t) gets 1 - alpha");

  SelfcheckOptions sc;
  std::string fault;
  auto* selfcheck = app.add_subcommand("selfcheck", "Run every invariant battery")->fallthrough();
  selfcheck->add_option("--n-max", sc.n_max, "Largest dimension tested");
  selfcheck->add_option("--trials", sc.trials, "Trials per dimension and property");
  selfcheck->add_option("--inject-fault", fault, "Test harness: none or row_sum")->group("");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForVersion&) {
    out << kToolVersion << "\n";
    return kExitOk;
  } catch (const CLI::Success&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "rnc: " << e.what() << "\n";
    return kExitConfig;
  }

  try {
    if (*verdict) return cmd_verdict(g, vf, out);
    if (*simulate) return cmd_simulate(g, sim, out);
    if (*modes) return cmd_modes(g, sim, vf, out);
    if (*deterministic) return cmd_deterministic(g, matrix_text, det_tol, out);
    if (*lift) return cmd_lift(g, lift_a, lift_b, alpha, out);
    if (*selfcheck) return cmd_selfcheck(g, sc, fault, out, err);
  } catch (const ConfigError& e) {
    err << "rnc: config error: " << e.what() << "\n";
    return kExitConfig;
  } catch (const PreconditionError& e) {
    err << "rnc: invalid arguments: " << e.what() << "\n";
    return kExitConfig;
  } catch (const NumericalError& e) {
    err << "rnc: numerical failure: " << e.what() << "\n";
    return kExitNumerical;
  } catch (const IoError& e) {
    err << "rnc: I/O error: " << e.what() << "\n";
    return kExitIo;
  }
  return kExitConfig;
}

}  // namespace rnc
