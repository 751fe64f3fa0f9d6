#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>

#include "rnc/distribution.hpp"
#include "rnc/matrix.hpp"
#include "rnc/rng.hpp"

namespace rnc {

/// Initial state x0: an explicit vector, or i.i.d. uniform on [0, 1)
/// drawn from the master seed.
struct InitialState {
  bool uniform01 = true;
  Vector values;

  static InitialState uniform() { return {}; }
  static InitialState explicit_values(Vector v) { return {false, std::move(v)}; }

  /// Materializes x0 for dimension n. Throws PreconditionError when an
  /// explicit vector has the wrong length.
  Vector resolve(std::size_t n, const RngPolicy& policy) const;
  std::string describe() const;
};

/// Optional `simulation` block of a config document.
struct SimulationDefaults {
  std::optional<std::uint64_t> paths;
  std::optional<std::uint64_t> horizon;
  std::optional<double> eps;
  std::optional<std::uint64_t> seed;
  std::optional<InitialState> x0;
};

struct Config {
  MatrixDistribution distribution;
  SimulationDefaults simulation;
};

/// Parses and validates a config document. Diagnostics name the source, the
/// line for syntax errors, and the JSON path for schema errors.
/// Throws ConfigError.
Config parse_config(std::string_view text, std::string_view source = "<config>");

/// Reads and parses a config file. Throws ConfigError (unreadable files
/// included).
Config load_config(const std::filesystem::path& path);

/// Serializes a distribution as a config document accepted by parse_config.
/// Throws ConfigError for distributions that have no config form.
std::string dump_config(const MatrixDistribution& dist, const SimulationDefaults& simulation = {});

/// Parses an --x0 style value: "uniform01", a JSON array, or a
/// comma-separated list of reals.
InitialState parse_initial_state(std::string_view text);

}  // namespace rnc
