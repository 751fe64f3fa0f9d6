#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include <json.hpp>

namespace rnc {

inline constexpr std::string_view kToolVersion = "0.1.0";

/// Everything needed to reproduce a result file. Thread count is omitted on
/// purpose: it does not affect outputs.
struct RunManifest {
  std::string command;
  std::uint64_t seed = 0;
  std::optional<std::uint64_t> paths;
  std::optional<std::uint64_t> horizon;
  std::optional<double> eps;
  std::optional<double> p;
  std::optional<std::uint64_t> mc_samples;
  std::optional<double> alpha;
  std::string x0;
  std::string config_digest;  // sha256 of the config bytes
  std::string tool_version{kToolVersion};

  nlohmann::json to_json() const;
};

/// Lowercase hex SHA-256 of `bytes`.
std::string sha256_hex(std::string_view bytes);

}  // namespace rnc
