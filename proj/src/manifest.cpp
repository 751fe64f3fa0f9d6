#include "rnc/manifest.hpp"

#include <array>
#include <cstdio>

#include <openssl/evp.h>

#include "rnc/errors.hpp"

namespace rnc {

nlohmann::json RunManifest::to_json() const {
  nlohmann::json j;
  j["command"] = command;
  j["tool_version"] = tool_version;
  j["config_digest"] = config_digest;
  nlohmann::json params;
  params["seed"] = seed;
  if (paths) params["paths"] = *paths;
  if (horizon) params["horizon"] = *horizon;
  if (eps) params["eps"] = *eps;
  if (p) params["p"] = *p;
  if (mc_samples) params["mc_samples"] = *mc_samples;
  if (alpha) params["alpha"] = *alpha;
  if (!x0.empty()) params["x0"] = x0;
  j["parameters"] = std::move(params);
  return j;
}

std::string sha256_hex(std::string_view bytes) {
  std::array<unsigned char, EVP_MAX_MD_SIZE> md{};
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), md.data(), &len, EVP_sha256(), nullptr) != 1)
    throw Error("sha256 digest failed");
  std::string hex;
  hex.reserve(2 * len);
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", md[i]);
    hex += buf;
  }
  return hex;
}

}  // namespace rnc
