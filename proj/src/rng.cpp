#include "rnc/rng.hpp"

namespace rnc {

Rng RngPolicy::stream(StreamDomain domain, std::uint64_t index) const {
  const auto tag = static_cast<std::uint64_t>(domain);
  std::uint64_t s = mix64(master_seed);
  s = mix64(s ^ mix64(tag * 0xd1b54a32d192ed03ULL));
  s = mix64(s ^ mix64(index + 0x632be59bd9b4e019ULL));
  return Rng(s);
}

}  // namespace rnc
