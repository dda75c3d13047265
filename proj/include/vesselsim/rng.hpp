#pragma once

#include <cstdint>
#include <random>

namespace vesselsim {

/// Independent stream families drawn from one master seed.
enum class StreamTag : std::uint32_t {
  HiddenVariables = 1,
  Locality = 2,
  Born = 3,
  Singlet = 4,
  TieCoin = 5,
};

/// Engine for the substream identified by (tag, index, block). Streams are
/// keyed by block, not by worker, so results do not depend on how blocks are
/// distributed across threads.
std::mt19937_64 make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index,
                            std::uint64_t block = 0);

/// Stateless 64-bit mixer (splitmix64 finaliser).
std::uint64_t mix64(std::uint64_t x) noexcept;

}  // namespace vesselsim
