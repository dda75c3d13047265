#include "vesselsim/rng.hpp"

namespace vesselsim {

std::uint64_t mix64(std::uint64_t x) noexcept {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::mt19937_64 make_stream(std::uint64_t seed, StreamTag tag, std::uint64_t index,
                            std::uint64_t block) {
  auto lo = [](std::uint64_t v) { return static_cast<std::uint32_t>(v); };
  auto hi = [](std::uint64_t v) { return static_cast<std::uint32_t>(v >> 32); };
  std::seed_seq seq{lo(seed),  hi(seed),  static_cast<std::uint32_t>(tag),
                    lo(index), hi(index), lo(block),
                    hi(block)};
  return std::mt19937_64(seq);
}

}  // namespace vesselsim
