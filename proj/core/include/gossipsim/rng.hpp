#pragma once

#include <cstdint>
#include <limits>

namespace gossipsim {

inline constexpr std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

/// Counter-style random stream keyed by (seed, round, node, domain).
///
/// Every protocol decision draws from the stream of the node that makes it,
/// so results do not depend on the order in which nodes are visited and the
/// protocol's randomness never shares state with the schedule generator.
class StreamRng {
 public:
  using result_type = std::uint64_t;

  enum class Domain : std::uint64_t {
    protocol = 0x70726f746fULL,
    scheduler = 0x7363686564ULL,
  };

  StreamRng(std::uint64_t seed, std::uint64_t round, std::uint64_t node,
            Domain domain = Domain::protocol)
      : state_(splitmix64(splitmix64(splitmix64(seed ^ static_cast<std::uint64_t>(domain)) ^
                                     round) ^
                          node)) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    state_ += 0x9e3779b97f4a7c15ULL;
    std::uint64_t z = state_;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound) {
    // Lemire's multiply-shift with rejection.
    __uint128_t m = static_cast<__uint128_t>((*this)()) * bound;
    auto low = static_cast<std::uint64_t>(m);
    if (low < bound) {
      const std::uint64_t threshold = (0 - bound) % bound;
      while (low < threshold) {
        m = static_cast<__uint128_t>((*this)()) * bound;
        low = static_cast<std::uint64_t>(m);
      }
    }
    return static_cast<std::uint64_t>(m >> 64);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double unit() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

}  // namespace gossipsim
