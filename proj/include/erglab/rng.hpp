#ifndef ERGLAB_RNG_HPP
#define ERGLAB_RNG_HPP

#include <cstdint>
#include <string_view>

namespace erglab {

// Counter-based generator (splitmix64). Consumers never share a stream:
// each derives its own from a root seed and a purpose label, so adding a
// new consumer cannot shift the draws seen by existing ones.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  // uniform double in [0, 1), 53 random bits
  double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

  // uniform integer in [lo, hi], both ends inclusive
  std::int64_t uniform_int(std::int64_t lo, std::int64_t hi) {
    const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1u;
    return lo + static_cast<std::int64_t>(next() % span);
  }

 private:
  std::uint64_t state_;
};

constexpr std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (char c : s) {
    h ^= static_cast<unsigned char>(c);
    h *= 0x100000001b3ULL;
  }
  return h;
}

// Labeled sub-stream, e.g. substream(seed, "gen/operator/3").
inline Rng substream(std::uint64_t seed, std::string_view label) {
  Rng mix(seed ^ fnv1a(label));
  return Rng(mix.next());
}

}  // namespace erglab

#endif
