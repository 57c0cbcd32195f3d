#pragma once

// Counter-seeded RNG streams with fully specified output, so results are
// bit-reproducible across platforms and thread counts.

#include <cmath>
#include <cstdint>
#include <random>

namespace monoboot {

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

// Seed mix for derived streams: master_seed x (role, index, n).
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t role,
                                 std::uint64_t index, std::uint64_t extra = 0) {
  std::uint64_t h = splitmix64(master ^ splitmix64(role));
  h = splitmix64(h ^ splitmix64(index));
  return splitmix64(h ^ splitmix64(extra));
}

class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id),
        engine_(splitmix64(seed ^ splitmix64(stream_id))) {}

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on [0,1); 53-bit resolution.
  double uniform() { return double(engine_() >> 11) * 0x1.0p-53; }

  // Uniform on (0,1]; safe for log() and generalized-inverse arguments.
  double uniform_pos() { return double((engine_() >> 11) + 1) * 0x1.0p-53; }

  // Box-Muller, no state carried between calls.
  double normal() {
    const double u1 = uniform_pos();
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * 3.14159265358979323846 * u2);
  }

  double exponential() { return -std::log(uniform_pos()); }

  double half_normal() { return std::abs(normal()); }

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace monoboot
