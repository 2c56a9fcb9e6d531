#pragma once

#include <cstdint>
#include <random>

namespace hmean {

/// Deterministic seeded RNG: mt19937_64 initialized from (seed, stream_id)
/// through std::seed_seq, with fixed variate algorithms (53-bit uniforms,
/// Box-Muller normals) so identical (seed, stream_id) yields an identical
/// sequence regardless of standard-library internals.
class SeededRng {
 public:
  explicit SeededRng(std::uint64_t seed, std::uint64_t stream_id = 0);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_; }

  /// Fresh generator on a different stream of the same seed.
  SeededRng stream(std::uint64_t stream_id) const {
    return SeededRng(seed_, stream_id);
  }

  double uniform();       // [0, 1)
  double uniform_open();  // (0, 1)
  double normal();        // standard normal
  double exponential();   // rate 1
  double laplace();       // density exp(-|x|)/2
  double gamma(double shape);
  bool bernoulli(double p);
  int uniform_int(int n);  // uniform on {0, ..., n-1}

 private:
  std::uint64_t seed_;
  std::uint64_t stream_;
  std::mt19937_64 engine_;
  bool have_cached_normal_ = false;
  double cached_normal_ = 0.0;
};

}  // namespace hmean
