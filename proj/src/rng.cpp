#include "hmean/rng.hpp"

#include <cmath>
#include <stdexcept>

namespace hmean {

SeededRng::SeededRng(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_(stream_id) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(stream_id & 0xffffffffu),
                    static_cast<std::uint32_t>(stream_id >> 32)};
  engine_.seed(seq);
}

double SeededRng::uniform() {
  return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double SeededRng::uniform_open() {
  double u;
  do {
    u = uniform();
  } while (u == 0.0);
  return u;
}

double SeededRng::normal() {
  if (have_cached_normal_) {
    have_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform_open();
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double theta = 2.0 * M_PI * u2;
  cached_normal_ = r * std::sin(theta);
  have_cached_normal_ = true;
  return r * std::cos(theta);
}

double SeededRng::exponential() { return -std::log(uniform_open()); }

double SeededRng::laplace() {
  const double e = exponential();
  return bernoulli(0.5) ? e : -e;
}

// Marsaglia-Tsang squeeze method; shape < 1 handled by boosting.
double SeededRng::gamma(double shape) {
  if (!(shape > 0.0)) throw std::domain_error("gamma shape must be positive");
  if (shape < 1.0)
    return gamma(shape + 1.0) * std::pow(uniform_open(), 1.0 / shape);
  const double d = shape - 1.0 / 3.0;
  const double c = 1.0 / std::sqrt(9.0 * d);
  for (;;) {
    double x, v;
    do {
      x = normal();
      v = 1.0 + c * x;
    } while (v <= 0.0);
    v = v * v * v;
    const double u = uniform_open();
    if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
    if (std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v))) return d * v;
  }
}

bool SeededRng::bernoulli(double p) { return uniform() < p; }

int SeededRng::uniform_int(int n) {
  if (n <= 0) throw std::domain_error("uniform_int requires n >= 1");
  // Rejection on the top 53 bits to avoid modulo bias.
  const std::uint64_t range = static_cast<std::uint64_t>(n);
  const std::uint64_t limit = (std::uint64_t{1} << 53) / range * range;
  for (;;) {
    const std::uint64_t bits = engine_() >> 11;
    if (bits < limit) return static_cast<int>(bits % range);
  }
}

}  // namespace hmean
