#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <random>

#include "rocus/geometry.hpp"

namespace rocus {

// Deterministic RNG facade. Variate generation is hand-rolled on top of the
// raw 64-bit stream so that sequences are reproducible independent of the
// standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}

  void reseed(std::uint64_t seed) {
    gen_.seed(seed);
    has_spare_ = false;
  }

  // Uniform on [0, 1).
  double uniform01() {
    return static_cast<double>(gen_() >> 11) * 0x1.0p-53;
  }

  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }

  Vec2 uniform_vec(double lo, double hi) {
    const double x = uniform(lo, hi);
    const double y = uniform(lo, hi);
    return {x, y};
  }

  // Standard normal via the Marsaglia polar method.
  double normal() {
    if (has_spare_) {
      has_spare_ = false;
      return spare_;
    }
    double u, v, s;
    do {
      u = 2.0 * uniform01() - 1.0;
      v = 2.0 * uniform01() - 1.0;
      s = u * u + v * v;
    } while (s >= 1.0 || s == 0.0);
    const double m = std::sqrt(-2.0 * std::log(s) / s);
    spare_ = v * m;
    has_spare_ = true;
    return u * m;
  }

  std::uint64_t raw() { return gen_(); }

 private:
  std::mt19937_64 gen_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

// Standard normal CDF, accurate in both tails.
inline double normal_cdf(double z) {
  return 0.5 * std::erfc(-z / 1.4142135623730951);
}

// Gaussian N(mu, sigma^2) truncated and renormalized to [lo, hi].
struct TruncatedNormal {
  double mu;
  double sigma;
  double lo;
  double hi;

  double sample(Rng& rng) const {
    // Rejection on the parent normal; acceptance >= ~0.5 whenever mu is
    // inside [lo, hi], which holds for every kernel in this project.
    for (;;) {
      const double x = mu + sigma * rng.normal();
      if (x >= lo && x <= hi) return x;
    }
  }

  double log_pdf(double x) const {
    if (x < lo || x > hi) return -std::numeric_limits<double>::infinity();
    const double z = (x - mu) / sigma;
    const double mass =
        normal_cdf((hi - mu) / sigma) - normal_cdf((lo - mu) / sigma);
    constexpr double kLogSqrt2Pi = 0.9189385332046727;
    return -0.5 * z * z - std::log(sigma) - kLogSqrt2Pi - std::log(mass);
  }
};

}  // namespace rocus
