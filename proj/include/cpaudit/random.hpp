#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <random>
#include <vector>

#include "cpaudit/errors.hpp"

namespace cpaudit {

// Mixes two seeds into one stream seed (splitmix64 finalizer). Used to derive
// per-trial and per-purpose substreams without correlated overlap.
inline std::uint64_t mix_seed(std::uint64_t a, std::uint64_t b) {
  std::uint64_t z = a + 0x9e3779b97f4a7c15ULL * (b + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

// Seeded random primitives with fully specified algorithms.
//
// std::mt19937_64 has a portable bit stream, but the std::*_distribution
// adapters are implementation-defined, so every transform is spelled out
// here. Integer draws (and therefore dataset splits and resamples) are
// bit-reproducible everywhere; continuous draws additionally depend on the
// platform's libm only up to the last ulp.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : gen_(seed) {}

  // Uniform on [0, 1), 53-bit resolution.
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // Standard normal via Box-Muller; consumes two uniforms per call.
  double normal() {
    double u1 = 1.0 - uniform();  // (0, 1], keeps the log finite
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) *
           std::cos(2.0 * std::numbers::pi * u2);
  }

  // Gamma(shape, 1) via Marsaglia-Tsang, with the standard power boost for
  // shape < 1: G(a) = G(a + 1) * U^(1/a).
  double gamma(double shape) {
    if (!(shape > 0.0)) throw ValidationError("gamma: shape must be positive");
    if (shape < 1.0) {
      double u = 1.0 - uniform();
      return gamma(shape + 1.0) * std::pow(u, 1.0 / shape);
    }
    const double d = shape - 1.0 / 3.0;
    const double c = 1.0 / (3.0 * std::sqrt(d));
    for (;;) {
      double x = normal();
      double t = 1.0 + c * x;
      if (t <= 0.0) continue;
      double v = t * t * t;
      double u = uniform();
      if (u < 1.0 - 0.0331 * x * x * x * x) return d * v;
      if (u > 0.0 && std::log(u) < 0.5 * x * x + d * (1.0 - v + std::log(v)))
        return d * v;
    }
  }

  // Dirichlet via normalized gamma draws.
  std::vector<double> dirichlet(const std::vector<double>& alpha) {
    std::vector<double> out(alpha.size());
    double total = 0.0;
    do {
      total = 0.0;
      for (std::size_t i = 0; i < alpha.size(); ++i) {
        out[i] = gamma(alpha[i]);
        total += out[i];
      }
    } while (total <= 0.0);
    for (double& v : out) v /= total;
    return out;
  }

  // Index draw proportional to the given nonnegative weights.
  std::size_t categorical(const std::vector<double>& weights) {
    double total = 0.0;
    for (double w : weights) {
      if (w < 0.0) throw ValidationError("categorical: negative weight");
      total += w;
    }
    if (total <= 0.0) throw ValidationError("categorical: zero total weight");
    double target = uniform() * total;
    double cum = 0.0;
    for (std::size_t i = 0; i + 1 < weights.size(); ++i) {
      cum += weights[i];
      if (target < cum) return i;
    }
    return weights.size() - 1;
  }

  // Unbiased integer on [0, bound) by rejecting the wrapped remainder band.
  std::uint64_t integer(std::uint64_t bound) {
    if (bound == 0) throw ValidationError("integer: bound must be positive");
    const std::uint64_t threshold = (-bound) % bound;  // 2^64 mod bound
    std::uint64_t x;
    do {
      x = gen_();
    } while (x < threshold);
    return x % bound;
  }

  // Fisher-Yates; depends only on integer(), so it is fully portable.
  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = static_cast<std::size_t>(integer(i));
      std::swap(v[i - 1], v[j]);
    }
  }

 private:
  std::mt19937_64 gen_;
};

}  // namespace cpaudit
