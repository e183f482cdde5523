#pragma once

#include <boost/math/special_functions/beta.hpp>
#include <cmath>
#include <cstdint>
#include <numeric>
#include <vector>

#include "cpaudit/errors.hpp"

namespace cpaudit {

struct Interval {
  double lo = 0.0;
  double hi = 1.0;
};

// Exact (Clopper-Pearson) two-sided binomial interval. Chosen over the
// normal approximation because audit strata can be tiny.
inline Interval clopper_pearson(std::uint64_t successes, std::uint64_t n,
                                double confidence = 0.95) {
  if (n == 0) throw ValidationError("clopper_pearson: n must be positive");
  if (successes > n)
    throw ValidationError("clopper_pearson: successes exceed n");
  const double a2 = (1.0 - confidence) / 2.0;
  Interval ci;
  const auto k = static_cast<double>(successes);
  const auto nn = static_cast<double>(n);
  ci.lo = successes == 0 ? 0.0 : boost::math::ibeta_inv(k, nn - k + 1.0, a2);
  ci.hi = successes == n
              ? 1.0
              : boost::math::ibeta_inv(k + 1.0, nn - k, 1.0 - a2);
  return ci;
}

// One-sided exact lower confidence bound, valid with probability >= 1-delta.
inline double clopper_pearson_lower(std::uint64_t successes, std::uint64_t n,
                                    double delta) {
  if (n == 0) throw ValidationError("clopper_pearson_lower: n must be positive");
  if (successes == 0) return 0.0;
  const auto k = static_cast<double>(successes);
  const auto nn = static_cast<double>(n);
  return boost::math::ibeta_inv(k, nn - k + 1.0, delta);
}

inline double mean(const std::vector<double>& xs) {
  if (xs.empty()) throw ValidationError("mean: empty input");
  return std::accumulate(xs.begin(), xs.end(), 0.0) /
         static_cast<double>(xs.size());
}

inline double sample_sd(const std::vector<double>& xs) {
  if (xs.size() < 2) throw ValidationError("sample_sd: need at least 2 values");
  const double m = mean(xs);
  double ss = 0.0;
  for (double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(xs.size() - 1));
}

// Monte Carlo standard error of the mean of xs.
inline double mc_standard_error(const std::vector<double>& xs) {
  return sample_sd(xs) / std::sqrt(static_cast<double>(xs.size()));
}

}  // namespace cpaudit
