#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cpaudit/random.hpp"

using namespace cpaudit;

TEST_CASE("mix_seed separates substreams") {
  CHECK(mix_seed(0, 0) != mix_seed(0, 1));
  CHECK(mix_seed(0, 0) != mix_seed(1, 0));
  CHECK(mix_seed(7, 3) == mix_seed(7, 3));
}

TEST_CASE("uniform is deterministic and in range") {
  Rng a(123), b(123), c(124);
  bool all_equal = true;
  bool any_diff_seed = false;
  for (int i = 0; i < 1000; ++i) {
    const double x = a.uniform();
    CHECK(x >= 0.0);
    CHECK(x < 1.0);
    all_equal = all_equal && x == b.uniform();
    any_diff_seed = any_diff_seed || x != c.uniform();
  }
  CHECK(all_equal);
  CHECK(any_diff_seed);
}

TEST_CASE("uniform mean") {
  Rng rng(9);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) sum += rng.uniform();
  CHECK(std::abs(sum / n - 0.5) < 0.005);
}

TEST_CASE("normal moments") {
  Rng rng(11);
  double sum = 0.0, sq = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double x = rng.normal();
    sum += x;
    sq += x * x;
  }
  const double m = sum / n;
  CHECK(std::abs(m) < 0.01);
  CHECK(std::abs(sq / n - m * m - 1.0) < 0.02);
}

TEST_CASE("gamma moments match shape") {
  for (double shape : {0.5, 1.0, 2.5, 8.0}) {
    Rng rng(17);
    double sum = 0.0, sq = 0.0;
    const int n = 200000;
    for (int i = 0; i < n; ++i) {
      const double x = rng.gamma(shape);
      CHECK(x > 0.0);
      sum += x;
      sq += x * x;
    }
    const double m = sum / n;
    // Gamma(shape, 1): mean = var = shape.
    CHECK(std::abs(m - shape) < 0.05 * shape + 0.01);
    CHECK(std::abs(sq / n - m * m - shape) < 0.1 * shape + 0.05);
  }
}

TEST_CASE("dirichlet lies on the simplex with the right means") {
  Rng rng(23);
  const std::vector<double> alpha = {1.0, 2.0, 5.0};
  const double total = 8.0;
  std::vector<double> means(3, 0.0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const auto x = rng.dirichlet(alpha);
    REQUIRE(x.size() == 3);
    double s = 0.0;
    for (double v : x) {
      CHECK(v >= 0.0);
      s += v;
    }
    CHECK(s == doctest::Approx(1.0).epsilon(1e-12));
    for (int j = 0; j < 3; ++j) means[j] += x[j];
  }
  for (int j = 0; j < 3; ++j) {
    CHECK(std::abs(means[j] / n - alpha[j] / total) < 0.01);
  }
}

TEST_CASE("categorical follows the weights") {
  Rng rng(31);
  const std::vector<double> w = {0.5, 0.25, 0.25};
  std::vector<int> counts(3, 0);
  const int n = 50000;
  for (int i = 0; i < n; ++i) {
    const int k = rng.categorical(w);
    REQUIRE(k >= 0);
    REQUIRE(k < 3);
    ++counts[k];
  }
  CHECK(std::abs(counts[0] / double(n) - 0.5) < 0.02);
  CHECK(std::abs(counts[1] / double(n) - 0.25) < 0.02);
}

TEST_CASE("integer covers its range uniformly") {
  Rng rng(37);
  std::vector<int> counts(7, 0);
  for (int i = 0; i < 70000; ++i) {
    const auto k = rng.integer(7);
    REQUIRE(k < 7);
    ++counts[static_cast<int>(k)];
  }
  for (int c : counts) CHECK(std::abs(c - 10000) < 500);
}

TEST_CASE("shuffle permutes deterministically") {
  std::vector<int> v1 = {1, 2, 3, 4, 5, 6, 7, 8};
  auto v2 = v1;
  const auto orig = v1;
  Rng a(5), b(5);
  a.shuffle(v1);
  b.shuffle(v2);
  CHECK(v1 == v2);
  auto sorted = v1;
  std::sort(sorted.begin(), sorted.end());
  CHECK(sorted == orig);
}
