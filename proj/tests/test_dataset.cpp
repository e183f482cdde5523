#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "cpaudit/dataset.hpp"
#include "cpaudit/synth.hpp"

using namespace cpaudit;

namespace {

PredictionRecord rec(std::string id, std::vector<double> probs, int label) {
  PredictionRecord r;
  r.id = std::move(id);
  r.probs = std::move(probs);
  r.label = label;
  return r;
}

LabeledDataset tiny() {
  LabeledDataset ds;
  ds.records = {rec("a", {0.7, 0.2, 0.1}, 0), rec("b", {0.1, 0.8, 0.1}, 1),
                rec("c", {0.3, 0.3, 0.4}, 2), rec("d", {0.5, 0.4, 0.1}, 1)};
  validate_dataset(ds);
  return ds;
}

}  // namespace

TEST_CASE("validate_record renormalizes within tolerance") {
  auto r = rec("x", {0.5, 0.5 + 5e-7}, 0);
  validate_record(r, 2, "row 0");
  CHECK(r.probs[0] + r.probs[1] == doctest::Approx(1.0).epsilon(1e-15));
}

TEST_CASE("validate_record rejects bad rows with location") {
  auto wrong_len = rec("x", {0.5, 0.5}, 0);
  CHECK_THROWS_WITH_AS(validate_record(wrong_len, 3, "row 7"),
                       doctest::Contains("row 7"), ValidationError);

  auto bad_sum = rec("x", {0.5, 0.4}, 0);
  CHECK_THROWS_WITH_AS(validate_record(bad_sum, 2, "row 1"),
                       doctest::Contains("probability-sum"), ValidationError);

  auto neg = rec("x", {-0.1, 1.1}, 0);
  CHECK_THROWS_AS(validate_record(neg, 2, "row 2"), ValidationError);

  auto bad_label = rec("x", {0.5, 0.5}, 2);
  CHECK_THROWS_WITH_AS(validate_record(bad_label, 2, "row 3"),
                       doctest::Contains("label 2"), ValidationError);
}

TEST_CASE("validate_dataset fills default class names") {
  LabeledDataset ds;
  ds.records = {rec("a", {0.6, 0.4}, 0)};
  validate_dataset(ds);
  REQUIRE(ds.class_names.size() == 2);
  CHECK(ds.class_names[0] == "class_0");
  CHECK(ds.class_names[1] == "class_1");
}

TEST_CASE("validate_dataset checks taxonomy coverage") {
  auto ds = tiny();
  ds.taxonomy = {{0, 0}, {1, 1}};  // class 2 missing
  CHECK_THROWS_WITH_AS(validate_dataset(ds),
                       doctest::Contains("taxonomy missing class 2"),
                       ValidationError);
  ds.taxonomy = {{0, 0}, {1, 1}, {2, 1}};
  CHECK_NOTHROW(validate_dataset(ds));
}

TEST_CASE("split_dataset partitions disjointly and deterministically") {
  const auto ds = generate(basic_config(200, 4, 2.0, 5));
  const auto [cal1, eval1] = split_dataset(ds, {60, 9, false});
  const auto [cal2, eval2] = split_dataset(ds, {60, 9, false});
  CHECK(cal1.size() == 60);
  CHECK(eval1.size() == 140);
  std::set<std::string> ids;
  for (const auto& r : cal1.records) ids.insert(r.id);
  for (const auto& r : eval1.records) ids.insert(r.id);
  CHECK(ids.size() == 200);
  REQUIRE(cal1.size() == cal2.size());
  for (std::size_t i = 0; i < cal1.size(); ++i) {
    CHECK(cal1.records[i].id == cal2.records[i].id);
  }
  const auto [cal3, eval3] = split_dataset(ds, {60, 10, false});
  bool same = cal3.size() == cal1.size();
  if (same) {
    same = true;
    for (std::size_t i = 0; i < cal1.size(); ++i) {
      if (cal1.records[i].id != cal3.records[i].id) same = false;
    }
  }
  CHECK_FALSE(same);
}

TEST_CASE("stratified split preserves class proportions") {
  SynthConfig cfg;
  cfg.n = 1000;
  cfg.k = 4;
  cfg.class_priors = {0.55, 0.25, 0.15, 0.05};
  cfg.concentration.assign(4, 2.0);
  cfg.seed = 21;
  const auto ds = generate(cfg);
  std::vector<std::size_t> pool_counts(4, 0);
  for (const auto& r : ds.records) ++pool_counts[r.label];
  const auto [cal, eval] = split_dataset(ds, {200, 3, true});
  std::vector<std::size_t> cal_counts(4, 0);
  for (const auto& r : cal.records) ++cal_counts[r.label];
  CHECK(cal.size() == 200);
  for (int c = 0; c < 4; ++c) {
    const double expected = 200.0 * double(pool_counts[c]) / 1000.0;
    CHECK(std::abs(double(cal_counts[c]) - expected) <= 1.0);
  }
}

TEST_CASE("split_dataset rejects degenerate sizes") {
  const auto ds = tiny();
  CHECK_THROWS_AS(split_dataset(ds, {0, 0, false}), ValidationError);
  CHECK_THROWS_AS(split_dataset(ds, {4, 0, false}), ValidationError);
}

TEST_CASE("resample_weighted draws only positively weighted classes") {
  const auto ds = tiny();
  const auto out = resample_weighted(ds, {1.0, 0.0, 1.0}, 300, 17);
  CHECK(out.size() == 300);
  for (const auto& r : out.records) CHECK(r.label != 1);
  const auto again = resample_weighted(ds, {1.0, 0.0, 1.0}, 300, 17);
  for (std::size_t i = 0; i < 300; ++i) {
    CHECK(out.records[i].id == again.records[i].id);
  }
}

TEST_CASE("resample_weighted rejects bad weights") {
  const auto ds = tiny();
  CHECK_THROWS_AS(resample_weighted(ds, {1.0, 1.0}, 10, 0), ValidationError);
  CHECK_THROWS_AS(resample_weighted(ds, {-1.0, 1.0, 1.0}, 10, 0),
                  ValidationError);
  CHECK_THROWS_AS(resample_weighted(ds, {0.0, 0.0, 0.0}, 10, 0),
                  ValidationError);
  LabeledDataset no2 = tiny();
  no2.records.erase(no2.records.begin() + 2);  // drop the only class-2 row
  CHECK_THROWS_WITH_AS(resample_weighted(no2, {1.0, 1.0, 1.0}, 10, 0),
                       doctest::Contains("positive weight on empty class 2"),
                       ValidationError);
}

TEST_CASE("resample_weighted approaches the target distribution") {
  const auto ds = generate(basic_config(2000, 3, 2.0, 8));
  const auto out = resample_weighted(ds, {3.0, 1.0, 1.0}, 20000, 4);
  const auto emp = empirical_class_distribution(ds);
  const auto dist = empirical_class_distribution(out);
  // Weighting multiplies each class's share by its weight (then renormalizes).
  std::vector<double> expect(3);
  double z = 0.0;
  const std::vector<double> w = {3.0, 1.0, 1.0};
  for (int c = 0; c < 3; ++c) z += emp[c] * w[c];
  for (int c = 0; c < 3; ++c) expect[c] = emp[c] * w[c] / z;
  for (int c = 0; c < 3; ++c) CHECK(std::abs(dist[c] - expect[c]) < 0.02);
}

TEST_CASE("top1 accuracy and argmax") {
  const auto ds = tiny();
  // a: argmax 0 == label; b: 1 == 1; c: 2 == 2; d: argmax 0 != 1.
  CHECK(top1_accuracy(ds) == doctest::Approx(0.75));
  CHECK(argmax_class({0.4, 0.4, 0.2}) == 0);  // tie goes to the lower index
}

TEST_CASE("empirical distribution sums to one") {
  const auto dist = empirical_class_distribution(tiny());
  CHECK(dist[0] + dist[1] + dist[2] == doctest::Approx(1.0));
  CHECK(dist[1] == doctest::Approx(0.5));
}
