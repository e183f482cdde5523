#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <vector>

#include "cpaudit/conformal.hpp"
#include "cpaudit/random.hpp"
#include "cpaudit/synth.hpp"

using namespace cpaudit;

TEST_CASE("aps score accumulates descending mass through the label") {
  // Descending order is [0, 1, 2]; label 1 collects 0.6 + 0.3.
  CHECK(aps_score({0.6, 0.3, 0.1}, 1) == doctest::Approx(0.9));
  CHECK(aps_score({0.6, 0.3, 0.1}, 0) == doctest::Approx(0.6));
  // Randomized variant subtracts u * probs[label].
  CHECK(aps_score({0.6, 0.3, 0.1}, 0, 0.5) == doctest::Approx(0.3));
  CHECK(aps_score({0.6, 0.3, 0.1}, 1, 1.0) == doctest::Approx(0.6));
}

TEST_CASE("aps score breaks probability ties by class index") {
  // Classes 0 and 1 tie at 0.4: order must be [0, 1, 2].
  CHECK(aps_score({0.4, 0.4, 0.2}, 0) == doctest::Approx(0.4));
  CHECK(aps_score({0.4, 0.4, 0.2}, 1) == doctest::Approx(0.8));
}

TEST_CASE("aps score of the bottom-ranked label is exactly one") {
  // 1/3 three times does not sum to 1.0 in floating point, but the complete
  // prefix is pinned to the exact total mass.
  const std::vector<double> thirds = {1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0};
  CHECK(aps_score(thirds, 2) == 1.0);
  const std::vector<double> uneven = {0.1, 0.2, 0.3, 0.4};
  CHECK(aps_score(uneven, 0) == 1.0);  // lowest prob sorts last
}

TEST_CASE("aps score validates inputs") {
  CHECK_THROWS_AS(aps_score({0.5, 0.5}, 2), ValidationError);
  CHECK_THROWS_AS(aps_score({0.5, 0.5}, -1), ValidationError);
  CHECK_THROWS_AS(aps_score({0.5, 0.5}, 0, 1.5), ValidationError);
}

TEST_CASE("calibrate picks the conservative order statistic") {
  // n=4, alpha=0.5: rank = ceil(5 * 0.5) = 3, third smallest.
  CHECK(calibrate({0.1, 0.2, 0.3, 0.4}, 0.5).tau == doctest::Approx(0.3));
  // n=1, alpha=0.6: rank = ceil(2 * 0.4) = 1.
  CHECK(calibrate({0.7}, 0.6).tau == doctest::Approx(0.7));
  // Order must not matter.
  CHECK(calibrate({0.4, 0.1, 0.3, 0.2}, 0.5).tau == doctest::Approx(0.3));
}

TEST_CASE("calibrate survives the floating-point rank boundary") {
  // (9+1) * 0.9 evaluates to 9.000000000000002; the rank must still be 9,
  // not a saturated 10.
  std::vector<double> scores;
  for (int i = 1; i <= 9; ++i) scores.push_back(i / 10.0);
  const auto result = calibrate(scores, 0.1);
  CHECK(result.tau == doctest::Approx(0.9));
}

TEST_CASE("calibrate saturates to tau=1 on tiny calibration sets") {
  // n=5, alpha=0.1: rank 6 > 5 -> full sets rather than failure.
  const auto result = calibrate({0.1, 0.2, 0.3, 0.4, 0.5}, 0.1);
  CHECK(result.tau == 1.0);
  const auto set = predict_set({0.5, 0.3, 0.2}, result);
  CHECK(set.members == std::vector<int>{0, 1, 2});
}

TEST_CASE("calibrate validates inputs") {
  CHECK_THROWS_AS(calibrate({}, 0.1), ValidationError);
  CHECK_THROWS_AS(calibrate({0.5}, 0.0), ValidationError);
  CHECK_THROWS_AS(calibrate({0.5}, 1.0), ValidationError);
}

TEST_CASE("weighted calibrate matches the worked example") {
  const std::vector<double> s = {0.1, 0.2, 0.3, 0.4};
  const std::vector<double> w = {1.0, 2.0, 1.0, 1.0};
  CHECK(weighted_calibrate(s, w, 0.4).tau == doctest::Approx(0.4));
  CHECK(weighted_calibrate(s, w, 0.5).tau == doctest::Approx(0.3));
}

TEST_CASE("weighted calibrate reduces to plain with equal weights") {
  Rng rng(77);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 1 + static_cast<std::size_t>(rng.integer(40));
    std::vector<double> scores;
    for (std::size_t i = 0; i < n; ++i) scores.push_back(rng.uniform());
    const double alpha = 0.05 + 0.9 * rng.uniform();
    const std::vector<double> w(n, 1.0);
    const double plain = calibrate(scores, alpha).tau;
    const double weighted = weighted_calibrate(scores, w, alpha).tau;
    CHECK(weighted == plain);
  }
}

TEST_CASE("weighted calibrate handles saturation and ties") {
  // All mass below 1-alpha threshold achievable only at the top: tau = 1.
  CHECK(weighted_calibrate({0.1, 0.2}, {1.0, 1.0}, 0.05).tau == 1.0);
  // Tied scores are counted as one block.
  const auto tied = weighted_calibrate({0.3, 0.3, 0.3, 0.9}, {1, 1, 1, 1}, 0.4);
  CHECK(tied.tau == doctest::Approx(0.3));
}

TEST_CASE("weighted calibrate validates inputs") {
  CHECK_THROWS_AS(weighted_calibrate({}, {}, 0.1), ValidationError);
  CHECK_THROWS_AS(weighted_calibrate({0.5}, {1.0, 1.0}, 0.1), ValidationError);
  CHECK_THROWS_AS(weighted_calibrate({0.5}, {0.0}, 0.1), ValidationError);
  CHECK_THROWS_AS(weighted_calibrate({0.5}, {-1.0}, 0.1), ValidationError);
}

namespace {

void craft_record(LabeledDataset& ds, int label, double want) {
  // Majority mass `want` on the label (so it ranks first and its aps score
  // is exactly `want`), remainder on a filler class.
  PredictionRecord r;
  r.id = "r" + std::to_string(ds.records.size());
  r.probs = std::vector<double>(3, 0.0);
  r.probs[label] = want;
  r.probs[label == 2 ? 0 : 2] += 1.0 - want;
  r.label = label;
  ds.records.push_back(r);
}

LabeledDataset three_class_cal() {
  LabeledDataset ds;
  ds.class_names = {"class_0", "class_1", "class_2"};
  for (double s : {0.55, 0.6, 0.65, 0.7}) craft_record(ds, 0, s);
  for (double s : {0.72, 0.74, 0.76, 0.78}) craft_record(ds, 1, s);
  for (double s : {0.6, 0.7, 0.8, 0.9}) craft_record(ds, 2, s);
  return ds;
}

}  // namespace

TEST_CASE("mondrian calibrate computes per-class thresholds") {
  const auto cal = three_class_cal();
  const ScoreConfig cfg{false, 0.5, 0};
  const auto result =
      mondrian_calibrate(cal, {Partition::Kind::by_class, ""}, cfg);
  CHECK(result.variant == CalibrationVariant::mondrian);
  CHECK(result.partition == "class");
  // Per class n=4, alpha=0.5 -> rank ceil(5*0.5) = 3rd smallest.
  CHECK(result.partition_thresholds.at("0").tau == doctest::Approx(0.65));
  CHECK(result.partition_thresholds.at("1").tau == doctest::Approx(0.76));
  CHECK(result.partition_thresholds.at("2").tau == doctest::Approx(0.8));
  CHECK(result.partition_thresholds.at("0").n == 4);
}

TEST_CASE("mondrian calibrate rejects empty class cells") {
  LabeledDataset cal;
  cal.class_names = {"class_0", "class_1", "class_2"};
  for (double s : {0.55, 0.6}) craft_record(cal, 0, s);
  for (double s : {0.72, 0.74}) craft_record(cal, 1, s);  // no class-2 rows
  const ScoreConfig cfg{false, 0.5, 0};
  CHECK_THROWS_WITH_AS(
      mondrian_calibrate(cal, {Partition::Kind::by_class, ""}, cfg),
      doctest::Contains("empty partition cell: class 2"), ValidationError);
}

TEST_CASE("group mondrian keys and missing attributes") {
  auto cal = three_class_cal();
  for (std::size_t i = 0; i < cal.records.size(); ++i) {
    cal.records[i].groups["site"] = i % 2 == 0 ? "A" : "B";
  }
  const ScoreConfig cfg{false, 0.5, 0};
  const auto result =
      mondrian_calibrate(cal, {Partition::Kind::by_group, "site"}, cfg);
  CHECK(result.partition == "group:site");
  CHECK(result.partition_thresholds.count("site=A") == 1);
  CHECK(result.partition_thresholds.count("site=B") == 1);

  // Prediction with an explicit key picks that cell's threshold.
  const auto set =
      predict_set({0.6, 0.2, 0.2}, result, std::string("site=A"));
  CHECK(!set.members.empty());
  CHECK_THROWS_WITH_AS(predict_set({0.6, 0.2, 0.2}, result,
                                   std::string("site=C")),
                       doctest::Contains("site=C"), ValidationError);
  CHECK_THROWS_AS(predict_set({0.6, 0.2, 0.2}, result), ValidationError);

  cal.records[0].groups.clear();
  CHECK_THROWS_WITH_AS(
      mondrian_calibrate(cal, {Partition::Kind::by_group, "site"}, cfg),
      doctest::Contains("lacks group attribute"), ValidationError);
}

TEST_CASE("predict_set membership follows the threshold") {
  CalibrationResult calib;
  calib.tau = 0.75;
  calib.alpha = 0.25;
  calib.n_cal = 100;
  // Prefixes: 0.5 (class 0), 0.8 (class 1), 1.0 (class 2).
  const auto set = predict_set({0.5, 0.3, 0.2}, calib);
  CHECK(set.members == std::vector<int>{0});
  calib.tau = 0.85;
  CHECK(predict_set({0.5, 0.3, 0.2}, calib).members ==
        std::vector<int>{0, 1});
}

TEST_CASE("forced argmax keeps sets nonempty") {
  CalibrationResult calib;
  calib.tau = 0.1;  // below every prefix
  calib.alpha = 0.9;
  const auto set = predict_set({0.5, 0.3, 0.2}, calib);
  CHECK(set.members == std::vector<int>{0});
}

TEST_CASE("sets are nested as tau grows") {
  const auto ds = generate(basic_config(200, 5, 2.0, 13));
  for (double lo : {0.3, 0.5, 0.7}) {
    CalibrationResult a, b;
    a.tau = lo;
    a.alpha = 0.5;
    b.tau = lo + 0.2;
    b.alpha = 0.4;
    for (const auto& r : ds.records) {
      const auto sa = predict_set(r.probs, a);
      const auto sb = predict_set(r.probs, b);
      CHECK(std::includes(sb.members.begin(), sb.members.end(),
                          sa.members.begin(), sa.members.end()));
    }
  }
}

TEST_CASE("deterministic membership equals score comparison") {
  const auto ds = generate(basic_config(300, 6, 2.3, 29));
  const ScoreConfig cfg{false, 0.1, 3};
  const auto scores = score_dataset(ds, cfg);
  const auto calib = calibrate(scores, 0.1);
  const auto sets = predict_sets(ds, calib, cfg);
  for (std::size_t i = 0; i < ds.size(); ++i) {
    // The label is in the set exactly when its score clears tau: calibration
    // and membership share bitwise-identical prefix arithmetic.
    CHECK(set_contains(sets[i], ds.records[i].label) ==
          (scores[i] <= calib.tau));
    CHECK(*sets[i].score_of_label == scores[i]);
  }
}

TEST_CASE("randomized prediction is deterministic given the seed") {
  const auto ds = generate(basic_config(100, 4, 2.0, 31));
  const ScoreConfig cfg{true, 0.2, 11};
  const auto calib = calibrate(score_dataset(ds, cfg), 0.2);
  const auto s1 = predict_sets(ds, calib, cfg);
  const auto s2 = predict_sets(ds, calib, cfg);
  REQUIRE(s1.size() == s2.size());
  for (std::size_t i = 0; i < s1.size(); ++i) {
    CHECK(s1[i].members == s2[i].members);
  }
  // Calibration scoring and prediction draw from distinct substreams: the
  // score stored on the set differs from the calibration-time score.
  const auto cal_scores = score_dataset(ds, cfg);
  bool any_different = false;
  for (std::size_t i = 0; i < s1.size(); ++i) {
    if (*s1[i].score_of_label != cal_scores[i]) any_different = true;
  }
  CHECK(any_different);
}

TEST_CASE("randomized sets are smaller on average") {
  const auto ds = generate(basic_config(2000, 6, 2.3, 37));
  const ScoreConfig det{false, 0.1, 5};
  const ScoreConfig rnd{true, 0.1, 5};
  const auto det_sets =
      predict_sets(ds, calibrate(score_dataset(ds, det), 0.1), det);
  const auto rnd_sets =
      predict_sets(ds, calibrate(score_dataset(ds, rnd), 0.1), rnd);
  double det_size = 0.0, rnd_size = 0.0;
  for (const auto& s : det_sets) det_size += double(s.members.size());
  for (const auto& s : rnd_sets) rnd_size += double(s.members.size());
  CHECK(rnd_size < det_size);
}

TEST_CASE("by-class mondrian prediction uses per-class thresholds") {
  const auto cal = three_class_cal();
  const ScoreConfig cfg{false, 0.5, 0};
  const auto result =
      mondrian_calibrate(cal, {Partition::Kind::by_class, ""}, cfg);
  // A key must not be passed for by-class results.
  CHECK_THROWS_AS(predict_set({0.6, 0.3, 0.1}, result, std::string("0")),
                  ValidationError);
  CalibrationResult byclass;
  byclass.variant = CalibrationVariant::mondrian;
  byclass.partition = "class";
  byclass.alpha = 0.5;
  byclass.partition_thresholds["0"] = {0.7, 4};
  byclass.partition_thresholds["1"] = {0.95, 4};
  byclass.partition_thresholds["2"] = {0.2, 4};
  // Prefixes for [0.5, 0.3, 0.2]: class0 0.5 <= 0.7 in; class1 0.8 <= 0.95
  // in; class2 1.0(pinned) > 0.2 out.
  const auto set = predict_set({0.5, 0.3, 0.2}, byclass);
  CHECK(set.members == std::vector<int>{0, 1});
  // A saturated class threshold always admits its class.
  byclass.partition_thresholds["2"] = {1.0, 2};
  CHECK(predict_set({0.5, 0.3, 0.2}, byclass).members ==
        std::vector<int>{0, 1, 2});
}

TEST_CASE("partition parsing") {
  CHECK(parse_partition("class").kind == Partition::Kind::by_class);
  const auto g = parse_partition("group:site,scanner");
  CHECK(g.kind == Partition::Kind::by_group);
  CHECK(g.attributes == "site,scanner");
  CHECK_THROWS_AS(parse_partition("grp:site"), ValidationError);
  CHECK_THROWS_AS(parse_partition("group:"), ValidationError);
}

TEST_CASE("multi-attribute partition keys concatenate") {
  PredictionRecord r;
  r.id = "x";
  r.probs = {0.5, 0.5};
  r.groups = {{"site", "A"}, {"scanner", "S1"}};
  const auto key =
      partition_key(r, {Partition::Kind::by_group, "site,scanner"});
  CHECK(key == "site=A|scanner=S1");
  CHECK(partition_key(r, {Partition::Kind::by_class, ""}) == "0");
}
