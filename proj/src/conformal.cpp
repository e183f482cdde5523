#include "cpaudit/conformal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "cpaudit/random.hpp"

namespace cpaudit {

namespace {

// Slack for the quantile rank: (n+1)(1-alpha) can land an ulp above an exact
// integer (e.g. n=9, alpha=0.1 gives 9.000000000000002), and a naive ceil
// would then overshoot the intended order statistic.
constexpr double kRankSlack = 1e-9;

std::vector<int> descending_order(const std::vector<double>& probs) {
  std::vector<int> order(probs.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    if (probs[a] != probs[b]) return probs[a] > probs[b];
    return a < b;  // ties by ascending class index: total, platform-stable
  });
  return order;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0) || !(alpha < 1.0)) {
    throw ValidationError("alpha must be in (0,1)");
  }
}

std::size_t quantile_rank(std::size_t n, double alpha) {
  const double v = static_cast<double>(n + 1) * (1.0 - alpha);
  return static_cast<std::size_t>(std::ceil(v - kRankSlack));
}

std::vector<std::string> split_attributes(const std::string& text) {
  std::vector<std::string> out;
  std::string cur;
  for (char ch : text) {
    if (ch == ',') {
      out.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(ch);
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

double aps_score(const std::vector<double>& probs, int label,
                 std::optional<double> u) {
  if (label < 0 || label >= static_cast<int>(probs.size())) {
    throw ValidationError("aps_score: label out of range");
  }
  const auto order = descending_order(probs);
  double cum = 0.0;
  for (int idx : order) {
    cum += probs[idx];
    if (idx == label) break;
  }
  // The complete prefix is the whole mass, exactly 1 by definition; pinning
  // it keeps bottom-ranked scores tied across records instead of differing
  // by summation ulps.
  if (order.back() == label) cum = 1.0;
  if (u) {
    if (*u < 0.0 || *u > 1.0) throw ValidationError("aps_score: u outside [0,1]");
    cum -= *u * probs[label];
  }
  return std::clamp(cum, 0.0, 1.0);
}

CalibrationResult calibrate(const std::vector<double>& scores, double alpha) {
  check_alpha(alpha);
  if (scores.empty()) throw ValidationError("calibrate: empty score list");
  CalibrationResult result;
  result.n_cal = scores.size();
  result.alpha = alpha;
  result.variant = CalibrationVariant::plain;
  const std::size_t rank = quantile_rank(scores.size(), alpha);
  if (rank > scores.size()) {
    result.tau = 1.0;  // conservative saturation: sets become the full label set
    return result;
  }
  std::vector<double> sorted(scores);
  std::nth_element(sorted.begin(),
                   sorted.begin() + static_cast<std::ptrdiff_t>(rank - 1),
                   sorted.end());
  result.tau = sorted[rank - 1];
  return result;
}

CalibrationResult weighted_calibrate(const std::vector<double>& scores,
                                     const std::vector<double>& weights,
                                     double alpha) {
  check_alpha(alpha);
  if (scores.empty()) throw ValidationError("weighted_calibrate: empty input");
  if (scores.size() != weights.size()) {
    throw ValidationError("weighted_calibrate: scores/weights length mismatch");
  }
  for (double w : weights) {
    if (!(w > 0.0)) throw ValidationError("weighted_calibrate: weights must be positive");
  }
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });
  const double w_max = *std::max_element(weights.begin(), weights.end());
  const double total = std::accumulate(weights.begin(), weights.end(), 0.0);
  const double denom = total + w_max;
  const double need = (1.0 - alpha) * denom - kRankSlack * std::max(1.0, denom);
  CalibrationResult result;
  result.n_cal = scores.size();
  result.alpha = alpha;
  result.variant = CalibrationVariant::weighted;
  result.weights_used = weights;
  double cum = 0.0;
  for (std::size_t r = 0; r < order.size(); ++r) {
    cum += weights[order[r]];
    // Advance past ties so the cumulative mass at a value counts all of it.
    if (r + 1 < order.size() && scores[order[r + 1]] == scores[order[r]]) continue;
    if (cum >= need) {
      result.tau = scores[order[r]];
      return result;
    }
  }
  result.tau = 1.0;
  return result;
}

CalibrationResult mondrian_calibrate(const LabeledDataset& cal,
                                     const Partition& partition,
                                     const ScoreConfig& cfg) {
  check_alpha(cfg.alpha);
  if (cal.records.empty()) throw ValidationError("mondrian_calibrate: empty dataset");
  const auto scores = score_dataset(cal, cfg);
  std::map<std::string, std::vector<double>> cells;
  for (std::size_t i = 0; i < cal.records.size(); ++i) {
    cells[partition_key(cal.records[i], partition)].push_back(scores[i]);
  }
  if (partition.kind == Partition::Kind::by_class) {
    for (int c = 0; c < cal.num_classes(); ++c) {
      if (!cells.count(std::to_string(c))) {
        throw ValidationError("empty partition cell: class " + std::to_string(c));
      }
    }
  }
  CalibrationResult result;
  result.n_cal = cal.records.size();
  result.alpha = cfg.alpha;
  result.variant = CalibrationVariant::mondrian;
  result.randomized = cfg.randomized;
  result.partition = partition.kind == Partition::Kind::by_class
                         ? "class"
                         : "group:" + partition.attributes;
  for (const auto& [key, cell_scores] : cells) {
    const auto cell = calibrate(cell_scores, cfg.alpha);
    result.partition_thresholds[key] = {cell.tau, cell_scores.size()};
  }
  return result;
}

PredictionSet predict_set(const std::vector<double>& probs,
                          const CalibrationResult& calib,
                          const std::optional<std::string>& key,
                          std::optional<double> u) {
  const int k = static_cast<int>(probs.size());
  PredictionSet set;
  const auto order = descending_order(probs);

  // The last rank's prefix is pinned to exactly 1, mirroring aps_score.
  auto score_at = [&](std::size_t rank, double prefix) {
    double s = rank + 1 == order.size() ? 1.0 : prefix;
    if (u) s -= *u * probs[order[rank]];
    return std::clamp(s, 0.0, 1.0);
  };

  if (calib.variant == CalibrationVariant::mondrian &&
      calib.partition == "class") {
    if (key) {
      throw ValidationError(
          "predict_set: by-class calibration takes no partition key");
    }
    double prefix = 0.0;
    for (std::size_t r = 0; r < order.size(); ++r) {
      prefix += probs[order[r]];
      auto it = calib.partition_thresholds.find(std::to_string(order[r]));
      if (it == calib.partition_thresholds.end()) {
        throw ValidationError("predict_set: no threshold for class " +
                              std::to_string(order[r]));
      }
      const double tau = it->second.tau;
      if (tau >= 1.0 || score_at(r, prefix) <= tau) set.members.push_back(order[r]);
    }
  } else {
    double tau;
    if (calib.variant == CalibrationVariant::mondrian) {
      if (!key) {
        throw ValidationError(
            "predict_set: partition key required for group calibration");
      }
      auto it = calib.partition_thresholds.find(*key);
      if (it == calib.partition_thresholds.end()) {
        throw ValidationError("predict_set: no threshold for key '" + *key + "'");
      }
      tau = it->second.tau;
    } else {
      if (key) {
        throw ValidationError("predict_set: partition key given for " +
                              std::string(calib.variant == CalibrationVariant::plain
                                              ? "plain"
                                              : "weighted") +
                              " calibration");
      }
      tau = calib.tau;
    }
    if (tau >= 1.0) {
      for (int c = 0; c < k; ++c) set.members.push_back(c);
    } else {
      double prefix = 0.0;
      for (std::size_t r = 0; r < order.size(); ++r) {
        prefix += probs[order[r]];
        if (score_at(r, prefix) <= tau) set.members.push_back(order[r]);
      }
    }
  }
  if (set.members.empty()) {
    set.members.push_back(order[0]);  // forced argmax: empty sets are disallowed
  }
  std::sort(set.members.begin(), set.members.end());
  return set;
}

std::vector<double> score_dataset(const LabeledDataset& ds,
                                  const ScoreConfig& cfg) {
  Rng rng(mix_seed(cfg.seed, 0));
  std::vector<double> scores;
  scores.reserve(ds.records.size());
  for (const auto& rec : ds.records) {
    std::optional<double> u;
    if (cfg.randomized) u = rng.uniform();
    scores.push_back(aps_score(rec.probs, rec.label, u));
  }
  return scores;
}

std::vector<PredictionSet> predict_sets(const LabeledDataset& ds,
                                        const CalibrationResult& calib,
                                        const ScoreConfig& cfg) {
  // Substream 1: keeps prediction-time randomization independent of the
  // calibration scores drawn from substream 0.
  Rng rng(mix_seed(cfg.seed, 1));
  std::optional<Partition> partition;
  if (calib.variant == CalibrationVariant::mondrian &&
      calib.partition.rfind("group:", 0) == 0) {
    partition = Partition{Partition::Kind::by_group, calib.partition.substr(6)};
  }
  std::vector<PredictionSet> sets;
  sets.reserve(ds.records.size());
  for (const auto& rec : ds.records) {
    std::optional<double> u;
    if (cfg.randomized) u = rng.uniform();
    std::optional<std::string> key;
    if (partition) key = partition_key(rec, *partition);
    auto set = predict_set(rec.probs, calib, key, u);
    set.record_id = rec.id;
    set.score_of_label = aps_score(rec.probs, rec.label, u);
    sets.push_back(std::move(set));
  }
  return sets;
}

std::string partition_key(const PredictionRecord& rec,
                          const Partition& partition) {
  if (partition.kind == Partition::Kind::by_class) {
    return std::to_string(rec.label);
  }
  std::string key;
  for (const auto& attr : split_attributes(partition.attributes)) {
    auto it = rec.groups.find(attr);
    if (it == rec.groups.end()) {
      throw ValidationError("record '" + rec.id + "' lacks group attribute '" +
                            attr + "'");
    }
    if (!key.empty()) key += "|";
    key += attr + "=" + it->second;
  }
  return key;
}

Partition parse_partition(const std::string& text) {
  if (text == "class") return {Partition::Kind::by_class, ""};
  if (text.rfind("group:", 0) == 0 && text.size() > 6) {
    return {Partition::Kind::by_group, text.substr(6)};
  }
  throw ValidationError("unknown partition '" + text +
                        "' (expected class or group:<attr>)");
}

bool set_contains(const PredictionSet& set, int label) {
  return std::binary_search(set.members.begin(), set.members.end(), label);
}

}  // namespace cpaudit
