#include "cpaudit/audit.hpp"

#include <algorithm>
#include <cmath>

namespace cpaudit {

namespace {

StratumStat make_stat(std::size_t covered, std::size_t n) {
  StratumStat s;
  s.n = n;
  s.rate = static_cast<double>(covered) / static_cast<double>(n);
  s.ci = clopper_pearson(covered, n);
  return s;
}

void check_alignment(const std::vector<PredictionSet>& sets,
                     const LabeledDataset& ds) {
  if (sets.size() != ds.records.size()) {
    throw ValidationError("sets and dataset are misaligned (" +
                          std::to_string(sets.size()) + " vs " +
                          std::to_string(ds.records.size()) + " entries)");
  }
  for (std::size_t i = 0; i < sets.size(); ++i) {
    if (!sets[i].record_id.empty() && sets[i].record_id != ds.records[i].id) {
      throw ValidationError("sets and dataset are misaligned at index " +
                            std::to_string(i) + " (id '" + sets[i].record_id +
                            "' vs '" + ds.records[i].id + "')");
    }
  }
}

}  // namespace

CoverageReport coverage_report(const std::vector<PredictionSet>& sets,
                               const LabeledDataset& ds, double alpha) {
  check_alignment(sets, ds);
  const std::size_t n = sets.size();
  const std::size_t k = static_cast<std::size_t>(ds.num_classes());
  CoverageReport report;
  report.alpha = alpha;

  std::size_t covered_total = 0;
  std::map<int, std::pair<std::size_t, std::size_t>> by_class;
  std::map<std::string, std::pair<std::size_t, std::size_t>> by_group;
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> by_size;
  double size_sum = 0.0;
  std::size_t singletons = 0;
  std::size_t full_sets = 0;

  for (std::size_t i = 0; i < n; ++i) {
    const auto& set = sets[i];
    const auto& rec = ds.records[i];
    const bool covered = set_contains(set, rec.label);
    covered_total += covered;
    auto& cls = by_class[rec.label];
    cls.first += covered;
    ++cls.second;
    for (const auto& [attr, value] : rec.groups) {
      auto& grp = by_group[attr + "=" + value];
      grp.first += covered;
      ++grp.second;
    }
    auto& sz = by_size[set.members.size()];
    sz.first += covered;
    ++sz.second;
    size_sum += static_cast<double>(set.members.size());
    singletons += set.members.size() == 1;
    full_sets += set.members.size() == k;
  }

  report.marginal = make_stat(covered_total, n);
  for (const auto& [cls, cnt] : by_class) {
    report.per_class[cls] = make_stat(cnt.first, cnt.second);
  }
  for (const auto& [key, cnt] : by_group) {
    report.per_group[key] = make_stat(cnt.first, cnt.second);
  }
  for (const auto& [size, cnt] : by_size) {
    report.per_set_size[size] = make_stat(cnt.first, cnt.second);
  }
  report.efficiency.mean_size = size_sum / static_cast<double>(n);
  report.efficiency.fraction_singleton =
      static_cast<double>(singletons) / static_cast<double>(n);
  report.efficiency.fraction_full =
      static_cast<double>(full_sets) / static_cast<double>(n);
  return report;
}

std::map<std::size_t, double> set_size_coverage(
    const std::vector<PredictionSet>& sets, const LabeledDataset& ds) {
  check_alignment(sets, ds);
  std::map<std::size_t, std::pair<std::size_t, std::size_t>> by_size;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    auto& sz = by_size[sets[i].members.size()];
    sz.first += set_contains(sets[i], ds.records[i].label);
    ++sz.second;
  }
  std::map<std::size_t, double> out;
  for (const auto& [size, cnt] : by_size) {
    out[size] = static_cast<double>(cnt.first) / static_cast<double>(cnt.second);
  }
  return out;
}

std::pair<std::vector<std::vector<int>>, double> superclass_collapse(
    const std::vector<PredictionSet>& sets,
    const std::map<int, int>& taxonomy) {
  std::vector<std::vector<int>> collapsed;
  collapsed.reserve(sets.size());
  std::size_t informative = 0;
  for (const auto& set : sets) {
    std::vector<int> supers;
    for (int member : set.members) {
      auto it = taxonomy.find(member);
      if (it == taxonomy.end()) {
        throw ValidationError("class " + std::to_string(member) +
                              " has no superclass");
      }
      supers.push_back(it->second);
    }
    std::sort(supers.begin(), supers.end());
    supers.erase(std::unique(supers.begin(), supers.end()), supers.end());
    informative += supers.size() == 1;
    collapsed.push_back(std::move(supers));
  }
  const double informativeness =
      sets.empty() ? 0.0
                   : static_cast<double>(informative) /
                         static_cast<double>(sets.size());
  return {std::move(collapsed), informativeness};
}

namespace {

// Shared sweep engine: per evaluation record, precompute the descending
// prefix sums once, then answer (size, covered) for every threshold in
// O(log K). Randomization u is drawn once per record so a sweep sees nested
// sets, matching predict_sets at each individual alpha.
struct SweepData {
  // adjusted[r] = prefix score of the rank-r class (u applied when randomized)
  std::vector<std::vector<double>> adjusted;
  std::vector<std::size_t> label_rank;
  std::vector<int> argmax;
  std::vector<int> labels;
  std::size_t k = 0;
};

SweepData prepare_sweep(const LabeledDataset& eval, const ScoreConfig& cfg) {
  SweepData data;
  data.k = static_cast<std::size_t>(eval.num_classes());
  Rng rng(mix_seed(cfg.seed, 1));
  data.adjusted.reserve(eval.records.size());
  for (const auto& rec : eval.records) {
    std::optional<double> u;
    if (cfg.randomized) u = rng.uniform();
    std::vector<int> order(rec.probs.size());
    for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<int>(i);
    std::sort(order.begin(), order.end(), [&](int a, int b) {
      if (rec.probs[a] != rec.probs[b]) return rec.probs[a] > rec.probs[b];
      return a < b;
    });
    std::vector<double> adj(order.size());
    double prefix = 0.0;
    std::size_t label_rank = 0;
    for (std::size_t r = 0; r < order.size(); ++r) {
      prefix += rec.probs[order[r]];
      // Last prefix is the whole mass, exactly 1; same pin as aps_score.
      double s = r + 1 == order.size() ? 1.0 : prefix;
      if (u) s -= *u * rec.probs[order[r]];
      adj[r] = std::clamp(s, 0.0, 1.0);
      if (order[r] == rec.label) label_rank = r;
    }
    data.adjusted.push_back(std::move(adj));
    data.label_rank.push_back(label_rank);
    data.argmax.push_back(order[0]);
    data.labels.push_back(rec.label);
  }
  return data;
}

struct SweepPoint {
  double coverage = 0.0;
  double mean_size = 0.0;
  double fraction_singleton = 0.0;
};

SweepPoint evaluate_tau(const SweepData& data, double tau) {
  const std::size_t n = data.adjusted.size();
  std::size_t covered = 0;
  std::size_t singletons = 0;
  double size_sum = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto& adj = data.adjusted[i];
    std::size_t size;
    bool cov;
    if (tau >= 1.0) {
      size = data.k;
      cov = true;
    } else {
      // adjusted prefixes are nondecreasing, so membership is a prefix
      size = static_cast<std::size_t>(
          std::upper_bound(adj.begin(), adj.end(), tau) - adj.begin());
      if (size == 0) {
        size = 1;  // forced argmax
        cov = data.labels[i] == data.argmax[i];
      } else {
        cov = adj[data.label_rank[i]] <= tau;
      }
    }
    covered += cov;
    singletons += size == 1;
    size_sum += static_cast<double>(size);
  }
  SweepPoint p;
  p.coverage = static_cast<double>(covered) / static_cast<double>(n);
  p.mean_size = size_sum / static_cast<double>(n);
  p.fraction_singleton = static_cast<double>(singletons) / static_cast<double>(n);
  return p;
}

void check_grid(const std::vector<double>& alphas) {
  if (alphas.empty()) throw ValidationError("alpha grid is empty");
  for (double a : alphas) {
    if (!(a > 0.0) || !(a < 1.0)) {
      throw ValidationError("alpha grid values must lie in (0,1)");
    }
  }
}

}  // namespace

CalibrationCurve calibration_curve(const LabeledDataset& cal,
                                   const LabeledDataset& eval,
                                   const std::vector<double>& alphas,
                                   const ScoreConfig& cfg) {
  check_grid(alphas);
  const auto cal_scores = score_dataset(cal, cfg);
  const auto data = prepare_sweep(eval, cfg);
  std::vector<double> sorted_alphas(alphas);
  std::sort(sorted_alphas.begin(), sorted_alphas.end(), std::greater<>());
  CalibrationCurve curve;
  for (double alpha : sorted_alphas) {
    const auto calib = calibrate(cal_scores, alpha);
    const auto point = evaluate_tau(data, calib.tau);
    curve.points.push_back({1.0 - alpha, point.coverage, point.mean_size});
  }
  return curve;
}

std::vector<EfficiencyCurvePoint> efficiency_curve(
    const LabeledDataset& cal, const LabeledDataset& eval,
    const std::vector<double>& alphas, const ScoreConfig& cfg) {
  check_grid(alphas);
  const auto cal_scores = score_dataset(cal, cfg);
  const auto data = prepare_sweep(eval, cfg);
  std::vector<double> sorted_alphas(alphas);
  std::sort(sorted_alphas.begin(), sorted_alphas.end(), std::greater<>());
  std::vector<EfficiencyCurvePoint> out;
  for (double alpha : sorted_alphas) {
    const auto calib = calibrate(cal_scores, alpha);
    const auto point = evaluate_tau(data, calib.tau);
    out.push_back({1.0 - alpha, point.fraction_singleton, point.mean_size});
  }
  return out;
}

std::vector<double> default_alpha_grid(double accuracy) {
  // 50 evenly spaced coverage targets from the model's accuracy to 0.999.
  const double lo = std::clamp(accuracy, 0.001, 0.998);
  const double hi = 0.999;
  std::vector<double> alphas;
  for (int i = 0; i < 50; ++i) {
    double target = lo + (hi - lo) * static_cast<double>(i) / 49.0;
    alphas.push_back(1.0 - target);
  }
  return alphas;
}

}  // namespace cpaudit
