#include "cpaudit/selective.hpp"

#include <algorithm>
#include <cmath>

#include "cpaudit/stats.hpp"

namespace cpaudit {

namespace {

void check_delta(double delta) {
  if (!(delta > 0.0) || !(delta < 1.0)) {
    throw ValidationError("delta must be in (0,1)");
  }
}

struct ConfidenceData {
  std::vector<double> max_probs;  // sorted ascending
  std::vector<char> correct;      // aligned with max_probs
};

ConfidenceData confidence_data(const LabeledDataset& ds) {
  if (ds.records.empty()) throw ValidationError("dataset has no records");
  std::vector<std::pair<double, char>> rows;
  rows.reserve(ds.records.size());
  for (const auto& rec : ds.records) {
    const int top = argmax_class(rec.probs);
    rows.emplace_back(rec.probs[top], top == rec.label ? 1 : 0);
  }
  std::sort(rows.begin(), rows.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  ConfidenceData data;
  data.max_probs.reserve(rows.size());
  data.correct.reserve(rows.size());
  for (const auto& [p, c] : rows) {
    data.max_probs.push_back(p);
    data.correct.push_back(c);
  }
  return data;
}

struct KeptStat {
  std::size_t n_kept = 0;
  std::size_t n_correct = 0;
};

// Records with max_prob >= lambda, via binary search on the sorted data plus
// a suffix-sum of correct counts.
KeptStat kept_at(const ConfidenceData& data,
                 const std::vector<std::size_t>& correct_suffix,
                 double lambda) {
  const auto it = std::lower_bound(data.max_probs.begin(),
                                   data.max_probs.end(), lambda);
  const auto first = static_cast<std::size_t>(it - data.max_probs.begin());
  KeptStat s;
  s.n_kept = data.max_probs.size() - first;
  s.n_correct = correct_suffix[first];
  return s;
}

std::vector<std::size_t> make_correct_suffix(const ConfidenceData& data) {
  std::vector<std::size_t> suffix(data.correct.size() + 1, 0);
  for (std::size_t i = data.correct.size(); i > 0; --i) {
    suffix[i - 1] = suffix[i] + static_cast<std::size_t>(data.correct[i - 1]);
  }
  return suffix;
}

double lower_bound_of(BoundKind kind, std::uint64_t correct, std::uint64_t n,
                      double delta) {
  if (n == 0) return 0.0;
  return kind == BoundKind::hoeffding ? hoeffding_lcb(correct, n, delta)
                                      : clopper_pearson_lower(correct, n, delta);
}

}  // namespace

double hoeffding_lcb(std::uint64_t correct, std::uint64_t n, double delta) {
  check_delta(delta);
  if (n == 0) throw ValidationError("hoeffding_lcb: n must be positive");
  if (correct > n) throw ValidationError("hoeffding_lcb: correct exceeds n");
  const double acc =
      static_cast<double>(correct) / static_cast<double>(n);
  const double penalty =
      std::sqrt(std::log(1.0 / delta) / (2.0 * static_cast<double>(n)));
  return std::max(0.0, acc - penalty);
}

SelectiveCurve selective_curve(const LabeledDataset& ds,
                               const SelectiveConfig& cfg) {
  check_delta(cfg.delta);
  const auto grid = cfg.grid.empty() ? default_lambda_grid(ds) : cfg.grid;
  const auto data = confidence_data(ds);
  const auto suffix = make_correct_suffix(data);
  const double n = static_cast<double>(data.max_probs.size());

  std::vector<double> ascending(grid);
  std::sort(ascending.begin(), ascending.end());
  SelectiveCurve curve;
  curve.delta = cfg.delta;
  for (double lambda : ascending) {
    const auto kept = kept_at(data, suffix, lambda);
    SelectivePoint p;
    p.lambda = lambda;
    p.n_kept = kept.n_kept;
    p.rejection_fraction = 1.0 - static_cast<double>(kept.n_kept) / n;
    p.empirical_accuracy =
        kept.n_kept == 0 ? 0.0
                         : static_cast<double>(kept.n_correct) /
                               static_cast<double>(kept.n_kept);
    p.lower_bound =
        lower_bound_of(cfg.bound, kept.n_correct, kept.n_kept, cfg.delta);
    curve.points.push_back(p);
  }
  return curve;
}

std::optional<std::pair<double, double>> choose_lambda(
    const LabeledDataset& ds, const SelectiveConfig& cfg) {
  check_delta(cfg.delta);
  if (!cfg.target_accuracy) {
    throw ValidationError("choose_lambda: target_accuracy is required");
  }
  const auto grid = cfg.grid.empty() ? default_lambda_grid(ds) : cfg.grid;
  if (grid.empty()) throw ValidationError("choose_lambda: empty grid");
  for (std::size_t i = 1; i < grid.size(); ++i) {
    if (grid[i] > grid[i - 1]) {
      throw ValidationError("choose_lambda: grid must be sorted descending");
    }
  }
  const auto data = confidence_data(ds);
  const auto suffix = make_correct_suffix(data);
  std::optional<std::pair<double, double>> best;
  for (double lambda : grid) {
    const auto kept = kept_at(data, suffix, lambda);
    const double bound =
        lower_bound_of(cfg.bound, kept.n_correct, kept.n_kept, cfg.delta);
    if (bound < *cfg.target_accuracy) break;  // first failure stops the sequence
    best = {lambda, bound};
  }
  return best;
}

std::vector<double> default_lambda_grid(const LabeledDataset& ds) {
  const auto data = confidence_data(ds);
  const std::size_t n = data.max_probs.size();
  std::vector<double> grid;
  grid.reserve(101);
  for (int q = 100; q >= 0; --q) {
    const double pos = static_cast<double>(q) / 100.0 *
                       static_cast<double>(n - 1);
    grid.push_back(data.max_probs[static_cast<std::size_t>(pos + 0.5)]);
  }
  return grid;  // descending because the quantile levels descend
}

SizeOneMisuseReport size_one_misuse_demo(const LabeledDataset& ds,
                                         const ScoreConfig& cfg) {
  if (ds.records.size() < 4) {
    throw ValidationError("size_one_misuse_demo: dataset too small");
  }
  // Half for conformal calibration, half shared by both methods as the
  // evaluation split.
  SplitSpec split{ds.records.size() / 2, mix_seed(cfg.seed, 100), false};
  const auto [cal, eval] = split_dataset(ds, split);
  const auto cal_scores = score_dataset(cal, cfg);
  const auto data = confidence_data(eval);
  const auto suffix = make_correct_suffix(data);
  const double n = static_cast<double>(eval.records.size());

  SizeOneMisuseReport report;
  report.delta = 0.05;
  const std::vector<double> alphas = {0.02, 0.05, 0.10, 0.15, 0.20, 0.25,
                                      0.30, 0.35, 0.40, 0.45, 0.50};
  for (double alpha : alphas) {
    const auto calib = calibrate(cal_scores, alpha);
    const auto sets = predict_sets(eval, calib, cfg);
    std::size_t n1 = 0;
    std::size_t n1_correct = 0;
    for (std::size_t i = 0; i < sets.size(); ++i) {
      if (sets[i].members.size() != 1) continue;
      ++n1;
      n1_correct += sets[i].members[0] == eval.records[i].label;
    }
    SizeOneRow row;
    row.alpha = alpha;
    row.n_size_one = n1;
    row.fraction_size_one = static_cast<double>(n1) / n;
    row.size_one_accuracy =
        n1 == 0 ? 0.0
                : static_cast<double>(n1_correct) / static_cast<double>(n1);
    // The lambda whose rejection fraction matches the singleton fraction:
    // keep the top fraction_size_one of records by confidence.
    const std::size_t keep = n1;
    const std::size_t first = eval.records.size() - keep;
    row.matched_lambda = keep == 0 ? 1.0 : data.max_probs[first];
    const auto kept = kept_at(data, suffix, row.matched_lambda);
    row.selective_accuracy =
        kept.n_kept == 0 ? 0.0
                         : static_cast<double>(kept.n_correct) /
                               static_cast<double>(kept.n_kept);
    row.selective_lower_bound = lower_bound_of(
        BoundKind::hoeffding, kept.n_correct, kept.n_kept, report.delta);
    report.rows.push_back(row);
  }
  return report;
}

}  // namespace cpaudit
