#include "cpaudit/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "cpaudit/random.hpp"

namespace cpaudit {

int argmax_class(const std::vector<double>& probs) {
  int best = 0;
  for (int i = 1; i < static_cast<int>(probs.size()); ++i) {
    if (probs[i] > probs[best]) best = i;
  }
  return best;
}

void validate_record(PredictionRecord& rec, int k, const std::string& where) {
  if (static_cast<int>(rec.probs.size()) != k) {
    throw ValidationError(where + ": expected " + std::to_string(k) +
                          " probabilities, got " +
                          std::to_string(rec.probs.size()));
  }
  if (k < 2) throw ValidationError(where + ": need at least 2 classes");
  double sum = 0.0;
  for (double p : rec.probs) {
    if (!(p >= 0.0) || p > 1.0 + kProbSumTolerance) {
      throw ValidationError(where + ": probability out of [0,1]");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > kProbSumTolerance) {
    throw ValidationError(where + ": probability-sum violation (sum " +
                          std::to_string(sum) + ")");
  }
  for (double& p : rec.probs) p /= sum;
  if (rec.label < 0 || rec.label >= k) {
    throw ValidationError(where + ": label " + std::to_string(rec.label) +
                          " out of range for K=" + std::to_string(k));
  }
}

void validate_dataset(LabeledDataset& ds) {
  if (ds.records.empty()) throw ValidationError("dataset has no records");
  const int k = ds.class_names.empty()
                    ? static_cast<int>(ds.records.front().probs.size())
                    : ds.num_classes();
  if (ds.class_names.empty()) {
    for (int c = 0; c < k; ++c)
      ds.class_names.push_back("class_" + std::to_string(c));
  }
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    validate_record(ds.records[i], k, "record " + std::to_string(i));
  }
  if (!ds.taxonomy.empty()) {
    for (int c = 0; c < k; ++c) {
      auto it = ds.taxonomy.find(c);
      if (it == ds.taxonomy.end()) {
        throw ValidationError("taxonomy missing class " + std::to_string(c));
      }
      if (it->second < 0) {
        throw ValidationError("taxonomy superclass negative for class " +
                              std::to_string(c));
      }
    }
  }
}

namespace {

LabeledDataset subset(const LabeledDataset& ds,
                      const std::vector<std::size_t>& idx) {
  LabeledDataset out;
  out.class_names = ds.class_names;
  out.taxonomy = ds.taxonomy;
  out.records.reserve(idx.size());
  for (std::size_t i : idx) out.records.push_back(ds.records[i]);
  return out;
}

}  // namespace

std::pair<LabeledDataset, LabeledDataset> split_dataset(
    const LabeledDataset& ds, const SplitSpec& spec) {
  const std::size_t n = ds.records.size();
  if (spec.calibration_size == 0 || spec.calibration_size >= n) {
    throw ValidationError("calibration_size must be in (0, dataset size)");
  }
  Rng rng(spec.seed);
  std::vector<std::size_t> cal_idx;
  if (!spec.stratify_by_class) {
    std::vector<std::size_t> idx(n);
    std::iota(idx.begin(), idx.end(), 0);
    rng.shuffle(idx);
    cal_idx.assign(idx.begin(),
                   idx.begin() + static_cast<std::ptrdiff_t>(spec.calibration_size));
  } else {
    const int k = ds.num_classes();
    std::vector<std::vector<std::size_t>> by_class(k);
    for (std::size_t i = 0; i < n; ++i)
      by_class[ds.records[i].label].push_back(i);
    // Largest-remainder allocation keeps per-class counts within rounding of
    // exact proportionality while summing to calibration_size.
    std::vector<std::size_t> alloc(k, 0);
    std::vector<std::pair<double, int>> frac;
    std::size_t assigned = 0;
    for (int c = 0; c < k; ++c) {
      double quota = static_cast<double>(spec.calibration_size) *
                     static_cast<double>(by_class[c].size()) /
                     static_cast<double>(n);
      alloc[c] = static_cast<std::size_t>(quota);
      assigned += alloc[c];
      frac.emplace_back(quota - static_cast<double>(alloc[c]), c);
    }
    std::sort(frac.begin(), frac.end(), [](const auto& a, const auto& b) {
      if (a.first != b.first) return a.first > b.first;
      return a.second < b.second;
    });
    std::size_t remaining = spec.calibration_size - assigned;
    for (std::size_t r = 0; remaining > 0; r = (r + 1) % frac.size()) {
      int c = frac[r].second;
      if (alloc[c] < by_class[c].size()) {
        ++alloc[c];
        --remaining;
      }
    }
    for (int c = 0; c < k; ++c) {
      rng.shuffle(by_class[c]);
      cal_idx.insert(cal_idx.end(), by_class[c].begin(),
                     by_class[c].begin() + static_cast<std::ptrdiff_t>(alloc[c]));
    }
  }
  std::sort(cal_idx.begin(), cal_idx.end());
  std::vector<char> in_cal(n, 0);
  for (std::size_t i : cal_idx) in_cal[i] = 1;
  std::vector<std::size_t> eval_idx;
  eval_idx.reserve(n - cal_idx.size());
  for (std::size_t i = 0; i < n; ++i) {
    if (!in_cal[i]) eval_idx.push_back(i);
  }
  return {subset(ds, cal_idx), subset(ds, eval_idx)};
}

LabeledDataset resample_weighted(const LabeledDataset& ds,
                                 const std::vector<double>& class_weights,
                                 std::size_t size, std::uint64_t seed) {
  const int k = ds.num_classes();
  if (static_cast<int>(class_weights.size()) != k) {
    throw ValidationError("class_weights length must equal K");
  }
  std::vector<std::size_t> class_counts(k, 0);
  for (const auto& r : ds.records) ++class_counts[r.label];
  for (int c = 0; c < k; ++c) {
    if (class_weights[c] < 0.0) {
      throw ValidationError("negative class weight for class " +
                            std::to_string(c));
    }
    if (class_weights[c] > 0.0 && class_counts[c] == 0) {
      throw ValidationError("positive weight on empty class " +
                            std::to_string(c));
    }
  }
  // Per-record cumulative weights; inverse-CDF draws via binary search.
  std::vector<double> cum(ds.records.size());
  double total = 0.0;
  for (std::size_t i = 0; i < ds.records.size(); ++i) {
    total += class_weights[ds.records[i].label];
    cum[i] = total;
  }
  if (total <= 0.0) throw ValidationError("all class weights are zero");
  Rng rng(seed);
  LabeledDataset out;
  out.class_names = ds.class_names;
  out.taxonomy = ds.taxonomy;
  out.records.reserve(size);
  for (std::size_t j = 0; j < size; ++j) {
    double target = rng.uniform() * total;
    auto it = std::upper_bound(cum.begin(), cum.end(), target);
    std::size_t i = it == cum.end() ? ds.records.size() - 1
                                    : static_cast<std::size_t>(it - cum.begin());
    out.records.push_back(ds.records[i]);
  }
  return out;
}

std::vector<double> empirical_class_distribution(const LabeledDataset& ds) {
  if (ds.records.empty()) throw ValidationError("dataset has no records");
  std::vector<double> dist(ds.num_classes(), 0.0);
  for (const auto& r : ds.records) dist[r.label] += 1.0;
  for (double& d : dist) d /= static_cast<double>(ds.records.size());
  return dist;
}

double top1_accuracy(const LabeledDataset& ds) {
  if (ds.records.empty()) throw ValidationError("dataset has no records");
  std::size_t correct = 0;
  for (const auto& r : ds.records) {
    if (argmax_class(r.probs) == r.label) ++correct;
  }
  return static_cast<double>(correct) / static_cast<double>(ds.records.size());
}

}  // namespace cpaudit
