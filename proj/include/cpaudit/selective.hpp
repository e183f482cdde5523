#pragma once

#include <optional>
#include <vector>

#include "cpaudit/conformal.hpp"
#include "cpaudit/dataset.hpp"

namespace cpaudit {

enum class BoundKind {
  hoeffding,        // closed form, default
  clopper_pearson,  // exact binomial, uniformly tighter
};

struct SelectiveConfig {
  double delta = 0.05;
  std::optional<double> target_accuracy;  // required by choose_lambda
  std::vector<double> grid;               // candidate lambdas, sorted descending
  BoundKind bound = BoundKind::hoeffding;
};

struct SelectivePoint {
  double lambda = 0.0;
  double rejection_fraction = 0.0;
  std::size_t n_kept = 0;
  double empirical_accuracy = 0.0;  // 0 when nothing is kept
  double lower_bound = 0.0;
};

struct SelectiveCurve {
  std::vector<SelectivePoint> points;  // ascending lambda, so rejection is
                                       // nondecreasing along the list
  double delta = 0.0;
};

// max(0, correct/n - sqrt(ln(1/delta) / (2n))): a lower confidence bound on
// accuracy valid with probability >= 1 - delta.
double hoeffding_lcb(std::uint64_t correct, std::uint64_t n, double delta);

// Display curve with POINTWISE bounds: each point is individually valid at
// level delta, but reading the whole curve and picking its best point is
// multiple testing and carries no joint guarantee. Certification must go
// through choose_lambda.
SelectiveCurve selective_curve(const LabeledDataset& ds,
                               const SelectiveConfig& cfg);

// Fixed-sequence certification: traverse the grid in its descending order,
// testing lower_bound >= target_accuracy at full delta each time (no
// splitting; fixed-sequence testing spends delta once along a pre-declared
// path). Returns the smallest lambda whose predecessors all passed, with its
// certified bound, or nullopt if the first test already fails.
std::optional<std::pair<double, double>> choose_lambda(
    const LabeledDataset& ds, const SelectiveConfig& cfg);

// Default grid: 101 thresholds at the empirical quantiles of the max-prob
// values, descending, so resolution adapts to the confidence distribution.
std::vector<double> default_lambda_grid(const LabeledDataset& ds);

struct SizeOneRow {
  double alpha = 0.0;
  double fraction_size_one = 0.0;
  std::size_t n_size_one = 0;
  double size_one_accuracy = 0.0;  // 0 when no singletons exist
  double matched_lambda = 0.0;     // lambda with matching rejection fraction
  double selective_accuracy = 0.0;
  double selective_lower_bound = 0.0;
};

struct SizeOneMisuseReport {
  std::vector<SizeOneRow> rows;  // one per alpha in the sweep
  double delta = 0.0;
};

// Side-by-side demonstration that size-1 conformal sets are not a selective
// classifier: sweeps alpha, reports the singleton fraction and accuracy CP
// happens to produce, and next to each row the selective classifier at the
// matched rejection fraction, where lambda is an actual control knob and the
// accuracy carries a bound.
SizeOneMisuseReport size_one_misuse_demo(const LabeledDataset& ds,
                                         const ScoreConfig& cfg);

}  // namespace cpaudit
