#pragma once

#include <map>
#include <utility>
#include <vector>

#include "cpaudit/conformal.hpp"
#include "cpaudit/dataset.hpp"
#include "cpaudit/stats.hpp"

namespace cpaudit {

struct StratumStat {
  double rate = 0.0;
  Interval ci;  // exact binomial, 95%
  std::size_t n = 0;
};

struct EfficiencyStats {
  double mean_size = 0.0;
  double fraction_singleton = 0.0;
  double fraction_full = 0.0;
};

// Stratified empirical coverage. Strata with n=0 are omitted rather than
// reported as zero so absent subgroups are not fabricated.
struct CoverageReport {
  StratumStat marginal;
  std::map<int, StratumStat> per_class;
  std::map<std::string, StratumStat> per_group;  // keys "attr=value"
  std::map<std::size_t, StratumStat> per_set_size;
  EfficiencyStats efficiency;
  double alpha = 0.0;
};

struct CalibrationCurvePoint {
  double target = 0.0;     // 1 - alpha
  double empirical = 0.0;  // coverage on the evaluation split
  double mean_size = 0.0;
};

struct CalibrationCurve {
  std::vector<CalibrationCurvePoint> points;  // increasing target
};

struct EfficiencyCurvePoint {
  double target = 0.0;
  double fraction_singleton = 0.0;
  double mean_size = 0.0;
};

CoverageReport coverage_report(const std::vector<PredictionSet>& sets,
                               const LabeledDataset& ds, double alpha);

// Calibrates on `cal` at every alpha in the grid and measures empirical
// coverage and mean set size on `eval`. Points are returned in increasing
// target coverage.
CalibrationCurve calibration_curve(const LabeledDataset& cal,
                                   const LabeledDataset& eval,
                                   const std::vector<double>& alphas,
                                   const ScoreConfig& cfg);

std::map<std::size_t, double> set_size_coverage(
    const std::vector<PredictionSet>& sets, const LabeledDataset& ds);

// Maps every set through the taxonomy (duplicates removed). The second
// element is the informativeness: the fraction of collapsed sets with
// exactly one superclass.
std::pair<std::vector<std::vector<int>>, double> superclass_collapse(
    const std::vector<PredictionSet>& sets, const std::map<int, int>& taxonomy);

std::vector<EfficiencyCurvePoint> efficiency_curve(
    const LabeledDataset& cal, const LabeledDataset& eval,
    const std::vector<double>& alphas, const ScoreConfig& cfg);

// 50 evenly spaced coverage targets from the model's accuracy to 0.999,
// returned as alphas (1 - target), descending alpha / increasing target.
std::vector<double> default_alpha_grid(double accuracy);

}  // namespace cpaudit
