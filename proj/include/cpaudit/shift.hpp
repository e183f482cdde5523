#pragma once

#include <cstdint>
#include <vector>

#include "cpaudit/audit.hpp"
#include "cpaudit/conformal.hpp"
#include "cpaudit/dataset.hpp"

namespace cpaudit {

struct ShiftSpec {
  enum class Kind { label_shift, score_shift };
  Kind kind = Kind::label_shift;
  // label_shift: target class distribution (simplex over K).
  std::vector<double> target;
  // score_shift: probs are raised to 1/temperature, multiplied by seeded
  // log-space noise of scale noise_scale, and renormalized. Labels are
  // unchanged. This is a surrogate for cross-site drift, not a reproduction
  // of any real shift.
  double temperature = 1.0;
  double noise_scale = 0.0;
  std::uint64_t seed = 0;
  // Output size for label_shift resampling; 0 means keep the input size.
  std::size_t size = 0;
};

struct ShiftExperimentResult {
  double coverage_before = 0.0;
  double coverage_after_shift = 0.0;
  double coverage_after_recalibration = 0.0;
  double alpha = 0.0;
  std::size_t n_recal = 0;
  CoverageReport report_before;
  CoverageReport report_after;
  CoverageReport report_recal;
};

LabeledDataset apply_shift(const LabeledDataset& ds, const ShiftSpec& spec);

// Spec seed perturbed per experiment seed; shift_experiment applies this
// internally, and callers reproducing its shifted pool must do the same.
ShiftSpec with_trial_seed(ShiftSpec spec, std::uint64_t seed);

// Protocol: calibrate on `cal`; measure eval coverage (before); build the
// shifted pool from `eval`; carve the first n_recal shifted records out as
// the recalibration set (disjoint from the shifted evaluation remainder,
// which exchangeability of the re-established guarantee requires); measure
// shifted coverage with the original threshold (after) and with the
// recalibrated threshold (after recalibration).
ShiftExperimentResult shift_experiment(const LabeledDataset& cal,
                                       const LabeledDataset& eval,
                                       const ShiftSpec& spec,
                                       const ScoreConfig& cfg,
                                       std::size_t n_recal,
                                       std::uint64_t seed);

// Per-class weights target[k] / empirical_cal[k] for weighted_calibrate.
std::vector<double> label_shift_weights(const LabeledDataset& cal,
                                        const std::vector<double>& target);

// Default adversarial target: the empirically worst-covered class's share
// is tripled (capped at 0.9) and the rest rescaled, maximizing the
// demonstrated violation deterministically.
std::vector<double> adversarial_label_target(const LabeledDataset& cal,
                                             const LabeledDataset& eval,
                                             const ScoreConfig& cfg);

}  // namespace cpaudit
