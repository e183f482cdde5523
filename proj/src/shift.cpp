#include "cpaudit/shift.hpp"

#include <algorithm>
#include <cmath>

#include "cpaudit/random.hpp"

namespace cpaudit {

namespace {

void check_target(const std::vector<double>& target, int k) {
  if (static_cast<int>(target.size()) != k) {
    throw ValidationError("shift target length must equal K");
  }
  double sum = 0.0;
  for (double t : target) {
    if (t < 0.0) throw ValidationError("shift target has negative mass");
    sum += t;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw ValidationError("shift target does not sum to 1");
  }
}

double coverage_of(const std::vector<PredictionSet>& sets,
                   const LabeledDataset& ds) {
  std::size_t covered = 0;
  for (std::size_t i = 0; i < sets.size(); ++i) {
    covered += set_contains(sets[i], ds.records[i].label);
  }
  return static_cast<double>(covered) / static_cast<double>(sets.size());
}

}  // namespace

LabeledDataset apply_shift(const LabeledDataset& ds, const ShiftSpec& spec) {
  const int k = ds.num_classes();
  if (spec.kind == ShiftSpec::Kind::label_shift) {
    check_target(spec.target, k);
    const auto empirical = empirical_class_distribution(ds);
    std::vector<double> weights(k, 0.0);
    for (int c = 0; c < k; ++c) {
      if (spec.target[c] > 0.0 && empirical[c] == 0.0) {
        throw ValidationError("target mass on empty class " + std::to_string(c));
      }
      weights[c] = empirical[c] > 0.0 ? spec.target[c] / empirical[c] : 0.0;
    }
    const std::size_t size = spec.size == 0 ? ds.records.size() : spec.size;
    return resample_weighted(ds, weights, size, spec.seed);
  }
  if (!(spec.temperature > 0.0)) {
    throw ValidationError("temperature must be positive");
  }
  if (spec.noise_scale < 0.0) {
    throw ValidationError("noise_scale must be nonnegative");
  }
  Rng rng(spec.seed);
  LabeledDataset out = ds;
  for (auto& rec : out.records) {
    double sum = 0.0;
    for (double& p : rec.probs) {
      // Skip the identity transforms so temperature=1, noise=0 is bitwise
      // a no-op.
      if (spec.temperature != 1.0) p = std::pow(p, 1.0 / spec.temperature);
      if (spec.noise_scale > 0.0) p *= std::exp(spec.noise_scale * rng.normal());
      sum += p;
    }
    if (spec.temperature != 1.0 || spec.noise_scale > 0.0) {
      for (double& p : rec.probs) p /= sum;
    }
  }
  return out;
}

ShiftSpec with_trial_seed(ShiftSpec spec, std::uint64_t seed) {
  spec.seed = mix_seed(spec.seed, seed);
  return spec;
}

ShiftExperimentResult shift_experiment(const LabeledDataset& cal,
                                       const LabeledDataset& eval,
                                       const ShiftSpec& spec,
                                       const ScoreConfig& cfg,
                                       std::size_t n_recal,
                                       std::uint64_t seed) {
  const auto calib = calibrate(score_dataset(cal, cfg), cfg.alpha);
  const auto shifted = apply_shift(eval, with_trial_seed(spec, seed));
  if (shifted.records.size() <= n_recal) {
    throw ValidationError(
        "insufficient shifted data: need more than n_recal=" +
        std::to_string(n_recal) + " records, got " +
        std::to_string(shifted.records.size()));
  }
  LabeledDataset recal_ds;
  recal_ds.class_names = shifted.class_names;
  recal_ds.taxonomy = shifted.taxonomy;
  LabeledDataset shifted_eval = recal_ds;
  recal_ds.records.assign(shifted.records.begin(),
                          shifted.records.begin() +
                              static_cast<std::ptrdiff_t>(n_recal));
  shifted_eval.records.assign(shifted.records.begin() +
                                  static_cast<std::ptrdiff_t>(n_recal),
                              shifted.records.end());

  ShiftExperimentResult result;
  result.alpha = cfg.alpha;
  result.n_recal = n_recal;

  const auto sets_before = predict_sets(eval, calib, cfg);
  result.report_before = coverage_report(sets_before, eval, cfg.alpha);
  result.coverage_before = result.report_before.marginal.rate;

  const auto sets_after = predict_sets(shifted_eval, calib, cfg);
  result.report_after = coverage_report(sets_after, shifted_eval, cfg.alpha);
  result.coverage_after_shift = result.report_after.marginal.rate;

  const auto recalib = calibrate(score_dataset(recal_ds, cfg), cfg.alpha);
  const auto sets_recal = predict_sets(shifted_eval, recalib, cfg);
  result.report_recal = coverage_report(sets_recal, shifted_eval, cfg.alpha);
  result.coverage_after_recalibration = result.report_recal.marginal.rate;
  return result;
}

std::vector<double> label_shift_weights(const LabeledDataset& cal,
                                        const std::vector<double>& target) {
  const int k = cal.num_classes();
  check_target(target, k);
  const auto empirical = empirical_class_distribution(cal);
  std::vector<double> weights(k, 0.0);
  for (int c = 0; c < k; ++c) {
    if (target[c] > 0.0 && empirical[c] == 0.0) {
      throw ValidationError("target mass on class " + std::to_string(c) +
                            " absent from calibration");
    }
    weights[c] = empirical[c] > 0.0 ? target[c] / empirical[c] : 0.0;
  }
  return weights;
}

std::vector<double> adversarial_label_target(const LabeledDataset& cal,
                                             const LabeledDataset& eval,
                                             const ScoreConfig& cfg) {
  const auto calib = calibrate(score_dataset(cal, cfg), cfg.alpha);
  const auto sets = predict_sets(eval, calib, cfg);
  const auto report = coverage_report(sets, eval, cfg.alpha);
  if (report.per_class.empty()) {
    throw ValidationError("no class strata to pick a worst class from");
  }
  int worst = report.per_class.begin()->first;
  double worst_rate = report.per_class.begin()->second.rate;
  for (const auto& [cls, stat] : report.per_class) {
    if (stat.rate < worst_rate) {
      worst = cls;
      worst_rate = stat.rate;
    }
  }
  const auto empirical = empirical_class_distribution(eval);
  const double share = std::min(3.0 * empirical[worst], 0.9);
  std::vector<double> target(empirical.size(), 0.0);
  const double rest = 1.0 - empirical[worst];
  if (rest <= 0.0) {
    throw ValidationError("cannot shift: one class holds every evaluation record");
  }
  for (std::size_t c = 0; c < empirical.size(); ++c) {
    target[c] = c == static_cast<std::size_t>(worst)
                    ? share
                    : empirical[c] * (1.0 - share) / rest;
  }
  return target;
}

}  // namespace cpaudit
