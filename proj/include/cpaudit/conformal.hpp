#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cpaudit/dataset.hpp"

namespace cpaudit {

struct ScoreConfig {
  bool randomized = false;  // deterministic scores are the default
  double alpha = 0.1;
  std::uint64_t seed = 0;  // drives the randomization variables only
};

enum class CalibrationVariant { plain, weighted, mondrian };

struct PartitionThreshold {
  double tau = 1.0;
  std::size_t n = 0;
};

struct CalibrationResult {
  double tau = 1.0;
  std::size_t n_cal = 0;
  double alpha = 0.0;
  CalibrationVariant variant = CalibrationVariant::plain;
  bool randomized = false;
  // "" for plain/weighted, "class", or "group:<attr>[,<attr>...]".
  std::string partition;
  // Keyed by class index ("3") or by "attr=value[|attr=value...]".
  std::map<std::string, PartitionThreshold> partition_thresholds;
  std::vector<double> weights_used;  // nonempty only for weighted
};

struct PredictionSet {
  std::vector<int> members;  // sorted ascending, never empty
  std::optional<double> score_of_label;  // filled when the label is known
  std::string record_id;
};

struct Partition {
  enum class Kind { by_class, by_group };
  Kind kind = Kind::by_class;
  // Comma-separated attribute list for by_group; combinations are keyed by
  // concatenation, e.g. "site=A|scanner=X".
  std::string attributes;
};

// Conformity score: cumulative probability mass of the descending-sorted
// classes up to and including `label` (ties broken by ascending class
// index). The randomized variant subtracts u * probs[label].
double aps_score(const std::vector<double>& probs, int label,
                 std::optional<double> u = std::nullopt);

// Conservative split-conformal quantile: tau is the ceil((n+1)(1-alpha))-th
// smallest score, or 1 when that rank exceeds n (sets saturate to the full
// label set rather than failing on small calibration sets).
CalibrationResult calibrate(const std::vector<double>& scores, double alpha);

// Weighted conformal quantile: the smallest score t with
//   sum(w_i for s_i <= t) / (sum(w) + max(w)) >= 1 - alpha,
// or 1 when no score qualifies. The max-weight term in the denominator is
// the test point's weight placed at +infinity; with equal weights this
// reduces exactly to calibrate.
CalibrationResult weighted_calibrate(const std::vector<double>& scores,
                                     const std::vector<double>& weights,
                                     double alpha);

// Per-cell calibrate over a class or group partition. Every cell must be
// nonempty; errors name the offending cell.
CalibrationResult mondrian_calibrate(const LabeledDataset& cal,
                                     const Partition& partition,
                                     const ScoreConfig& cfg);

// Membership rule: members = { y : aps_score(probs, y, u) <= tau }, with the
// argmax force-included when the set would otherwise be empty. For by-class
// Mondrian results each candidate label is tested against its own class
// threshold and `key` must be absent; for by-group results `key` selects the
// threshold and is required.
PredictionSet predict_set(const std::vector<double>& probs,
                          const CalibrationResult& calib,
                          const std::optional<std::string>& key = std::nullopt,
                          std::optional<double> u = std::nullopt);

// Batch helpers aligned with ds.records. Group keys are derived from each
// record's attributes; randomization draws one u per record from cfg.seed
// (calibration and prediction use distinct substreams).
std::vector<double> score_dataset(const LabeledDataset& ds,
                                  const ScoreConfig& cfg);
std::vector<PredictionSet> predict_sets(const LabeledDataset& ds,
                                        const CalibrationResult& calib,
                                        const ScoreConfig& cfg);

// Partition key of one record (class index string or "attr=value|..." form).
std::string partition_key(const PredictionRecord& rec,
                          const Partition& partition);

Partition parse_partition(const std::string& text);  // "class" / "group:attr"

bool set_contains(const PredictionSet& set, int label);

}  // namespace cpaudit
