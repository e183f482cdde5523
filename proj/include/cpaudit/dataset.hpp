#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "cpaudit/errors.hpp"

namespace cpaudit {

// One sample's model output: a probability vector over K classes, the true
// label, and optional flat group attributes (e.g. site=A).
struct PredictionRecord {
  std::string id;
  std::vector<double> probs;  // simplex; renormalized on validation
  int label = 0;
  std::map<std::string, std::string> groups;
};

struct LabeledDataset {
  std::vector<PredictionRecord> records;
  std::vector<std::string> class_names;
  // Optional class index -> superclass index map; empty means absent.
  std::map<int, int> taxonomy;

  int num_classes() const { return static_cast<int>(class_names.size()); }
  bool has_taxonomy() const { return !taxonomy.empty(); }
  std::size_t size() const { return records.size(); }
};

struct SplitSpec {
  std::size_t calibration_size = 0;
  std::uint64_t seed = 0;
  bool stratify_by_class = false;
};

// Probability rows may deviate from an exact simplex by at most this much;
// anything closer is renormalized, anything further is rejected.
inline constexpr double kProbSumTolerance = 1e-6;

// Validates one record against K and renormalizes probs to an exact simplex.
// `where` names the record in error messages (e.g. "row 7").
void validate_record(PredictionRecord& rec, int k, const std::string& where);

// Validates class count consistency, per-record invariants, and the taxonomy
// (when present, it must cover every class). Renormalizes in place.
void validate_dataset(LabeledDataset& ds);

// Disjoint calibration/evaluation partition. Identical seeds give identical
// splits; stratified mode preserves class proportions within rounding
// (largest-remainder allocation).
std::pair<LabeledDataset, LabeledDataset> split_dataset(
    const LabeledDataset& ds, const SplitSpec& spec);

// Draws `size` records with replacement, each with probability proportional
// to class_weights[label]. Deterministic given seed.
LabeledDataset resample_weighted(const LabeledDataset& ds,
                                 const std::vector<double>& class_weights,
                                 std::size_t size, std::uint64_t seed);

// Empirical class distribution (fractions summing to 1).
std::vector<double> empirical_class_distribution(const LabeledDataset& ds);

// Fraction of records whose argmax (lowest index on ties) equals the label.
double top1_accuracy(const LabeledDataset& ds);

// Lowest-index argmax of a probability vector.
int argmax_class(const std::vector<double>& probs);

}  // namespace cpaudit
