#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "cpaudit/dataset.hpp"

namespace cpaudit {

// One group attribute: categories with sampling shares and per-category
// concentration multipliers. A multiplier below 1 makes the category harder
// (lower top-1 accuracy), which is the raw material for subgroup
// undercoverage demonstrations.
struct GroupSpec {
  std::string attribute;
  std::vector<std::pair<std::string, double>> categories;  // name, share
  std::map<std::string, double> multipliers;  // absent category -> 1.0
};

struct SynthConfig {
  std::size_t n = 0;
  int k = 0;
  std::vector<double> class_priors;    // simplex over k
  std::vector<double> concentration;   // per class, positive; higher = sharper
  std::vector<GroupSpec> group_specs;
  std::uint64_t seed = 0;
};

// Synthetic probabilistic classifier: label ~ class_priors; probs ~
// Dirichlet(1 + concentration[label] * group multiplier on the label
// coordinate, 1 elsewhere). Draw order per record is label, then each group
// spec's category in declaration order, then the Dirichlet, so output is
// bitwise-stable for a given seed.
LabeledDataset generate(const SynthConfig& cfg);

// Convenience: uniform priors and a shared concentration for all classes.
SynthConfig basic_config(std::size_t n, int k, double concentration,
                         std::uint64_t seed);

}  // namespace cpaudit
