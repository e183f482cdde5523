#include "cpaudit/synth.hpp"

#include <cmath>
#include <cstdio>

#include "cpaudit/random.hpp"

namespace cpaudit {

namespace {

void check_config(const SynthConfig& cfg) {
  if (cfg.n == 0) throw ValidationError("synth: n must be positive");
  if (cfg.k < 2) throw ValidationError("synth: need at least 2 classes");
  if (static_cast<int>(cfg.class_priors.size()) != cfg.k) {
    throw ValidationError("synth: class_priors length must equal k");
  }
  double sum = 0.0;
  for (double p : cfg.class_priors) {
    if (p < 0.0) throw ValidationError("synth: negative class prior");
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw ValidationError("synth: class_priors must sum to 1");
  }
  if (static_cast<int>(cfg.concentration.size()) != cfg.k) {
    throw ValidationError("synth: concentration length must equal k");
  }
  for (double c : cfg.concentration) {
    if (!(c > 0.0)) throw ValidationError("synth: concentration must be positive");
  }
  for (const auto& spec : cfg.group_specs) {
    if (spec.attribute.empty()) {
      throw ValidationError("synth: group attribute name is empty");
    }
    if (spec.categories.empty()) {
      throw ValidationError("synth: group '" + spec.attribute +
                            "' has no categories");
    }
    double share_sum = 0.0;
    for (const auto& [name, share] : spec.categories) {
      if (share < 0.0) {
        throw ValidationError("synth: negative share in group '" +
                              spec.attribute + "'");
      }
      share_sum += share;
    }
    if (std::abs(share_sum - 1.0) > 1e-6) {
      throw ValidationError("synth: shares of group '" + spec.attribute +
                            "' must sum to 1");
    }
    for (const auto& [name, mult] : spec.multipliers) {
      if (!(mult > 0.0)) {
        throw ValidationError("synth: multiplier for '" + spec.attribute +
                              "=" + name + "' must be positive");
      }
    }
  }
}

}  // namespace

LabeledDataset generate(const SynthConfig& cfg) {
  check_config(cfg);
  Rng rng(cfg.seed);
  LabeledDataset ds;
  for (int c = 0; c < cfg.k; ++c) {
    ds.class_names.push_back("class_" + std::to_string(c));
  }
  ds.records.reserve(cfg.n);
  std::vector<double> alpha(static_cast<std::size_t>(cfg.k));
  char idbuf[24];
  for (std::size_t i = 0; i < cfg.n; ++i) {
    PredictionRecord rec;
    std::snprintf(idbuf, sizeof(idbuf), "r%06zu", i);
    rec.id = idbuf;
    rec.label = static_cast<int>(rng.categorical(cfg.class_priors));
    double multiplier = 1.0;
    for (const auto& spec : cfg.group_specs) {
      std::vector<double> shares;
      shares.reserve(spec.categories.size());
      for (const auto& [name, share] : spec.categories) shares.push_back(share);
      const auto cat = rng.categorical(shares);
      const std::string& cat_name = spec.categories[cat].first;
      rec.groups[spec.attribute] = cat_name;
      auto it = spec.multipliers.find(cat_name);
      if (it != spec.multipliers.end()) multiplier *= it->second;
    }
    std::fill(alpha.begin(), alpha.end(), 1.0);
    alpha[static_cast<std::size_t>(rec.label)] +=
        cfg.concentration[static_cast<std::size_t>(rec.label)] * multiplier;
    rec.probs = rng.dirichlet(alpha);
    ds.records.push_back(std::move(rec));
  }
  return ds;
}

SynthConfig basic_config(std::size_t n, int k, double concentration,
                         std::uint64_t seed) {
  SynthConfig cfg;
  cfg.n = n;
  cfg.k = k;
  cfg.class_priors.assign(static_cast<std::size_t>(k),
                          1.0 / static_cast<double>(k));
  cfg.concentration.assign(static_cast<std::size_t>(k), concentration);
  cfg.seed = seed;
  return cfg;
}

}  // namespace cpaudit
