#pragma once

#include <cstdint>
#include <string>

#include <json.hpp>

namespace cpaudit {

// Desk-scale reproductions of the ways split-conformal outputs get
// misread in practice. Each demo builds synthetic data where the failure
// provably occurs, measures it, applies the documented remedy, and reports
// a verdict: PASS means the failure reproduced and the remedy held.
inline constexpr const char* kPitfallSlugs[] = {
    "per-class-undercoverage",
    "label-shift",
    "size-one-misuse",
    "few-class-informativeness",
};

struct PitfallConfig {
  std::uint64_t seed = 0;
  double alpha = 0.1;
  double delta = 0.05;
  std::string only;     // comma-separated slugs; empty runs all four
  unsigned threads = 1; // trial-level parallelism, output independent of it
};

// Returns {alpha, delta, seed, pitfalls: {slug: {..., checks, verdict}},
// all_pass}. Byte-stable for fixed config: no timestamps, sorted keys.
nlohmann::json run_pitfalls(const PitfallConfig& cfg);

}  // namespace cpaudit
