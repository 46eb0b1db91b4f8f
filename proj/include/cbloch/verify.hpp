#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace cbloch {

// default seed for every randomized check, so reruns are reproducible
inline constexpr std::uint64_t kDefaultSeed = 20240917;

struct CriterionResult {
  int id = 0;
  std::string name;
  bool passed = false;
  std::string detail;  // worst margins when passing, first failures otherwise
};

// The end-to-end certification suite. Each criterion exercises one
// cross-module contract (phase routes, gate synthesis, non-unitary
// evolution, deviation laws, geometry, the two-atom protocol) against
// closed forms and independent reconstructions, and reports how close
// the worst residual came to its tolerance.
std::vector<CriterionResult> run_certification(std::uint64_t seed = kDefaultSeed);

}  // namespace cbloch
