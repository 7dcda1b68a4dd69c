#pragma once

#include <cstddef>
#include <cstdint>

namespace fraigbmc {

enum class ConstraintMode : uint8_t { Off, Filter, Sample, Auto };

struct BmcOptions {
  size_t max_bound = 100;
  bool fraig = true;
  bool same_phase_only = false;
  uint32_t ec_limit = 8;
  uint32_t sim_words = 4;     // base simulation width, 64 patterns per word
  uint32_t refine_batch = 64; // refinement columns per re-simulation
  uint64_t seed = 1;
  ConstraintMode constraint_mode = ConstraintMode::Auto;
  uint32_t min_patterns = 64;
  uint32_t max_rounds = 4;
  int64_t equiv_conflict_budget = 1000;
  double time_limit_seconds = 0; // 0 = unlimited
};

} // namespace fraigbmc
