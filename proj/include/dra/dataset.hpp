#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "dra/objective.hpp"
#include "dra/pattern.hpp"

namespace dra {

enum class Split : std::uint8_t {
  Unassigned = 0,
  Train = 1,
  Test = 2,
  Validation = 3,
};

const char* split_name(Split s);
Split split_from_name(const std::string& name);  // DataError on unknown name

// One labeled record: the drawn beam target, the optimizer's quadrant bits,
// what those bits actually achieve, and bookkeeping flags.
struct Sample {
  BeamSpec spec;
  std::vector<std::uint8_t> quadrant_bits;
  BeamMetrics achieved;
  double cost = 0.0;
  bool accepted = false;
  Split split = Split::Unassigned;
};

struct Dataset {
  std::vector<Sample> samples;

  std::size_t count_split(Split s) const;
  std::size_t count_accepted() const;
  // Indices of accepted samples carrying the given split label.
  std::vector<std::size_t> split_indices(Split s) const;
  // Feature rows (spec vectors) of accepted samples in the given split.
  std::vector<std::array<double, BeamSpec::kFeatureCount>> feature_rows(
      Split s) const;
};

// Shuffle accepted samples by seed and assign train/test/validation labels
// with counts within one sample of the exact ratios (largest remainder).
// Rejected samples stay Unassigned. Throws ConfigError when the ratios do not
// sum to 1 (tolerance 1e-9) or are negative; DataError when fewer than 10
// accepted samples exist.
void assign_splits(Dataset& ds, double train_ratio, double test_ratio,
                   double validation_ratio, std::uint64_t seed);

}  // namespace dra
