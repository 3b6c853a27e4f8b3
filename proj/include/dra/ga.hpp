#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "dra/array_config.hpp"
#include "dra/config_file.hpp"
#include "dra/objective.hpp"
#include "dra/pattern.hpp"
#include "dra/weight_matrix.hpp"

namespace dra {

inline constexpr int kQuadrantAxis = 18;   // quadrant side for a 36-port array
inline constexpr int kQuadrantBits = 324;  // 18*18 genes per chromosome

struct GaParams {
  int population_size = 64;
  int max_generations = 200;
  double crossover_rate = 0.9;
  double mutation_rate = 1.0 / 324.0;  // per bit
  int elitism_count = 2;
  int tournament_size = 3;
  int convergence_patience = 25;  // generations without best-cost improvement
  double convergence_cost_threshold = 0.3;  // best cost at/below => converged
  int polish_sweeps = 0;  // greedy single-bit improvement passes after the GA
  std::uint64_t rng_seed = 1;

  void validate() const;
  static GaParams from_config(const KeyValueConfig& c);
};

struct GaResult {
  WeightMatrix weights;
  BeamMetrics metrics;
  double cost = 0.0;
  int generations_run = 0;
  double wall_time_s = 0.0;
  bool converged = false;
};

// Mirror a quadrant bit block (row-major, kQuadrantAxis^2 bits) across both
// axes into full n_ports x n_ports weight bits. Quadrant cell (0,0) lands on
// the four matrix corners. Throws DataError on wrong length.
std::vector<std::uint8_t> expand_quadrant(const std::vector<std::uint8_t>& q,
                                          int n_ports = 36);

// Inverse of expand_quadrant: top-left quadrant block of the full bits.
std::vector<std::uint8_t> extract_quadrant(const std::vector<std::uint8_t>& full,
                                           int n_ports = 36);

// Quadrant bits of a centered disc with the given total active-port count
// (rounded to a multiple of 4): cells activated center-out by radial order.
std::vector<std::uint8_t> canonical_quadrant_disc(double n_active_target,
                                                  int n_ports = 36);

// Evolve quadrant thinning bits to minimize the synthesis cost for one beam
// target. Deterministic for a fixed seed. `progress`, when given, receives
// one `gen,best_cost,mean_cost,wall_s` CSV line per generation.
GaResult ga_optimize(const BeamSpec& spec, const ArrayConfig& cfg,
                     const CostWeights& kw, const GaParams& gp,
                     std::ostream* progress = nullptr);

}  // namespace dra
