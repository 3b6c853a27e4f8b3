#pragma once

#include <cstdint>
#include <iosfwd>

#include "dra/array_config.hpp"
#include "dra/config_file.hpp"
#include "dra/dataset.hpp"
#include "dra/ga.hpp"
#include "dra/objective.hpp"

namespace dra {

// Uniform sampling ranges for beam targets. Coupled draws keep targets
// physically reachable: the elevation beamwidth tracks the azimuth one, the
// active-port count tracks the beamwidth (wider beams need smaller apertures),
// and the EIRP target is anchored to what a centered disc of that size
// actually radiates at the drawn steering.
struct SamplerRanges {
  double bw_az_lo_deg = 0.45;
  double bw_az_hi_deg = 0.85;
  double bw_ratio_lo = 0.92;  // bw_el / bw_az
  double bw_ratio_hi = 1.08;
  double sll_lo_db = -20.0;
  double sll_hi_db = -14.0;
  double sll_el_jitter_db = 1.5;  // elevation target = azimuth + U[-j, j]
  double steer_max_deg = 6.0;     // each axis, U[-max, max]
  double fill_lo = 0.55;          // disc fill factor for the port-count draw
  double fill_hi = 0.95;
  int n_active_lo = 104;
  int n_active_hi = 1296;
  double eirp_jitter_db = 0.5;
  double accept_cost_threshold = 0.3;

  void validate(const ArrayConfig& cfg) const;
  static SamplerRanges from_config(const KeyValueConfig& c);
};

// Draw the i-th beam target of a seeded sequence (used by generate_dataset;
// exposed for tests and for spec-only sampling).
BeamSpec sample_spec(const SamplerRanges& r, const ArrayConfig& cfg,
                     BeamEvaluator& eval, std::uint64_t seed, std::uint64_t index);

// Draw n_samples beam targets, label each with a GA-optimized weight matrix,
// and gate acceptance on the final cost. Rejected samples are retained with
// accepted = false. Deterministic for a fixed seed. `progress`, when given,
// receives one `sample,cost,accepted,wall_s` CSV line per sample. Throws
// DataError when no sample passes the gate.
Dataset generate_dataset(const SamplerRanges& ranges, int n_samples,
                         const ArrayConfig& cfg, const CostWeights& kw,
                         const GaParams& gp, std::uint64_t seed,
                         std::ostream* progress = nullptr);

}  // namespace dra
