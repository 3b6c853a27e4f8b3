#pragma once

#include <array>

#include "dra/array_config.hpp"
#include "dra/pattern.hpp"

namespace dra {

// Target description of one beam: what the synthesized pattern should achieve.
// Doubles as the 8-feature input vector of the learning models.
struct BeamSpec {
  double bw_az_deg = 0.0;   // target -3 dB beamwidth, azimuth plane
  double bw_el_deg = 0.0;   // target -3 dB beamwidth, elevation plane
  double sll_az_db = 0.0;   // target sidelobe level, azimuth plane (negative)
  double sll_el_db = 0.0;   // target sidelobe level, elevation plane (negative)
  double eirp_dbw = 0.0;    // target EIRP
  double steer_az_deg = 0.0;
  double steer_el_deg = 0.0;
  double n_active = 0.0;  // target number of active ports

  static constexpr int kFeatureCount = 8;

  std::array<double, kFeatureCount> to_features() const;
  static BeamSpec from_features(const std::array<double, kFeatureCount>& f);

  // Throws ConfigError when a field is out of its documented domain.
  void validate(const ArrayConfig& cfg) const;
};

// Relative importance of the three error terms of the synthesis cost.
struct CostWeights {
  double k1 = 1.0;  // beamwidth error weight
  double k2 = 1.0;  // sidelobe-level error weight
  double k3 = 1.0;  // EIRP error weight

  void validate() const;  // all >= 0, not all zero
};

// Weighted sum of relative errors between achieved metrics and the target:
//   k1·(|Δbw_az|/bw_az + |Δbw_el|/bw_el)
// + k2·(|Δsll_az|/|sll_az| + |Δsll_el|/|sll_el|)
// + k3·(|Δeirp|/|eirp|)
// Nonnegative; zero exactly when every error term vanishes (positive weights).
// Throws DataError when a target denominator is zero.
double cost(const BeamMetrics& metrics, const BeamSpec& spec,
            const CostWeights& kw);

}  // namespace dra
