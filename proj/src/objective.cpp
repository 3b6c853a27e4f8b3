#include "dra/objective.hpp"

#include <cmath>
#include <string>

#include "dra/errors.hpp"

namespace dra {

std::array<double, BeamSpec::kFeatureCount> BeamSpec::to_features() const {
  return {bw_az_deg,  bw_el_deg,    sll_az_db,    sll_el_db,
          eirp_dbw,   steer_az_deg, steer_el_deg, n_active};
}

BeamSpec BeamSpec::from_features(
    const std::array<double, kFeatureCount>& f) {
  BeamSpec s;
  s.bw_az_deg = f[0];
  s.bw_el_deg = f[1];
  s.sll_az_db = f[2];
  s.sll_el_db = f[3];
  s.eirp_dbw = f[4];
  s.steer_az_deg = f[5];
  s.steer_el_deg = f[6];
  s.n_active = f[7];
  return s;
}

void BeamSpec::validate(const ArrayConfig& cfg) const {
  if (!(bw_az_deg > 0.0) || !(bw_el_deg > 0.0))
    throw ConfigError("beam target: beamwidths must be positive");
  if (!(sll_az_db < 0.0) || !(sll_el_db < 0.0))
    throw ConfigError("beam target: sidelobe levels must be negative dB");
  const double n_max = double(cfg.n_ports) * cfg.n_ports;
  if (!(n_active >= 1.0) || !(n_active <= n_max))
    throw ConfigError("beam target: active-port count must be in [1, " +
                      std::to_string(int(n_max)) + "]");
  const double fov = cfg.fov_half_angle_deg;
  if (std::abs(steer_az_deg) > fov || std::abs(steer_el_deg) > fov)
    throw ConfigError("beam target: steering exceeds the field of view");
  if (!std::isfinite(eirp_dbw))
    throw ConfigError("beam target: EIRP must be finite");
}

void CostWeights::validate() const {
  if (k1 < 0.0 || k2 < 0.0 || k3 < 0.0)
    throw ConfigError("cost weights must be nonnegative");
  if (k1 == 0.0 && k2 == 0.0 && k3 == 0.0)
    throw ConfigError("cost weights must not all be zero");
}

double cost(const BeamMetrics& m, const BeamSpec& s, const CostWeights& kw) {
  kw.validate();
  if (s.bw_az_deg == 0.0 || s.bw_el_deg == 0.0 || s.sll_az_db == 0.0 ||
      s.sll_el_db == 0.0 || s.eirp_dbw == 0.0)
    throw DataError("cost: target value of zero makes a relative error undefined");
  const double z1 = kw.k1 * (std::abs(m.bw_az_deg - s.bw_az_deg) / std::abs(s.bw_az_deg) +
                             std::abs(m.bw_el_deg - s.bw_el_deg) / std::abs(s.bw_el_deg));
  const double z2 = kw.k2 * (std::abs(m.sll_az_db - s.sll_az_db) / std::abs(s.sll_az_db) +
                             std::abs(m.sll_el_db - s.sll_el_db) / std::abs(s.sll_el_db));
  const double z3 = kw.k3 * (std::abs(m.eirp_dbw - s.eirp_dbw) / std::abs(s.eirp_dbw));
  return z1 + z2 + z3;
}

}  // namespace dra
