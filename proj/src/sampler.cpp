#include "dra/sampler.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "dra/errors.hpp"
#include "dra/rng.hpp"

namespace dra {

void SamplerRanges::validate(const ArrayConfig& cfg) const {
  // Narrowest beam a fully populated aperture can form (broadside).
  const double bw_limit_deg =
      0.886 * cfg.lambda0() / (cfg.n_ports * cfg.port_spacing_m) * kDegPerRad;
  if (!(bw_az_lo_deg > 0.0) || bw_az_lo_deg > bw_az_hi_deg)
    throw ConfigError("sampler: beamwidth range is empty or nonpositive");
  if (bw_az_lo_deg * bw_ratio_lo < bw_limit_deg)
    throw ConfigError(
        "sampler: beamwidth range reaches below the full-aperture limit of " +
        std::to_string(bw_limit_deg) + " deg");
  if (bw_az_hi_deg * bw_ratio_hi > cfg.fov_half_angle_deg)
    throw ConfigError("sampler: beamwidth range exceeds the field-of-view scale");
  if (!(bw_ratio_lo > 0.0) || bw_ratio_lo > bw_ratio_hi)
    throw ConfigError("sampler: beamwidth ratio range is empty");
  if (sll_lo_db < -30.0 || sll_hi_db > -10.0 || sll_lo_db > sll_hi_db)
    throw ConfigError("sampler: sidelobe range must sit within [-30, -10] dB");
  if (sll_el_jitter_db < 0.0 || eirp_jitter_db < 0.0)
    throw ConfigError("sampler: jitters must be nonnegative");
  if (steer_max_deg < 0.0 || steer_max_deg > cfg.fov_half_angle_deg)
    throw ConfigError("sampler: steering range exceeds the field of view");
  if (!(fill_lo > 0.0) || fill_lo > fill_hi || fill_hi > 1.0)
    throw ConfigError("sampler: fill-factor range must sit within (0, 1]");
  const int n_max = cfg.n_ports * cfg.n_ports;
  if (n_active_lo < 4 || n_active_lo > n_active_hi || n_active_hi > n_max)
    throw ConfigError("sampler: active-port range must sit within [4, " +
                      std::to_string(n_max) + "]");
  if (!(accept_cost_threshold > 0.0))
    throw ConfigError("sampler: acceptance threshold must be positive");
}

SamplerRanges SamplerRanges::from_config(const KeyValueConfig& c) {
  SamplerRanges r;
  r.bw_az_lo_deg = c.get_double("sampler_bw_az_lo", r.bw_az_lo_deg);
  r.bw_az_hi_deg = c.get_double("sampler_bw_az_hi", r.bw_az_hi_deg);
  r.bw_ratio_lo = c.get_double("sampler_bw_ratio_lo", r.bw_ratio_lo);
  r.bw_ratio_hi = c.get_double("sampler_bw_ratio_hi", r.bw_ratio_hi);
  r.sll_lo_db = c.get_double("sampler_sll_lo", r.sll_lo_db);
  r.sll_hi_db = c.get_double("sampler_sll_hi", r.sll_hi_db);
  r.sll_el_jitter_db = c.get_double("sampler_sll_el_jitter", r.sll_el_jitter_db);
  r.steer_max_deg = c.get_double("sampler_steer_max", r.steer_max_deg);
  r.fill_lo = c.get_double("sampler_fill_lo", r.fill_lo);
  r.fill_hi = c.get_double("sampler_fill_hi", r.fill_hi);
  r.n_active_lo = c.get_int("sampler_n_lo", r.n_active_lo);
  r.n_active_hi = c.get_int("sampler_n_hi", r.n_active_hi);
  r.eirp_jitter_db = c.get_double("sampler_eirp_jitter", r.eirp_jitter_db);
  r.accept_cost_threshold =
      c.get_double("sampler_accept_cost", r.accept_cost_threshold);
  return r;
}

BeamSpec sample_spec(const SamplerRanges& r, const ArrayConfig& cfg,
                     BeamEvaluator& eval, std::uint64_t seed,
                     std::uint64_t index) {
  Rng rng(Rng::mix(seed, 0x53414d50ull + index));
  BeamSpec s;
  s.bw_az_deg = rng.uniform(r.bw_az_lo_deg, r.bw_az_hi_deg);
  s.bw_el_deg = s.bw_az_deg * rng.uniform(r.bw_ratio_lo, r.bw_ratio_hi);
  s.sll_az_db = rng.uniform(r.sll_lo_db, r.sll_hi_db);
  const double el_hi = std::min(-10.0, r.sll_hi_db + 0.5);
  s.sll_el_db =
      std::clamp(s.sll_az_db + rng.uniform(-r.sll_el_jitter_db,
                                           r.sll_el_jitter_db),
                 r.sll_lo_db, el_hi);
  s.steer_az_deg = rng.uniform(-r.steer_max_deg, r.steer_max_deg);
  s.steer_el_deg = rng.uniform(-r.steer_max_deg, r.steer_max_deg);

  // Aperture size that yields the drawn beamwidth, thinned by a fill factor.
  const double bw_mean_rad =
      0.5 * (s.bw_az_deg + s.bw_el_deg) * kRadPerDeg;
  const double d_ports =
      0.886 * cfg.lambda0() / (bw_mean_rad * cfg.port_spacing_m);
  const double n_raw =
      kPi / 4.0 * d_ports * d_ports * rng.uniform(r.fill_lo, r.fill_hi);
  long n = std::lround(n_raw / 4.0) * 4;
  n = std::clamp(n, long(r.n_active_lo), long(r.n_active_hi));
  s.n_active = static_cast<double>(n);

  // Anchor the EIRP target to what a centered disc of that size actually
  // radiates toward the steering direction, plus a small jitter.
  WeightMatrix disc(cfg,
                    expand_quadrant(canonical_quadrant_disc(s.n_active,
                                                            cfg.n_ports),
                                    cfg.n_ports),
                    s.steer_az_deg, s.steer_el_deg);
  const double eirp_nom =
      10.0 * std::log10(disc.n_active() * cfg.p_element_w) +
      eval.directive_gain_dbi(disc, s.steer_az_deg, s.steer_el_deg);
  s.eirp_dbw = eirp_nom + rng.uniform(-r.eirp_jitter_db, r.eirp_jitter_db);
  return s;
}

Dataset generate_dataset(const SamplerRanges& ranges, int n_samples,
                         const ArrayConfig& cfg, const CostWeights& kw,
                         const GaParams& gp, std::uint64_t seed,
                         std::ostream* progress) {
  cfg.validate();
  ranges.validate(cfg);
  kw.validate();
  gp.validate();
  if (n_samples < 1)
    throw ConfigError("dataset generation needs at least one sample");

  const auto t0 = std::chrono::steady_clock::now();
  BeamEvaluator eval(cfg);
  Dataset ds;
  ds.samples.reserve(static_cast<std::size_t>(n_samples));
  if (progress) *progress << "sample,cost,accepted,wall_s\n";
  for (int i = 0; i < n_samples; ++i) {
    const BeamSpec spec =
        sample_spec(ranges, cfg, eval, seed, static_cast<std::uint64_t>(i));
    const GaResult res = ga_optimize(spec, cfg, kw, gp);
    Sample smp;
    smp.spec = spec;
    smp.quadrant_bits = extract_quadrant(res.weights.bits(), cfg.n_ports);
    smp.achieved = res.metrics;
    smp.cost = res.cost;
    smp.accepted = res.cost <= ranges.accept_cost_threshold;
    ds.samples.push_back(std::move(smp));
    if (progress) {
      char buf[96];
      std::snprintf(buf, sizeof(buf), "%d,%.9g,%d,%.3f\n", i, res.cost,
                    ds.samples.back().accepted ? 1 : 0,
                    std::chrono::duration<double>(
                        std::chrono::steady_clock::now() - t0)
                        .count());
      *progress << buf;
    }
  }
  if (ds.count_accepted() == 0)
    throw DataError(
        "dataset generation produced no accepted samples; widen the ranges or "
        "relax the acceptance threshold");
  return ds;
}

}  // namespace dra
