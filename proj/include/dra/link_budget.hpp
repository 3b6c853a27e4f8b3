#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "dra/array_config.hpp"
#include "dra/config_file.hpp"
#include "dra/objective.hpp"
#include "dra/pattern.hpp"
#include "dra/weight_matrix.hpp"

namespace dra {

// Geometry and receive-chain constants shared by all beams of a plan.
struct LinkGeometry {
  double slant_distance_m = 35786e3;  // GEO altitude
  double wavelength_m = kSpeedOfLight / 19e9;
  double excess_loss_db = 0.5;  // shadowing + atmospheric gases
  double g_rx_max_dbi = 27.0;
  double rx_noise_temp_k = 300.0;
  double bandwidth_hz = 500e6;
  double tx_power_w = 1.0;  // default per-beam allocation

  void validate() const;
  static LinkGeometry from_config(const KeyValueConfig& c);
};

// One transmit beam of a frequency-reuse plan.
struct PlannedBeam {
  BeamSpec spec;
  WeightMatrix weights;
  double bandwidth_hz = 0.0;
  double demand_bps = 0.0;
  int color = 0;  // beams sharing a color are co-channel
  double tx_power_w = 0.0;
  double center_az_deg = 0.0;  // served user location (pattern look angle)
  double center_el_deg = 0.0;
};

struct BeamPlan {
  LinkGeometry geometry;
  std::vector<PlannedBeam> beams;

  void validate() const;
};

// Linear power gain of one link: G_SAT(θ)·G_RX / ((4πd/λ)² · L).
// g_sat_dbi is the serving pattern's directive gain toward the user.
double channel_gain(const LinkGeometry& geom, double g_sat_dbi);

// 20·log10(4πd/λ): the free-space path loss term in dB.
double fspl_db(const LinkGeometry& geom);

// Carrier-to-interference-plus-noise ratio (linear) of one beam. Carrier and
// interference use each transmit pattern's directive gain toward the victim
// beam's center; noise is k_B·T·W over the victim's bandwidth. The evaluator
// overload reuses one pattern evaluator across calls.
double cinr(const ArrayConfig& cfg, const BeamPlan& plan, std::size_t beam_ix);
double cinr(BeamEvaluator& eval, const BeamPlan& plan, std::size_t beam_ix);

// Signal-to-noise ratio (linear) of a single isolated link whose transmitter
// radiates the given EIRP (used for demand anchoring).
double snr_from_eirp(const LinkGeometry& geom, double eirp_dbw);

// Monotone step table mapping CINR thresholds (dB) to spectral efficiency.
struct EfficiencyTable {
  std::vector<std::pair<double, double>> steps;  // (gamma_db, kappa) ascending

  void validate() const;  // strictly increasing gamma, non-decreasing kappa
  static EfficiencyTable from_csv(const std::string& path);  // gamma_db,kappa
};

// Default mapping: min(log2(1+γ), kappa_max). Throws ConfigError on γ < 0.
double spectral_efficiency(double gamma_linear, double kappa_max = 5.9);
// Table mapping: κ of the highest threshold at or below γ; 0 below the first.
double spectral_efficiency(double gamma_linear, const EfficiencyTable& table);

// Offered capacity C = W·κ. Throws ConfigError on W <= 0.
double offered_capacity(double bandwidth_hz, double kappa);

// KPI 4 input: match percentage of offered capacity against demand.
// Throws ConfigError on demand <= 0.
double demand_match(double offered_bps, double demand_bps);

// Scenario file: CSV with header
//   demand_bps,bandwidth_hz,color,tx_power_w,<the 8 beam-target columns>
// Beam centers default to the target steering.
struct ScenarioBeam {
  BeamSpec spec;
  double demand_bps = 0.0;
  double bandwidth_hz = 0.0;
  int color = 0;
  double tx_power_w = 0.0;
};

std::vector<ScenarioBeam> load_scenario(const std::string& path);

}  // namespace dra
