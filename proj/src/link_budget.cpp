#include "dra/link_budget.hpp"

#include <cmath>
#include <cstdlib>
#include <fstream>
#include <limits>
#include <sstream>

#include "dra/errors.hpp"
#include "dra/kpi.hpp"

namespace dra {

void LinkGeometry::validate() const {
  if (!(slant_distance_m > 0.0))
    throw ConfigError("link distance must be positive");
  if (!(wavelength_m > 0.0))
    throw ConfigError("link wavelength must be positive");
  if (excess_loss_db < 0.0)
    throw ConfigError("excess loss must be nonnegative dB");
  if (!(rx_noise_temp_k > 0.0))
    throw ConfigError("receiver noise temperature must be positive");
  if (!(bandwidth_hz > 0.0))
    throw ConfigError("link bandwidth must be positive");
  if (!(tx_power_w > 0.0))
    throw ConfigError("transmit power must be positive");
}

LinkGeometry LinkGeometry::from_config(const KeyValueConfig& c) {
  LinkGeometry g;
  g.slant_distance_m = c.get_double("link_distance_m", g.slant_distance_m);
  if (c.has("link_f0_hz"))
    g.wavelength_m = kSpeedOfLight / c.get_double("link_f0_hz", 19e9);
  g.wavelength_m = c.get_double("link_wavelength_m", g.wavelength_m);
  g.excess_loss_db = c.get_double("link_excess_loss_db", g.excess_loss_db);
  g.g_rx_max_dbi = c.get_double("link_g_rx_dbi", g.g_rx_max_dbi);
  g.rx_noise_temp_k = c.get_double("link_noise_temp_k", g.rx_noise_temp_k);
  g.bandwidth_hz = c.get_double("link_bandwidth_hz", g.bandwidth_hz);
  g.tx_power_w = c.get_double("link_tx_power_w", g.tx_power_w);
  g.validate();
  return g;
}

void BeamPlan::validate() const {
  geometry.validate();
  for (const auto& b : beams) {
    if (!(b.bandwidth_hz > 0.0))
      throw ConfigError("planned beam bandwidth must be positive");
    if (!(b.tx_power_w > 0.0))
      throw ConfigError("planned beam transmit power must be positive");
    if (b.color < 0) throw ConfigError("reuse color must be nonnegative");
  }
}

double fspl_db(const LinkGeometry& geom) {
  if (!(geom.slant_distance_m > 0.0))
    throw ConfigError("link distance must be positive");
  return 20.0 *
         std::log10(4.0 * kPi * geom.slant_distance_m / geom.wavelength_m);
}

double channel_gain(const LinkGeometry& geom, double g_sat_dbi) {
  geom.validate();
  const double gain_db =
      g_sat_dbi + geom.g_rx_max_dbi - fspl_db(geom) - geom.excess_loss_db;
  return std::pow(10.0, gain_db / 10.0);
}

namespace {
double noise_power_w(const LinkGeometry& geom, double bandwidth_hz) {
  return kBoltzmann * geom.rx_noise_temp_k * bandwidth_hz;
}
}  // namespace

double cinr(BeamEvaluator& eval, const BeamPlan& plan, std::size_t beam_ix) {
  plan.validate();
  if (plan.beams.empty())
    throw DataError("cannot compute a link ratio over an empty beam plan");
  if (beam_ix >= plan.beams.size())
    throw DataError("beam index " + std::to_string(beam_ix) +
                    " outside the plan of " +
                    std::to_string(plan.beams.size()) + " beams");
  const PlannedBeam& victim = plan.beams[beam_ix];
  const double g_self = eval.directive_gain_dbi(
      victim.weights, victim.center_az_deg, victim.center_el_deg);
  const double carrier =
      victim.tx_power_w * channel_gain(plan.geometry, g_self);
  double interference = 0.0;
  for (std::size_t j = 0; j < plan.beams.size(); ++j) {
    if (j == beam_ix) continue;
    const PlannedBeam& other = plan.beams[j];
    if (other.color != victim.color) continue;
    const double g_other = eval.directive_gain_dbi(
        other.weights, victim.center_az_deg, victim.center_el_deg);
    interference += other.tx_power_w * channel_gain(plan.geometry, g_other);
  }
  const double noise = noise_power_w(plan.geometry, victim.bandwidth_hz);
  return carrier / (interference + noise);
}

double cinr(const ArrayConfig& cfg, const BeamPlan& plan, std::size_t beam_ix) {
  BeamEvaluator eval(cfg);
  return cinr(eval, plan, beam_ix);
}

double snr_from_eirp(const LinkGeometry& geom, double eirp_dbw) {
  geom.validate();
  const double carrier_dbw =
      eirp_dbw + geom.g_rx_max_dbi - fspl_db(geom) - geom.excess_loss_db;
  return std::pow(10.0, carrier_dbw / 10.0) /
         noise_power_w(geom, geom.bandwidth_hz);
}

void EfficiencyTable::validate() const {
  if (steps.empty())
    throw ConfigError("spectral-efficiency table must not be empty");
  for (std::size_t i = 0; i < steps.size(); ++i) {
    if (steps[i].second < 0.0)
      throw ConfigError("spectral-efficiency values must be nonnegative");
    if (i > 0) {
      if (!(steps[i].first > steps[i - 1].first))
        throw ConfigError(
            "spectral-efficiency thresholds must be strictly increasing");
      if (steps[i].second < steps[i - 1].second)
        throw ConfigError(
            "spectral-efficiency values must be non-decreasing");
    }
  }
}

EfficiencyTable EfficiencyTable::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line))
    throw DataError("'" + path + "': empty efficiency table");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != "gamma_db,kappa")
    throw DataError("'" + path +
                    "': expected header 'gamma_db,kappa', found '" + line +
                    "'");
  EfficiencyTable t;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const std::size_t comma = line.find(',');
    if (comma == std::string::npos)
      throw DataError("'" + path + "' row " + std::to_string(lineno) +
                      ": expected two comma-separated values");
    char* end = nullptr;
    const std::string a = line.substr(0, comma);
    const std::string b = line.substr(comma + 1);
    const double gamma_db = std::strtod(a.c_str(), &end);
    if (end != a.c_str() + a.size())
      throw DataError("'" + path + "' row " + std::to_string(lineno) +
                      ": bad threshold '" + a + "'");
    const double kappa = std::strtod(b.c_str(), &end);
    if (end != b.c_str() + b.size())
      throw DataError("'" + path + "' row " + std::to_string(lineno) +
                      ": bad efficiency '" + b + "'");
    t.steps.emplace_back(gamma_db, kappa);
  }
  t.validate();
  return t;
}

double spectral_efficiency(double gamma_linear, double kappa_max) {
  if (gamma_linear < 0.0)
    throw ConfigError("CINR must be nonnegative");
  if (!(kappa_max > 0.0))
    throw ConfigError("spectral-efficiency cap must be positive");
  return std::min(std::log2(1.0 + gamma_linear), kappa_max);
}

double spectral_efficiency(double gamma_linear, const EfficiencyTable& table) {
  if (gamma_linear < 0.0)
    throw ConfigError("CINR must be nonnegative");
  table.validate();
  const double gamma_db = gamma_linear > 0.0
                              ? 10.0 * std::log10(gamma_linear)
                              : -std::numeric_limits<double>::infinity();
  double kappa = 0.0;
  for (const auto& [thr_db, k] : table.steps) {
    if (gamma_db >= thr_db)
      kappa = k;
    else
      break;
  }
  return kappa;
}

double offered_capacity(double bandwidth_hz, double kappa) {
  if (!(bandwidth_hz > 0.0))
    throw ConfigError("capacity requires positive bandwidth");
  if (kappa < 0.0)
    throw ConfigError("spectral efficiency must be nonnegative");
  return bandwidth_hz * kappa;
}

double demand_match(double offered_bps, double demand_bps) {
  if (!(demand_bps > 0.0))
    throw ConfigError("demand matching requires positive demand");
  return kpi_matched(demand_bps, offered_bps);
}

std::vector<ScenarioBeam> load_scenario(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open '" + path + "' for reading");
  std::string line;
  if (!std::getline(in, line))
    throw DataError("'" + path + "': empty scenario file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  const char* kHeader =
      "demand_bps,bandwidth_hz,color,tx_power_w,bw_az_deg,bw_el_deg,"
      "sll_az_db,sll_el_db,eirp_dbw,steer_az_deg,steer_el_deg,n_active";
  if (line != kHeader)
    throw DataError("'" + path + "': expected header '" + kHeader +
                    "', found '" + line + "'");
  std::vector<ScenarioBeam> beams;
  std::size_t lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> tok;
    std::size_t start = 0;
    while (true) {
      const std::size_t comma = line.find(',', start);
      if (comma == std::string::npos) {
        tok.push_back(line.substr(start));
        break;
      }
      tok.push_back(line.substr(start, comma - start));
      start = comma + 1;
    }
    if (tok.size() != 12)
      throw DataError("'" + path + "' row " + std::to_string(lineno) +
                      ": expected 12 fields, found " +
                      std::to_string(tok.size()));
    const auto num = [&](int i) {
      char* end = nullptr;
      const double v = std::strtod(tok[i].c_str(), &end);
      if (end != tok[i].c_str() + tok[i].size())
        throw DataError("'" + path + "' row " + std::to_string(lineno) +
                        ": bad numeric value '" + tok[i] + "'");
      return v;
    };
    ScenarioBeam b;
    b.demand_bps = num(0);
    b.bandwidth_hz = num(1);
    const double color = num(2);
    if (color < 0 || color != std::floor(color))
      throw DataError("'" + path + "' row " + std::to_string(lineno) +
                      ": color must be a nonnegative integer");
    b.color = static_cast<int>(color);
    b.tx_power_w = num(3);
    std::array<double, 8> f{};
    for (int i = 0; i < 8; ++i) f[i] = num(4 + i);
    b.spec = BeamSpec::from_features(f);
    beams.push_back(b);
  }
  if (beams.empty())
    throw DataError("'" + path + "': scenario lists no beams");
  return beams;
}

}  // namespace dra
