#include "dra/array_config.hpp"

#include <cmath>
#include <cstdio>

#include "dra/crc32.hpp"
#include "dra/errors.hpp"

namespace dra {

void ArrayConfig::validate() const {
  if (!(f0_hz > 0)) throw ConfigError("f0_hz must be positive");
  if (n_ports < 2 || n_ports % 2 != 0)
    throw ConfigError("n_ports must be even and >= 2 (quadrant symmetry)");
  if (!(port_spacing_m > lambda0() / 2.0))
    throw ConfigError("port_spacing_m must exceed lambda0/2");
  if (subarray_n < 1) throw ConfigError("subarray_n must be >= 1");
  if (!(subarray_spacing_m > 0)) throw ConfigError("subarray_spacing_m must be positive");
  if (!(fov_half_angle_deg > 0.0 && fov_half_angle_deg < 90.0))
    throw ConfigError("fov_half_angle_deg must lie in (0, 90)");
  if (!(p_element_w > 0)) throw ConfigError("p_element_w must be positive");
  if (!(element_exponent_q >= 0)) throw ConfigError("element_exponent_q must be >= 0");
}

ArrayConfig ArrayConfig::from_config(const KeyValueConfig& kv) {
  ArrayConfig cfg;
  cfg.f0_hz = kv.get_double("f0_hz", cfg.f0_hz);
  cfg.n_ports = kv.get_int("n_ports", cfg.n_ports);
  cfg.subarray_n = kv.get_int("subarray_n", cfg.subarray_n);
  const double lam = cfg.lambda0();
  if (kv.has("port_spacing_m")) {
    cfg.port_spacing_m = kv.get_double("port_spacing_m", 0.0);
  } else {
    cfg.port_spacing_m = kv.get_double("port_spacing_lambda", 3.5) * lam;
  }
  if (kv.has("subarray_spacing_m")) {
    cfg.subarray_spacing_m = kv.get_double("subarray_spacing_m", 0.0);
  } else if (kv.has("subarray_spacing_lambda")) {
    cfg.subarray_spacing_m = kv.get_double("subarray_spacing_lambda", 0.0) * lam;
  } else {
    cfg.subarray_spacing_m = cfg.port_spacing_m / cfg.subarray_n;
  }
  cfg.element_exponent_q = kv.get_double("element_exponent_q", cfg.element_exponent_q);
  cfg.fov_half_angle_deg = kv.get_double("fov_half_angle_deg", cfg.fov_half_angle_deg);
  cfg.p_element_w = kv.get_double("p_element_w", cfg.p_element_w);
  cfg.validate();
  return cfg;
}

std::string ArrayConfig::digest() const {
  char buf[256];
  std::snprintf(buf, sizeof(buf), "%.17g|%d|%.17g|%d|%.17g|%.17g|%.17g|%.17g",
                f0_hz, n_ports, port_spacing_m, subarray_n, subarray_spacing_m,
                element_exponent_q, fov_half_angle_deg, p_element_w);
  const uint32_t c = crc32(buf, std::char_traits<char>::length(buf));
  char hex[16];
  std::snprintf(hex, sizeof(hex), "%08x", c);
  return hex;
}

double elements_per_dimension(double lambda0_m, double efficiency,
                              double theta_3db_rad, double spacing_m) {
  if (!(lambda0_m > 0) || !(efficiency > 0) || !(theta_3db_rad > 0) || !(spacing_m > 0))
    throw ConfigError("elements_per_dimension: all arguments must be positive");
  return 0.886 * lambda0_m / (efficiency * theta_3db_rad * spacing_m);
}

}  // namespace dra
