#pragma once

#include <string>

#include "dra/config_file.hpp"

namespace dra {

inline constexpr double kSpeedOfLight = 299792458.0;  // m/s
inline constexpr double kPi = 3.14159265358979323846;
inline constexpr double kDegPerRad = 180.0 / kPi;
inline constexpr double kRadPerDeg = kPi / 180.0;
inline constexpr double kBoltzmann = 1.380649e-23;  // J/K

// Geometry and physics of the direct-radiating array: a square grid of
// n_ports × n_ports RF ports, each driving a fixed uniform subarray_n ×
// subarray_n subarray. Ports carry binary (on/off) amplitude weights plus
// progressive phase steering; subarrays are not individually steerable.
struct ArrayConfig {
  double f0_hz = 19e9;
  int n_ports = 36;
  double port_spacing_m = 3.5 * kSpeedOfLight / 19e9;
  int subarray_n = 4;
  double subarray_spacing_m = 3.5 * kSpeedOfLight / 19e9 / 4.0;
  double element_exponent_q = 1.0;   // unit-element pattern cos^q(theta)
  double fov_half_angle_deg = 8.7;   // Earth rim half-angle from GEO
  double p_element_w = 1.0;          // RF power per active port, W

  double lambda0() const { return kSpeedOfLight / f0_hz; }
  double wavenumber() const { return 2.0 * kPi / lambda0(); }
  int elements_per_axis() const { return n_ports * subarray_n; }

  // Throws ConfigError on violated constraints.
  void validate() const;

  // Reads keys: f0_hz, n_ports, port_spacing_m | port_spacing_lambda,
  // subarray_n, subarray_spacing_m | subarray_spacing_lambda,
  // element_exponent_q, fov_half_angle_deg, p_element_w.
  static ArrayConfig from_config(const KeyValueConfig& kv);

  // Short hex digest of all physical parameters, for reproducibility stamps.
  std::string digest() const;
};

// Classic aperture sizing: per-dimension element count that yields a given
// -3 dB beamwidth, count = 0.886·lambda0 / (efficiency · theta_3db · spacing).
// Returns the raw (non-integer) value; the caller decides how to round.
double elements_per_dimension(double lambda0_m, double efficiency,
                              double theta_3db_rad, double spacing_m);

}  // namespace dra
