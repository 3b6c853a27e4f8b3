#pragma once

#include <complex>
#include <optional>
#include <string>
#include <vector>

#include "dra/array_config.hpp"
#include "dra/weight_matrix.hpp"

namespace dra {

// Direction cosines for the azimuth-over-elevation convention used throughout:
//   u = sin(az)·cos(el), v = sin(el), w = cos(az)·cos(el) (boresight along +z).
inline double dir_u(double az_deg, double el_deg) {
  return std::sin(az_deg * kRadPerDeg) * std::cos(el_deg * kRadPerDeg);
}
inline double dir_v(double el_deg) { return std::sin(el_deg * kRadPerDeg); }

enum class CutPlane { Azimuth, Elevation };

struct PatternCut {
  CutPlane plane = CutPlane::Azimuth;
  std::vector<double> angles_deg;  // strictly increasing, uniform step
  std::vector<double> gain_db;     // same length; 0 dB at peak when normalized
  bool normalized = true;
};

// Measured properties of one synthesized beam.
struct BeamMetrics {
  double bw_az_deg = 0.0;
  double bw_el_deg = 0.0;
  double sll_az_db = 0.0;
  double sll_el_db = 0.0;
  double eirp_dbw = 0.0;
  double directivity_dbi = 0.0;
  double peak_az_deg = 0.0;
  double peak_el_deg = 0.0;
};

// Progressive steering phases, radians, n_ports × n_ports row-major:
// phase[m][n] = −k·port_spacing·(m'·u0 + n'·v0) with centered indices
// m' = m − (N−1)/2, wrapped to (−pi, pi]. Throws ConfigError if the steering
// direction lies outside the field of view.
std::vector<double> steering_phases(const ArrayConfig& cfg, double steer_az_deg,
                                    double steer_el_deg);

// Complex far-field value at (az, el): steered port sum × fixed subarray
// factor × cos^q element pattern. Directions beyond the horizon return 0.
std::complex<double> array_factor(const ArrayConfig& cfg, const WeightMatrix& w,
                                  double az_deg, double el_deg);

// Uniformly sampled cut through the realized beam peak. The azimuth cut holds
// elevation at the peak; the elevation cut holds azimuth at the peak. Throws
// DataError if the step under-samples the main lobe.
PatternCut pattern_cut(const ArrayConfig& cfg, const WeightMatrix& w,
                       CutPlane plane, double half_range_deg, double step_deg,
                       bool normalize = true);

// −3 dB width of the main lobe, linear interpolation at the crossings.
// Throws DataError (asking to widen half_range) if a crossing is not bracketed.
double extract_beamwidth(const PatternCut& cut);

// Peak sidelobe (highest local maximum beyond the first nulls, within
// ±fov_half_angle of boresight) relative to the main-lobe peak, in dB.
// Empty optional = no sidelobe within the window.
std::optional<double> extract_sll(const PatternCut& cut, double fov_half_angle_deg);

// Directivity at the realized beam peak, dBi. Exact hemispheric integration
// of the pattern via the aperture autocorrelation expansion (see directivity.cpp).
double directivity_dbi(const ArrayConfig& cfg, const WeightMatrix& w);

// Independent slow route: brute-force fixed-grid quadrature over direction
// cosines (0.2° base grid, 0.02° within ±2° of every lattice-lobe direction),
// with a halved-grid refinement check. Throws NumericError if the refinement
// moves the result by more than 0.1 dB.
double directivity_quadrature_dbi(const ArrayConfig& cfg, const WeightMatrix& w);

// EIRP = 10·log10(n_active · p_element) + directivity, dBW.
double eirp_dbw(const ArrayConfig& cfg, const WeightMatrix& w);

// Full beam characterization: −3 dB widths and sidelobe levels in both
// principal cuts, EIRP, directivity, and the realized peak direction.
BeamMetrics evaluate_beam(const ArrayConfig& cfg, const WeightMatrix& w);

void save_pattern_cut_csv(const PatternCut& cut, const std::string& path);
PatternCut load_pattern_cut_csv(const std::string& path);

// Reusable beam evaluator. Caches the per-config integration table and the
// per-steering phase tables, making repeated evaluations (fitness loops,
// benchmarks) cheap. Not thread-safe; use one instance per thread.
class BeamEvaluator {
 public:
  explicit BeamEvaluator(const ArrayConfig& cfg);

  BeamMetrics evaluate(const WeightMatrix& w);

  // Directive gain of this matrix's pattern toward an arbitrary direction,
  // dBi: 4π|F(az,el)|² / ∫|F|²dΩ. Used by the link-budget interference model.
  double directive_gain_dbi(const WeightMatrix& w, double az_deg, double el_deg);

  // Exact hemispheric power integral ∫∫|F|² dΩ for this matrix.
  double pattern_power_integral(const WeightMatrix& w);

  const ArrayConfig& config() const { return cfg_; }

 private:
  void build_integration_table();
  void ensure_steering(double az_deg, double el_deg);
  void compute_axis_counts(const WeightMatrix& w);
  double omega_exact(const WeightMatrix& w);

  struct CutMetrics {
    double bw_deg;
    double sll_db;  // valid only when sll_found
    bool sll_found;
    double peak_angle_deg;
    double peak_p2;
  };
  CutMetrics analyze_plane(CutPlane plane);

  ArrayConfig cfg_;
  double k_, dp_, ds_;
  int n_, nsub_, nel_;
  double steer_az_ = 0.0, steer_el_ = 0.0;
  bool steer_set_ = false;
  double u0_ = 0.0, v0_ = 0.0;
  std::vector<double> itab_;             // 2π·I_q(k·ds·|Λ|) per element lag pair
  std::vector<int> lag_lo_, lag_cnt_;    // port lags feeding each element lag
  std::vector<double> lag_t_;            // matching subarray-overlap weights (×2)
  std::vector<double> cosp_u0_, cosp_v0_;  // cos(k·dp·p·u0/v0) per port lag
  std::vector<double> row_half_, col_half_;  // mirrored-pair port counts
  std::vector<uint64_t> row_masks_;          // per-row bitmasks over iy
  std::vector<int> autoc_;                   // port autocorrelation scratch
  int row_lo_ = 0, row_hi_ = 0, col_lo_ = 0, col_hi_ = 0;  // active bounding box
};

}  // namespace dra
