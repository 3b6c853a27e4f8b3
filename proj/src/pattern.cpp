#include "dra/pattern.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "dra/errors.hpp"

namespace dra {

namespace {

constexpr double kMinusInfDb = -400.0;
// -3 dB taken literally: power ratio 10^(-0.3).
const double kHalfPowerRatio = std::pow(10.0, -0.3);

double centered_index(int i, int n) { return i - (n - 1) * 0.5; }

double to_db(double p2, double ref_p2) {
  if (!(p2 > 0.0) || !(ref_p2 > 0.0)) return kMinusInfDb;
  return 10.0 * std::log10(p2 / ref_p2);
}

}  // namespace

std::vector<double> steering_phases(const ArrayConfig& cfg, double steer_az_deg,
                                    double steer_el_deg) {
  cfg.validate();
  const double fov = cfg.fov_half_angle_deg;
  if (std::abs(steer_az_deg) > fov || std::abs(steer_el_deg) > fov)
    throw ConfigError("steering (" + std::to_string(steer_az_deg) + ", " +
                      std::to_string(steer_el_deg) + ") deg outside allowed range +-" +
                      std::to_string(fov) + " deg");
  const int n = cfg.n_ports;
  const double kd = cfg.wavenumber() * cfg.port_spacing_m;
  const double u0 = dir_u(steer_az_deg, steer_el_deg);
  const double v0 = dir_v(steer_el_deg);
  std::vector<double> phases(static_cast<size_t>(n) * n);
  for (int m = 0; m < n; ++m) {
    const double cm = centered_index(m, n);
    for (int nn = 0; nn < n; ++nn) {
      const double cn = centered_index(nn, n);
      const double raw = -kd * (cm * u0 + cn * v0);
      phases[static_cast<size_t>(m) * n + nn] = std::remainder(raw, 2.0 * kPi);
    }
  }
  return phases;
}

std::complex<double> array_factor(const ArrayConfig& cfg, const WeightMatrix& w,
                                  double az_deg, double el_deg) {
  const double u = dir_u(az_deg, el_deg);
  const double v = dir_v(el_deg);
  const double w2 = 1.0 - u * u - v * v;
  if (w2 <= 0.0) return {0.0, 0.0};

  const int n = cfg.n_ports;
  const double kdp = cfg.wavenumber() * cfg.port_spacing_m;
  const double u0 = dir_u(w.steer_az_deg(), w.steer_el_deg());
  const double v0 = dir_v(w.steer_el_deg());

  // Steered port sum: phases reduce to k·dp·(cx·(u−u0) + cy·(v−v0)).
  std::vector<std::complex<double>> ax(n), ay(n);
  for (int i = 0; i < n; ++i) {
    const double c = centered_index(i, n);
    ax[i] = std::polar(1.0, kdp * c * (u - u0));
    ay[i] = std::polar(1.0, kdp * c * (v - v0));
  }
  std::complex<double> port{0.0, 0.0};
  for (int ix = 0; ix < n; ++ix) {
    std::complex<double> row{0.0, 0.0};
    for (int iy = 0; iy < n; ++iy)
      if (w.bit(ix, iy)) row += ay[iy];
    port += ax[ix] * row;
  }

  // Fixed (unsteered) subarray factor.
  const int ns = cfg.subarray_n;
  const double kds = cfg.wavenumber() * cfg.subarray_spacing_m;
  std::complex<double> sx{0.0, 0.0}, sy{0.0, 0.0};
  for (int t = 0; t < ns; ++t) {
    const double c = centered_index(t, ns);
    sx += std::polar(1.0, kds * c * u);
    sy += std::polar(1.0, kds * c * v);
  }

  const double q = cfg.element_exponent_q;
  const double elem = (q == 0.0) ? 1.0 : std::pow(w2, 0.5 * q);
  return port * sx * sy * elem;
}

namespace {

// Iteratively refine the realized peak location starting from the steering
// direction, alternating 1-D scans in azimuth and elevation.
void refine_peak(const ArrayConfig& cfg, const WeightMatrix& w, double& az_pk,
                 double& el_pk) {
  az_pk = w.steer_az_deg();
  el_pk = w.steer_el_deg();
  for (const double step : {0.02, 0.002, 0.0002}) {
    for (int plane = 0; plane < 2; ++plane) {
      double best = -1.0, best_angle = plane == 0 ? az_pk : el_pk;
      for (int i = -10; i <= 10; ++i) {
        const double a = (plane == 0 ? az_pk : el_pk) + i * step;
        const double az = plane == 0 ? a : az_pk;
        const double el = plane == 0 ? el_pk : a;
        const double p2 = std::norm(array_factor(cfg, w, az, el));
        if (p2 > best) {
          best = p2;
          best_angle = a;
        }
      }
      (plane == 0 ? az_pk : el_pk) = best_angle;
    }
  }
}

}  // namespace

PatternCut pattern_cut(const ArrayConfig& cfg, const WeightMatrix& w,
                       CutPlane plane, double half_range_deg, double step_deg,
                       bool normalize) {
  cfg.validate();
  if (!(step_deg > 0.0)) throw ConfigError("pattern_cut: step must be positive");
  if (!(half_range_deg > 0.0) || half_range_deg > 90.0)
    throw ConfigError("pattern_cut: half_range must lie in (0, 90] deg");

  double az_pk, el_pk;
  refine_peak(cfg, w, az_pk, el_pk);

  const double center = plane == CutPlane::Azimuth ? az_pk : el_pk;
  const int n = static_cast<int>(std::floor(half_range_deg / step_deg + 1e-9));
  PatternCut cut;
  cut.plane = plane;
  cut.normalized = normalize;
  cut.angles_deg.reserve(2 * n + 1);
  std::vector<double> p2;
  p2.reserve(2 * n + 1);
  for (int i = -n; i <= n; ++i) {
    const double a = center + i * step_deg;
    const double az = plane == CutPlane::Azimuth ? a : az_pk;
    const double el = plane == CutPlane::Azimuth ? el_pk : a;
    cut.angles_deg.push_back(a);
    p2.push_back(std::norm(array_factor(cfg, w, az, el)));
  }

  const auto it = std::max_element(p2.begin(), p2.end());
  const double pk2 = *it;
  if (!(pk2 > 0.0)) throw DataError("pattern_cut: pattern is zero over the cut");
  const size_t pk = static_cast<size_t>(it - p2.begin());
  if (pk > 0 && pk + 1 < p2.size() && p2[pk - 1] < pk2 * kHalfPowerRatio &&
      p2[pk + 1] < pk2 * kHalfPowerRatio)
    throw DataError(
        "pattern_cut: step under-samples the main lobe (both neighbors of the "
        "peak sample are below -3 dB); use a finer step");

  cut.gain_db.reserve(p2.size());
  const double ref = normalize ? pk2 : 1.0;
  for (const double v : p2) cut.gain_db.push_back(to_db(v, ref));
  return cut;
}

double extract_beamwidth(const PatternCut& cut) {
  const auto& g = cut.gain_db;
  const auto& a = cut.angles_deg;
  if (g.size() < 3 || g.size() != a.size())
    throw DataError("extract_beamwidth: cut too short or inconsistent");
  const size_t pk =
      static_cast<size_t>(std::max_element(g.begin(), g.end()) - g.begin());
  const double target = g[pk] - 3.0;

  auto cross = [&](int dir) -> double {
    size_t i = pk;
    while (true) {
      const size_t j = i + dir;
      if (j >= g.size())  // unsigned wrap also catches j < 0
        throw DataError(
            "extract_beamwidth: -3 dB crossing outside sampled range; widen "
            "half_range");
      if (g[j] <= target) {
        const double t = (g[i] - target) / (g[i] - g[j]);
        return a[i] + t * (a[j] - a[i]);
      }
      i = j;
    }
  };

  const double right = cross(+1);
  const double left = cross(-1);
  return right - left;
}

std::optional<double> extract_sll(const PatternCut& cut, double fov_half_angle_deg) {
  const auto& g = cut.gain_db;
  const auto& a = cut.angles_deg;
  if (g.size() < 3 || g.size() != a.size())
    throw DataError("extract_sll: cut too short or inconsistent");
  if (!(fov_half_angle_deg > 0.0))
    throw ConfigError("extract_sll: fov_half_angle must be positive");
  const double eps = 1e-9;
  if (a.front() > -fov_half_angle_deg + eps || a.back() < fov_half_angle_deg - eps)
    throw DataError("extract_sll: cut must span at least +-fov_half_angle");

  const size_t pk =
      static_cast<size_t>(std::max_element(g.begin(), g.end()) - g.begin());

  // First local minima on each side of the peak bound the main lobe.
  size_t null_r = g.size() - 1;
  for (size_t i = pk; i + 1 < g.size(); ++i) {
    if (g[i + 1] > g[i]) {
      null_r = i;
      break;
    }
  }
  size_t null_l = 0;
  for (size_t i = pk; i > 0; --i) {
    if (g[i - 1] > g[i]) {
      null_l = i;
      break;
    }
  }

  bool found = false;
  double best = kMinusInfDb;
  for (size_t i = 1; i + 1 < g.size(); ++i) {
    if (i >= null_l && i <= null_r) continue;
    if (std::abs(a[i]) > fov_half_angle_deg) continue;
    if (g[i] > g[i - 1] && g[i] >= g[i + 1]) {
      found = true;
      best = std::max(best, g[i]);
    }
  }
  if (!found) return std::nullopt;
  return best - g[pk];
}

double directivity_dbi(const ArrayConfig& cfg, const WeightMatrix& w) {
  // Directivity needs only the realized peak and the power integral — do not
  // route through the full beam summary, which additionally demands an
  // in-FoV sidelobe (small apertures legitimately have none).
  double az_pk, el_pk;
  refine_peak(cfg, w, az_pk, el_pk);
  BeamEvaluator ev(cfg);
  return ev.directive_gain_dbi(w, az_pk, el_pk);
}

double eirp_dbw(const ArrayConfig& cfg, const WeightMatrix& w) {
  return 10.0 * std::log10(w.n_active() * cfg.p_element_w) +
         directivity_dbi(cfg, w);
}

BeamMetrics evaluate_beam(const ArrayConfig& cfg, const WeightMatrix& w) {
  BeamEvaluator ev(cfg);
  return ev.evaluate(w);
}

void save_pattern_cut_csv(const PatternCut& cut, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot open for writing: " + path);
  out << "# plane=" << (cut.plane == CutPlane::Azimuth ? "azimuth" : "elevation")
      << " normalized=" << (cut.normalized ? 1 : 0) << "\n";
  out << "angle_deg,gain_db\n";
  char buf[80];
  for (size_t i = 0; i < cut.angles_deg.size(); ++i) {
    std::snprintf(buf, sizeof(buf), "%.9g,%.9g\n", cut.angles_deg[i], cut.gain_db[i]);
    out << buf;
  }
  if (!out) throw DataError("write failed: " + path);
}

PatternCut load_pattern_cut_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open: " + path);
  std::string line;
  PatternCut cut;
  bool normalized_tagged = false;
  int lineno = 0;
  if (!std::getline(in, line)) throw DataError("pattern cut CSV: empty file " + path);
  ++lineno;
  if (line.rfind("# ", 0) == 0) {  // optional metadata comment
    if (line.find("plane=elevation") != std::string::npos)
      cut.plane = CutPlane::Elevation;
    else if (line.find("plane=azimuth") != std::string::npos)
      cut.plane = CutPlane::Azimuth;
    else
      throw DataError("pattern cut CSV: bad metadata line in " + path);
    if (line.find("normalized=") != std::string::npos) {
      normalized_tagged = true;
      cut.normalized = line.find("normalized=1") != std::string::npos;
    }
    if (!std::getline(in, line))
      throw DataError("pattern cut CSV: missing header in " + path);
    ++lineno;
  }
  if (line != "angle_deg,gain_db")
    throw DataError("pattern cut CSV: bad header in " + path);
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos)
      throw DataError("pattern cut CSV: missing comma at " + path + ":" +
                      std::to_string(lineno));
    try {
      cut.angles_deg.push_back(std::stod(line.substr(0, comma)));
      cut.gain_db.push_back(std::stod(line.substr(comma + 1)));
    } catch (const std::exception&) {
      throw DataError("pattern cut CSV: bad number at " + path + ":" +
                      std::to_string(lineno));
    }
  }
  for (size_t i = 1; i < cut.angles_deg.size(); ++i)
    if (!(cut.angles_deg[i] > cut.angles_deg[i - 1]))
      throw DataError("pattern cut CSV: angles not strictly increasing");
  if (!normalized_tagged) {
    double mx = kMinusInfDb;
    for (const double g : cut.gain_db) mx = std::max(mx, g);
    cut.normalized = std::abs(mx) < 1e-9;
  }
  return cut;
}

// ---------------------------------------------------------------------------
// BeamEvaluator: fast separable cuts.
//
// Along the azimuth plane the elevation direction cosine is fixed at v = v0,
// so every port's elevation phase term cancels against the steering phase and
// the port sum collapses to sum_ix rowcount(ix)·cos((ix'+0.5)·k·dp·(u−u0)).
// The elevation plane is swept at fixed u = u0 (for steered beams this tracks
// a constant-u line rather than constant-azimuth; the difference is far below
// extraction tolerances for in-FoV steерing — documented in the README).
// Sampling is uniform in the direction cosine so all oscillatory terms advance
// by constant rotations (no per-sample transcendentals in the hot loop).
// ---------------------------------------------------------------------------

void BeamEvaluator::ensure_steering(double az_deg, double el_deg) {
  if (steer_set_ && az_deg == steer_az_ && el_deg == steer_el_) return;
  steer_az_ = az_deg;
  steer_el_ = el_deg;
  steer_set_ = true;
  u0_ = dir_u(az_deg, el_deg);
  v0_ = dir_v(el_deg);
  // Steering phases are per port (constant across each subarray), so the
  // power-integral folding needs cosines at port lags, not element lags.
  const double kdp = k_ * dp_;
  cosp_u0_.resize(n_);
  cosp_v0_.resize(n_);
  for (int p = 0; p < n_; ++p) {
    cosp_u0_[p] = std::cos(kdp * p * u0_);
    cosp_v0_[p] = std::cos(kdp * p * v0_);
  }
}

void BeamEvaluator::compute_axis_counts(const WeightMatrix& w) {
  const int n = n_;
  row_half_.assign(n / 2, 0.0);
  col_half_.assign(n / 2, 0.0);
  row_masks_.assign(n, 0);
  std::vector<int> rows(n, 0), cols(n, 0);
  for (int ix = 0; ix < n; ++ix) {
    uint64_t m = 0;
    for (int iy = 0; iy < n; ++iy) {
      if (w.bit(ix, iy)) {
        m |= uint64_t{1} << iy;
        ++rows[ix];
        ++cols[iy];
      }
    }
    row_masks_[ix] = m;
  }
  // Mirror symmetry: counts for the positive half-axis; factor 2 in the cuts.
  for (int t = 0; t < n / 2; ++t) {
    row_half_[t] = rows[n / 2 + t];
    col_half_[t] = cols[n / 2 + t];
  }
  row_lo_ = 0;
  row_hi_ = n - 1;
  while (row_lo_ < n && rows[row_lo_] == 0) ++row_lo_;
  while (row_hi_ >= 0 && rows[row_hi_] == 0) --row_hi_;
  col_lo_ = 0;
  col_hi_ = n - 1;
  while (col_lo_ < n && cols[col_lo_] == 0) ++col_lo_;
  while (col_hi_ >= 0 && cols[col_hi_] == 0) --col_hi_;
}

namespace {

// Power along one principal plane at uniform direction-cosine steps.
// x sweeps the cut axis; c is the fixed orthogonal direction cosine.
//   field(x) = elem(x) · s_fixed · S(x) · 2·sum_t counts[t]·cos((t+0.5)·k·dp·(x−x0))
// with S(x) the subarray factor along the swept axis.
void fill_block(double x_begin, double dx, int count, const std::vector<double>& counts,
                int t_max, double c_fixed, double x0, double s_fixed, double k,
                double dp, double ds, int nsub, double q, double* out) {
  const double kdp = k * dp, kds = k * ds;
  // Rotation streams for cos(a/2) and cos(psi/2) (a = kdp·(x−x0), psi = kds·x).
  double zr = std::cos(0.5 * kdp * (x_begin - x0)), zi = std::sin(0.5 * kdp * (x_begin - x0));
  const double dzr = std::cos(0.5 * kdp * dx), dzi = std::sin(0.5 * kdp * dx);
  double yr = std::cos(0.5 * kds * x_begin), yi = std::sin(0.5 * kds * x_begin);
  const double dyr = std::cos(0.5 * kds * dx), dyi = std::sin(0.5 * kds * dx);

  const double c2 = c_fixed * c_fixed;
  const bool q_is_one = q == 1.0;
  const bool q_is_zero = q == 0.0;
  const int sub_pairs = nsub / 2;
  const bool sub_odd = (nsub % 2) != 0;

  double x = x_begin;
  for (int i = 0; i < count; ++i, x += dx) {
    const double w2 = 1.0 - c2 - x * x;
    if (w2 <= 0.0) {
      out[i] = 0.0;
    } else {
      // Port factor via the half-integer cosine recurrence.
      const double c0 = zr;                // cos(a/2)
      const double ca = 2.0 * c0 * c0 - 1.0;  // cos(a)
      double pm1 = c0, p = ca * c0 * 2.0 - c0, port = counts[0] * c0;
      for (int t = 1; t <= t_max; ++t) {
        port += counts[t] * p;
        const double nx = 2.0 * ca * p - pm1;
        pm1 = p;
        p = nx;
      }
      port *= 2.0;

      // Subarray factor along the swept axis.
      double sub;
      const double s0 = yr;                   // cos(psi/2)
      const double cs = 2.0 * s0 * s0 - 1.0;  // cos(psi)
      if (!sub_odd) {
        double qm1 = s0, qq = 2.0 * cs * s0 - s0, acc = s0;
        for (int t = 1; t < sub_pairs; ++t) {
          acc += qq;
          const double nx = 2.0 * cs * qq - qm1;
          qm1 = qq;
          qq = nx;
        }
        sub = 2.0 * acc;
      } else {
        double qm1 = 1.0, qq = cs, acc = 0.5;
        for (int t = 1; t <= sub_pairs; ++t) {
          acc += qq;
          const double nx = 2.0 * cs * qq - qm1;
          qm1 = qq;
          qq = nx;
        }
        sub = 2.0 * acc;
      }

      const double elem = q_is_one ? std::sqrt(w2) : (q_is_zero ? 1.0 : std::pow(w2, 0.5 * q));
      const double f = elem * s_fixed * sub * port;
      out[i] = f * f;
    }
    // Advance both rotation streams.
    const double nzr = zr * dzr - zi * dzi, nzi = zr * dzi + zi * dzr;
    zr = nzr;
    zi = nzi;
    const double nyr = yr * dyr - yi * dyi, nyi = yr * dyi + yi * dyr;
    yr = nyr;
    yi = nyi;
  }
}

double subarray_factor_1d(double kds, int nsub, double x) {
  double s = 0.0;
  for (int t = 0; t < nsub; ++t) s += std::cos(kds * (t - (nsub - 1) * 0.5) * x);
  return s;
}

struct Crossing {
  double angle_deg;
  bool ok;
};

}  // namespace

BeamEvaluator::BeamEvaluator(const ArrayConfig& cfg) : cfg_(cfg) {
  cfg_.validate();
  if (cfg_.n_ports > 64)
    throw ConfigError("BeamEvaluator supports at most 64 ports per axis");
  k_ = cfg_.wavenumber();
  dp_ = cfg_.port_spacing_m;
  ds_ = cfg_.subarray_spacing_m;
  n_ = cfg_.n_ports;
  nsub_ = cfg_.subarray_n;
  nel_ = n_ * nsub_;
  build_integration_table();  // defined in directivity.cpp
}

BeamEvaluator::CutMetrics BeamEvaluator::analyze_plane(CutPlane plane) {
  const bool az = plane == CutPlane::Azimuth;
  const double x0 = az ? u0_ : v0_;
  const double c = az ? v0_ : u0_;
  // angle = asin(x / scale); azimuth carries the cos(el0) projection.
  const double scale = az ? std::sqrt(std::max(1e-12, 1.0 - v0_ * v0_)) : 1.0;
  const auto& counts = az ? row_half_ : col_half_;
  int t_max = static_cast<int>(counts.size()) - 1;
  while (t_max > 0 && counts[t_max] == 0.0) --t_max;
  const double s_fixed = subarray_factor_1d(k_ * ds_, nsub_, c);
  const double x_vis = std::sqrt(std::max(0.0, 1.0 - c * c)) * (1.0 - 1e-12);
  const double x_mask = std::sin(cfg_.fov_half_angle_deg * kRadPerDeg) * scale;

  // Boresight-centered sparse block for the sidelobe window.
  const double dxc = 0.02 * kRadPerDeg * scale;
  const double half_c = std::min(std::sin((cfg_.fov_half_angle_deg + 2.0) * kRadPerDeg) * scale, x_vis);
  const int mc = static_cast<int>(std::floor(half_c / dxc));

  static constexpr double kFineHalfDeg[4] = {1.5, 6.0, 24.0, 89.0};
  static constexpr double kFineStepDeg[4] = {0.002, 0.008, 0.032, 0.128};

  std::vector<double> xs, p2s;
  std::vector<double> fine_p2, coarse_p2(static_cast<size_t>(2 * mc + 1));

  // Coarse block is level-independent; fill once.
  fill_block(-mc * dxc, dxc, 2 * mc + 1, counts, t_max, c, x0, s_fixed, k_, dp_,
             ds_, nsub_, cfg_.element_exponent_q, coarse_p2.data());

  std::string last_err;
  for (int level = 0; level < 4; ++level) {
    const double dxf = kFineStepDeg[level] * kRadPerDeg * scale;
    const double half_f = std::sin(std::min(89.9, kFineHalfDeg[level]) * kRadPerDeg) * scale;
    // Fine window centered at the steering coordinate, clipped to visibility.
    const int nf_half = static_cast<int>(std::floor(half_f / dxf));
    int lo = std::max(-nf_half, static_cast<int>(std::ceil((-x_vis - x0) / dxf)));
    int hi = std::min(nf_half, static_cast<int>(std::floor((x_vis - x0) / dxf)));
    if (hi - lo < 8) {
      last_err = "beam evaluation: visible window too small";
      continue;
    }
    const int nf = hi - lo + 1;
    fine_p2.resize(nf);
    const double xf_begin = x0 + lo * dxf;
    fill_block(xf_begin, dxf, nf, counts, t_max, c, x0, s_fixed, k_, dp_, ds_,
               nsub_, cfg_.element_exponent_q, fine_p2.data());

    // Merge: coarse-left + fine + coarse-right, sorted in x.
    xs.clear();
    p2s.clear();
    xs.reserve(nf + coarse_p2.size());
    p2s.reserve(nf + coarse_p2.size());
    const double xf_end = xf_begin + (nf - 1) * dxf;
    for (int j = -mc; j <= mc; ++j) {
      const double x = j * dxc;
      if (x < xf_begin - 0.5 * dxc) {
        xs.push_back(x);
        p2s.push_back(coarse_p2[j + mc]);
      }
    }
    const size_t fine_at = xs.size();
    for (int i = 0; i < nf; ++i) {
      xs.push_back(xf_begin + i * dxf);
      p2s.push_back(fine_p2[i]);
    }
    for (int j = -mc; j <= mc; ++j) {
      const double x = j * dxc;
      if (x > xf_end + 0.5 * dxc) {
        xs.push_back(x);
        p2s.push_back(coarse_p2[j + mc]);
      }
    }

    // Peak must lie in the fine block (it contains the steering direction).
    size_t pk = fine_at;
    for (size_t i = fine_at; i < fine_at + nf; ++i)
      if (p2s[i] > p2s[pk]) pk = i;
    const double pk2 = p2s[pk];
    if (!(pk2 > 0.0)) {
      last_err = "beam evaluation: pattern is zero at the steering direction";
      continue;
    }

    // −3 dB crossings, interpolated linearly in dB over angle.
    const double target = pk2 * kHalfPowerRatio;
    auto find_cross = [&](int dir) -> Crossing {
      size_t i = pk;
      while (true) {
        const size_t j = i + dir;
        if (j >= xs.size()) return {0.0, false};
        if (p2s[j] <= target) {
          const double gi = to_db(p2s[i], pk2);
          const double gj = to_db(p2s[j], pk2);
          const double ai = std::asin(std::clamp(xs[i] / scale, -1.0, 1.0)) * kDegPerRad;
          const double aj = std::asin(std::clamp(xs[j] / scale, -1.0, 1.0)) * kDegPerRad;
          const double t = (gi - (-3.0)) / (gi - gj);
          return {ai + t * (aj - ai), true};
        }
        i = j;
      }
    };
    const Crossing right = find_cross(+1);
    const Crossing left = find_cross(-1);
    if (!right.ok || !left.ok) {
      last_err = "beam evaluation: -3 dB crossing outside widest window";
      continue;  // widen the fine window and retry
    }

    // Main-lobe nulls, then the peak sidelobe inside the FoV mask.
    size_t null_r = xs.size() - 1;
    for (size_t i = pk; i + 1 < xs.size(); ++i)
      if (p2s[i + 1] > p2s[i]) {
        null_r = i;
        break;
      }
    size_t null_l = 0;
    for (size_t i = pk; i > 0; --i)
      if (p2s[i - 1] > p2s[i]) {
        null_l = i;
        break;
      }
    bool sll_found = false;
    double sll_best = 0.0;
    for (size_t i = 1; i + 1 < xs.size(); ++i) {
      if (i >= null_l && i <= null_r) continue;
      if (std::abs(xs[i]) > x_mask) continue;
      if (p2s[i] > p2s[i - 1] && p2s[i] >= p2s[i + 1]) {
        if (!sll_found || p2s[i] > sll_best) {
          sll_found = true;
          sll_best = p2s[i];
        }
      }
    }

    CutMetrics out;
    out.bw_deg = right.angle_deg - left.angle_deg;
    out.sll_found = sll_found;
    out.sll_db = sll_found ? to_db(sll_best, pk2) : 0.0;
    out.peak_angle_deg = std::asin(std::clamp(xs[pk] / scale, -1.0, 1.0)) * kDegPerRad;
    out.peak_p2 = pk2;
    return out;
  }
  throw DataError(last_err.empty() ? "beam evaluation failed" : last_err);
}

BeamMetrics BeamEvaluator::evaluate(const WeightMatrix& w) {
  if (w.n_ports() != n_)
    throw ConfigError("weight matrix port count does not match evaluator config");
  ensure_steering(w.steer_az_deg(), w.steer_el_deg());
  compute_axis_counts(w);

  const CutMetrics az = analyze_plane(CutPlane::Azimuth);
  const CutMetrics el = analyze_plane(CutPlane::Elevation);
  if (!az.sll_found || !el.sll_found)
    throw DataError("beam evaluation: no sidelobe within the field of view");

  const double pk2 = std::max(az.peak_p2, el.peak_p2);
  const double omega = omega_exact(w);
  if (!(omega > 0.0)) throw NumericError("beam evaluation: nonpositive power integral");
  const double d_lin = 4.0 * kPi * pk2 / omega;
  const double d_dbi = 10.0 * std::log10(d_lin);

  BeamMetrics m;
  m.bw_az_deg = az.bw_deg;
  m.bw_el_deg = el.bw_deg;
  m.sll_az_db = az.sll_db;
  m.sll_el_db = el.sll_db;
  m.directivity_dbi = d_dbi;
  m.eirp_dbw = 10.0 * std::log10(w.n_active() * cfg_.p_element_w) + d_dbi;
  m.peak_az_deg = az.peak_angle_deg;
  m.peak_el_deg = el.peak_angle_deg;
  return m;
}

double BeamEvaluator::directive_gain_dbi(const WeightMatrix& w, double az_deg,
                                         double el_deg) {
  if (w.n_ports() != n_)
    throw ConfigError("weight matrix port count does not match evaluator config");
  ensure_steering(w.steer_az_deg(), w.steer_el_deg());
  compute_axis_counts(w);
  const double omega = omega_exact(w);
  const double p2 = std::norm(array_factor(cfg_, w, az_deg, el_deg));
  if (!(p2 > 0.0)) return kMinusInfDb;
  return 10.0 * std::log10(4.0 * kPi * p2 / omega);
}

double BeamEvaluator::pattern_power_integral(const WeightMatrix& w) {
  if (w.n_ports() != n_)
    throw ConfigError("weight matrix port count does not match evaluator config");
  ensure_steering(w.steer_az_deg(), w.steer_el_deg());
  compute_axis_counts(w);
  return omega_exact(w);
}

}  // namespace dra
