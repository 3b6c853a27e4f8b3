#include "dra/weight_matrix.hpp"

#include <cmath>
#include <string>

#include "dra/errors.hpp"

namespace dra {

WeightMatrix::WeightMatrix(const ArrayConfig& cfg, std::vector<uint8_t> bits,
                           double steer_az_deg, double steer_el_deg)
    : n_(cfg.n_ports),
      bits_(std::move(bits)),
      steer_az_deg_(steer_az_deg),
      steer_el_deg_(steer_el_deg) {
  cfg.validate();
  const size_t need = static_cast<size_t>(n_) * n_;
  if (bits_.size() != need)
    throw DataError("weight matrix: expected " + std::to_string(need) +
                    " bits, got " + std::to_string(bits_.size()));
  int active = 0;
  for (size_t i = 0; i < bits_.size(); ++i) {
    if (bits_[i] > 1) throw DataError("weight matrix: bits must be 0 or 1");
    active += bits_[i];
  }
  if (active == 0) throw DataError("weight matrix: at least one bit must be active");
  n_active_ = active;
  for (int m = 0; m < n_; ++m) {
    for (int nn = 0; nn < n_; ++nn) {
      const uint8_t b = bits_[m * n_ + nn];
      if (b != bits_[(n_ - 1 - m) * n_ + nn] || b != bits_[m * n_ + (n_ - 1 - nn)])
        throw DataError("weight matrix: quadrant symmetry violated at (" +
                        std::to_string(m) + "," + std::to_string(nn) + ")");
    }
  }
  const double fov = cfg.fov_half_angle_deg;
  if (std::abs(steer_az_deg_) > fov || std::abs(steer_el_deg_) > fov)
    throw ConfigError("steering (" + std::to_string(steer_az_deg_) + ", " +
                      std::to_string(steer_el_deg_) +
                      ") deg outside field of view +-" + std::to_string(fov) + " deg");
}

WeightMatrix WeightMatrix::all_on(const ArrayConfig& cfg, double steer_az_deg,
                                  double steer_el_deg) {
  std::vector<uint8_t> b(static_cast<size_t>(cfg.n_ports) * cfg.n_ports, 1);
  return WeightMatrix(cfg, std::move(b), steer_az_deg, steer_el_deg);
}

}  // namespace dra
