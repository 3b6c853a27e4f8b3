#pragma once

#include <cstdint>
#include <vector>

#include "dra/array_config.hpp"

namespace dra {

// Binary port-amplitude matrix with two-axis mirror (quadrant) symmetry and a
// steering direction. Index convention: bit(ix, iy) with ix along the azimuth
// axis and iy along the elevation axis, stored row-major ix*N + iy.
class WeightMatrix {
 public:
  // Validates size, 0/1 values, quadrant symmetry, >=1 active bit, and
  // steering within the config's field of view.
  WeightMatrix(const ArrayConfig& cfg, std::vector<uint8_t> bits,
               double steer_az_deg, double steer_el_deg);

  static WeightMatrix all_on(const ArrayConfig& cfg, double steer_az_deg = 0.0,
                             double steer_el_deg = 0.0);

  int n_ports() const { return n_; }
  bool bit(int ix, int iy) const { return bits_[ix * n_ + iy] != 0; }
  const std::vector<uint8_t>& bits() const { return bits_; }
  int n_active() const { return n_active_; }
  double steer_az_deg() const { return steer_az_deg_; }
  double steer_el_deg() const { return steer_el_deg_; }

 private:
  int n_;
  std::vector<uint8_t> bits_;
  int n_active_;
  double steer_az_deg_;
  double steer_el_deg_;
};

}  // namespace dra
