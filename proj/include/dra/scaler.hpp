#pragma once

#include <array>
#include <vector>

#include "dra/dataset.hpp"
#include "dra/objective.hpp"

namespace dra {

// Per-feature min-max normalizer mapping each feature to [0, 1]. Constant
// features transform to 0 (with a one-time stderr warning at fit time) and
// invert back to their constant value.
class FeatureScaler {
 public:
  static constexpr int kDim = BeamSpec::kFeatureCount;

  FeatureScaler() = default;

  // Fit on explicit feature rows. Throws DataError on an empty set.
  static FeatureScaler fit(
      const std::vector<std::array<double, kDim>>& rows);
  // Convenience: fit on the accepted rows of one split (normally Train).
  static FeatureScaler fit_split(const Dataset& ds, Split split);

  std::array<double, kDim> transform(const std::array<double, kDim>& x) const;
  std::array<double, kDim> inverse(const std::array<double, kDim>& y) const;

  bool fitted() const { return fitted_; }
  const std::array<double, kDim>& mins() const { return min_; }
  const std::array<double, kDim>& maxs() const { return max_; }
  bool is_constant(int i) const { return min_[i] == max_[i]; }

  // Raw accessors used by the model serializer.
  void set_bounds(const std::array<double, kDim>& mins,
                  const std::array<double, kDim>& maxs);

 private:
  std::array<double, kDim> min_{};
  std::array<double, kDim> max_{};
  bool fitted_ = false;
};

}  // namespace dra
