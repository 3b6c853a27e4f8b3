#include "dra/scaler.hpp"

#include <cmath>
#include <cstdio>

#include "dra/errors.hpp"

namespace dra {

FeatureScaler FeatureScaler::fit(
    const std::vector<std::array<double, kDim>>& rows) {
  if (rows.empty())
    throw DataError("cannot fit a feature scaler on an empty row set");
  FeatureScaler s;
  for (int i = 0; i < kDim; ++i) {
    double lo = rows[0][i];
    double hi = rows[0][i];
    for (const auto& r : rows) {
      if (!std::isfinite(r[i]))
        throw DataError("non-finite feature value at column " +
                        std::to_string(i));
      lo = std::min(lo, r[i]);
      hi = std::max(hi, r[i]);
    }
    s.min_[i] = lo;
    s.max_[i] = hi;
    if (lo == hi)
      std::fprintf(stderr,
                   "warning: feature column %d is constant (%g); it will "
                   "normalize to 0\n",
                   i, lo);
  }
  s.fitted_ = true;
  return s;
}

FeatureScaler FeatureScaler::fit_split(const Dataset& ds, Split split) {
  return fit(ds.feature_rows(split));
}

std::array<double, FeatureScaler::kDim> FeatureScaler::transform(
    const std::array<double, kDim>& x) const {
  if (!fitted_) throw DataError("feature scaler used before fitting");
  std::array<double, kDim> y{};
  for (int i = 0; i < kDim; ++i)
    y[i] = (min_[i] == max_[i]) ? 0.0 : (x[i] - min_[i]) / (max_[i] - min_[i]);
  return y;
}

std::array<double, FeatureScaler::kDim> FeatureScaler::inverse(
    const std::array<double, kDim>& y) const {
  if (!fitted_) throw DataError("feature scaler used before fitting");
  std::array<double, kDim> x{};
  for (int i = 0; i < kDim; ++i)
    x[i] = (min_[i] == max_[i]) ? min_[i] : min_[i] + y[i] * (max_[i] - min_[i]);
  return x;
}

void FeatureScaler::set_bounds(const std::array<double, kDim>& mins,
                               const std::array<double, kDim>& maxs) {
  min_ = mins;
  max_ = maxs;
  fitted_ = true;
}

}  // namespace dra
