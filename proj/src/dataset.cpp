#include "dra/dataset.hpp"

#include <algorithm>
#include <cmath>

#include "dra/errors.hpp"
#include "dra/rng.hpp"

namespace dra {

const char* split_name(Split s) {
  switch (s) {
    case Split::Train:
      return "train";
    case Split::Test:
      return "test";
    case Split::Validation:
      return "validation";
    case Split::Unassigned:
      return "unassigned";
  }
  return "unassigned";
}

Split split_from_name(const std::string& name) {
  if (name == "train") return Split::Train;
  if (name == "test") return Split::Test;
  if (name == "validation") return Split::Validation;
  if (name == "unassigned") return Split::Unassigned;
  throw DataError("unknown split label: '" + name + "'");
}

std::size_t Dataset::count_split(Split s) const {
  std::size_t n = 0;
  for (const auto& smp : samples)
    if (smp.split == s) ++n;
  return n;
}

std::size_t Dataset::count_accepted() const {
  std::size_t n = 0;
  for (const auto& smp : samples)
    if (smp.accepted) ++n;
  return n;
}

std::vector<std::size_t> Dataset::split_indices(Split s) const {
  std::vector<std::size_t> ix;
  for (std::size_t i = 0; i < samples.size(); ++i)
    if (samples[i].accepted && samples[i].split == s) ix.push_back(i);
  return ix;
}

std::vector<std::array<double, BeamSpec::kFeatureCount>> Dataset::feature_rows(
    Split s) const {
  std::vector<std::array<double, BeamSpec::kFeatureCount>> rows;
  for (const auto& smp : samples)
    if (smp.accepted && smp.split == s) rows.push_back(smp.spec.to_features());
  return rows;
}

void assign_splits(Dataset& ds, double train_ratio, double test_ratio,
                   double validation_ratio, std::uint64_t seed) {
  if (train_ratio < 0.0 || test_ratio < 0.0 || validation_ratio < 0.0)
    throw ConfigError("split ratios must be nonnegative");
  if (std::abs(train_ratio + test_ratio + validation_ratio - 1.0) > 1e-9)
    throw ConfigError("split ratios must sum to 1");
  std::vector<std::size_t> accepted;
  for (std::size_t i = 0; i < ds.samples.size(); ++i) {
    if (ds.samples[i].accepted)
      accepted.push_back(i);
    else
      ds.samples[i].split = Split::Unassigned;
  }
  if (accepted.size() < 10)
    throw DataError("splitting requires at least 10 accepted samples, have " +
                    std::to_string(accepted.size()));

  Rng rng(seed);
  rng.shuffle(accepted);

  // Largest-remainder apportionment over the three labels.
  const double n = static_cast<double>(accepted.size());
  const double exact[3] = {train_ratio * n, test_ratio * n,
                           validation_ratio * n};
  std::size_t counts[3];
  double rema[3];
  std::size_t assigned = 0;
  for (int k = 0; k < 3; ++k) {
    counts[k] = static_cast<std::size_t>(std::floor(exact[k]));
    rema[k] = exact[k] - std::floor(exact[k]);
    assigned += counts[k];
  }
  while (assigned < accepted.size()) {
    int kmax = 0;
    for (int k = 1; k < 3; ++k)
      if (rema[k] > rema[kmax]) kmax = k;
    ++counts[kmax];
    rema[kmax] = -1.0;
    ++assigned;
  }

  std::size_t pos = 0;
  const Split order[3] = {Split::Train, Split::Test, Split::Validation};
  for (int k = 0; k < 3; ++k)
    for (std::size_t c = 0; c < counts[k]; ++c)
      ds.samples[accepted[pos++]].split = order[k];
}

}  // namespace dra
