#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "dra/array_config.hpp"
#include "dra/dataset.hpp"
#include "dra/mlp.hpp"
#include "dra/objective.hpp"
#include "dra/scaler.hpp"

namespace dra {

// Codebook model: centroids in normalized feature space plus one
// representative quadrant-bit matrix per cluster.
struct KMeansModel {
  int schema = 1;
  int n_clusters = 0;
  std::vector<std::array<double, FeatureScaler::kDim>> centroids;
  std::vector<std::vector<std::uint8_t>> representatives;  // bits per cluster
  double inertia = 0.0;
  FeatureScaler scaler;

  bool trained() const { return n_clusters >= 1 && !centroids.empty(); }
  // Nearest-centroid index for a normalized feature vector (ties -> lowest
  // index). Throws DataError when untrained.
  int assign(const std::array<double, FeatureScaler::kDim>& x) const;
};

// Lloyd iterations with distance-weighted (k-means++ style) seeding. Stops
// when assignments are stable or after 300 iterations; empty clusters are
// re-seeded from the farthest point. Deterministic for a fixed seed.
// Throws DataError when n_clusters exceeds the number of points.
KMeansModel kmeans_fit(
    const std::vector<std::array<double, FeatureScaler::kDim>>& rows,
    int n_clusters, std::uint64_t seed);

struct InertiaPoint {
  int k = 0;
  double inertia = 0.0;
};

// Inertia for each candidate cluster count (for elbow analysis).
std::vector<InertiaPoint> inertia_sweep(
    const std::vector<std::array<double, FeatureScaler::kDim>>& rows,
    const std::vector<int>& ks, std::uint64_t seed);

// Knee pick: the k maximizing the second difference of inertia over the
// sweep. Needs at least three points; otherwise returns the smallest k.
int pick_elbow(const std::vector<InertiaPoint>& sweep);

// Cost-medoid of a cluster: the member whose bits achieve the lowest mean
// synthesis cost across the member targets (all of them at desk scale, or a
// deterministic strided subset of spec_subset_cutoff specs above it).
// Throws DataError on an empty cluster.
std::vector<std::uint8_t> cluster_representative(
    const Dataset& ds, const std::vector<std::size_t>& member_indices,
    const ArrayConfig& cfg, const CostWeights& kw,
    int spec_subset_cutoff = 64);

// Cluster assignment of every accepted sample in a split (normalized through
// the model's scaler).
std::vector<int> cluster_labels(const KMeansModel& km, const Dataset& ds,
                                Split split);

// Softmax classifier mapping the 8 features to the cluster index, trained on
// the train split with the model's own cluster assignments as labels.
TrainOutcome train_cluster_classifier(const Dataset& ds, const KMeansModel& km,
                                      const TrainConfig& tc);

// Fraction of accepted rows in a split whose predicted cluster matches the
// nearest-centroid assignment.
double classifier_accuracy(const MlpModel& classifier, const KMeansModel& km,
                           const Dataset& ds, Split split);

}  // namespace dra
