#include "dra/kmeans.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "dra/errors.hpp"
#include "dra/ga.hpp"
#include "dra/pattern.hpp"
#include "dra/rng.hpp"
#include "dra/weight_matrix.hpp"

namespace dra {

namespace {
constexpr int kDim = FeatureScaler::kDim;
using Row = std::array<double, kDim>;

double dist2(const Row& a, const Row& b) {
  double s = 0.0;
  for (int i = 0; i < kDim; ++i) {
    const double d = a[i] - b[i];
    s += d * d;
  }
  return s;
}
}  // namespace

int KMeansModel::assign(const Row& x) const {
  if (!trained()) throw DataError("cluster model used before fitting");
  int best = 0;
  double best_d = dist2(x, centroids[0]);
  for (int c = 1; c < n_clusters; ++c) {
    const double d = dist2(x, centroids[c]);
    if (d < best_d) {
      best_d = d;
      best = c;
    }
  }
  return best;
}

KMeansModel kmeans_fit(const std::vector<Row>& rows, int n_clusters,
                       std::uint64_t seed) {
  if (n_clusters < 1)
    throw ConfigError("cluster count must be at least 1");
  if (static_cast<std::size_t>(n_clusters) > rows.size())
    throw DataError("cluster count " + std::to_string(n_clusters) +
                    " exceeds the number of points " +
                    std::to_string(rows.size()));
  const std::size_t n = rows.size();
  Rng rng(Rng::mix(seed, 0x4B4D454Eull));

  // Distance-weighted seeding: each new centroid is drawn with probability
  // proportional to the squared distance from the nearest existing one.
  std::vector<Row> centroids;
  centroids.reserve(n_clusters);
  centroids.push_back(rows[rng.below(n)]);
  std::vector<double> d2(n);
  for (int c = 1; c < n_clusters; ++c) {
    double total = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double best = dist2(rows[i], centroids[0]);
      for (std::size_t j = 1; j < centroids.size(); ++j)
        best = std::min(best, dist2(rows[i], centroids[j]));
      d2[i] = best;
      total += best;
    }
    if (total <= 0.0) {
      // All points already coincide with a centroid; duplicate one.
      centroids.push_back(rows[rng.below(n)]);
      continue;
    }
    double pick = rng.uniform() * total;
    std::size_t chosen = n - 1;
    for (std::size_t i = 0; i < n; ++i) {
      pick -= d2[i];
      if (pick <= 0.0) {
        chosen = i;
        break;
      }
    }
    centroids.push_back(rows[chosen]);
  }

  std::vector<int> assign(n, -1);
  std::vector<int> prev_assign(n, -2);
  double inertia = 0.0;
  for (int iter = 0; iter < 300; ++iter) {
    // Assignment step.
    inertia = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      int best = 0;
      double best_d = dist2(rows[i], centroids[0]);
      for (int c = 1; c < n_clusters; ++c) {
        const double d = dist2(rows[i], centroids[c]);
        if (d < best_d) {
          best_d = d;
          best = c;
        }
      }
      assign[i] = best;
      inertia += best_d;
    }
    if (assign == prev_assign) break;
    prev_assign = assign;

    // Update step.
    std::vector<Row> sums(n_clusters, Row{});
    std::vector<std::size_t> counts(n_clusters, 0);
    for (std::size_t i = 0; i < n; ++i) {
      for (int d = 0; d < kDim; ++d) sums[assign[i]][d] += rows[i][d];
      ++counts[assign[i]];
    }
    for (int c = 0; c < n_clusters; ++c) {
      if (counts[c] == 0) {
        // Re-seed an empty cluster at the point farthest from its centroid.
        std::size_t far_ix = 0;
        double far_d = -1.0;
        for (std::size_t i = 0; i < n; ++i) {
          const double d = dist2(rows[i], centroids[assign[i]]);
          if (d > far_d) {
            far_d = d;
            far_ix = i;
          }
        }
        centroids[c] = rows[far_ix];
        continue;
      }
      for (int d = 0; d < kDim; ++d)
        centroids[c][d] = sums[c][d] / double(counts[c]);
    }
  }

  KMeansModel m;
  m.n_clusters = n_clusters;
  m.centroids = std::move(centroids);
  m.inertia = inertia;
  return m;
}

std::vector<InertiaPoint> inertia_sweep(const std::vector<Row>& rows,
                                        const std::vector<int>& ks,
                                        std::uint64_t seed) {
  std::vector<InertiaPoint> out;
  for (int k : ks) {
    if (static_cast<std::size_t>(k) > rows.size()) continue;
    out.push_back({k, kmeans_fit(rows, k, seed).inertia});
  }
  if (out.empty())
    throw DataError("no candidate cluster count fits the point count");
  return out;
}

int pick_elbow(const std::vector<InertiaPoint>& sweep) {
  if (sweep.empty()) throw DataError("elbow pick needs a nonempty sweep");
  if (sweep.size() < 3) return sweep.front().k;
  int best_k = sweep[1].k;
  double best_d2 = -std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i + 1 < sweep.size(); ++i) {
    const double second_diff =
        sweep[i - 1].inertia - 2.0 * sweep[i].inertia + sweep[i + 1].inertia;
    if (second_diff > best_d2) {
      best_d2 = second_diff;
      best_k = sweep[i].k;
    }
  }
  return best_k;
}

std::vector<std::uint8_t> cluster_representative(
    const Dataset& ds, const std::vector<std::size_t>& member_indices,
    const ArrayConfig& cfg, const CostWeights& kw, int spec_subset_cutoff) {
  if (member_indices.empty())
    throw DataError("cannot pick a representative of an empty cluster");
  if (member_indices.size() == 1)
    return ds.samples[member_indices[0]].quadrant_bits;

  // Spec subset: all member targets at desk scale, a deterministic strided
  // subset above the cutoff.
  std::vector<std::size_t> spec_ix;
  if (spec_subset_cutoff > 0 &&
      member_indices.size() > static_cast<std::size_t>(spec_subset_cutoff)) {
    const double stride =
        double(member_indices.size()) / double(spec_subset_cutoff);
    for (int j = 0; j < spec_subset_cutoff; ++j)
      spec_ix.push_back(member_indices[static_cast<std::size_t>(j * stride)]);
  } else {
    spec_ix = member_indices;
  }

  BeamEvaluator eval(cfg);
  double best_mean = std::numeric_limits<double>::infinity();
  std::size_t best_member = member_indices[0];
  for (const std::size_t cand : member_indices) {
    const auto& bits = ds.samples[cand].quadrant_bits;
    double total = 0.0;
    for (const std::size_t six : spec_ix) {
      const BeamSpec& spec = ds.samples[six].spec;
      double c = 1e6;  // unreachable layouts stay expensive
      try {
        WeightMatrix w(cfg, expand_quadrant(bits, cfg.n_ports),
                       spec.steer_az_deg, spec.steer_el_deg);
        c = cost(eval.evaluate(w), spec, kw);
      } catch (const DataError&) {
      } catch (const NumericError&) {
      }
      total += c;
    }
    const double mean = total / double(spec_ix.size());
    if (mean < best_mean) {
      best_mean = mean;
      best_member = cand;
    }
  }
  return ds.samples[best_member].quadrant_bits;
}

std::vector<int> cluster_labels(const KMeansModel& km, const Dataset& ds,
                                Split split) {
  if (!km.trained()) throw DataError("cluster model used before fitting");
  if (!km.scaler.fitted())
    throw DataError("cluster model is missing its feature scaler");
  std::vector<int> labels;
  for (std::size_t ix : ds.split_indices(split))
    labels.push_back(
        km.assign(km.scaler.transform(ds.samples[ix].spec.to_features())));
  return labels;
}

TrainOutcome train_cluster_classifier(const Dataset& ds, const KMeansModel& km,
                                      const TrainConfig& tc) {
  tc.validate();
  if (!km.trained()) throw DataError("cluster model used before fitting");
  if (!km.scaler.fitted())
    throw DataError("cluster model is missing its feature scaler");
  const auto one_hot = [&](int c) {
    std::vector<double> y(static_cast<std::size_t>(km.n_clusters), 0.0);
    y[static_cast<std::size_t>(c)] = 1.0;
    return y;
  };
  const auto rows_for = [&](Split split, std::vector<std::vector<double>>& Xo,
                            std::vector<std::vector<double>>& Yo) {
    for (std::size_t ix : ds.split_indices(split)) {
      const auto f = km.scaler.transform(ds.samples[ix].spec.to_features());
      Xo.emplace_back(f.begin(), f.end());
      Yo.push_back(one_hot(km.assign(f)));
    }
  };
  std::vector<std::vector<double>> X, Y, Xv, Yv;
  rows_for(Split::Train, X, Y);
  rows_for(Split::Validation, Xv, Yv);
  if (X.empty()) throw DataError("training requires a nonempty train split");
  TrainOutcome out = train_network(X, Y, Xv, Yv, OutputKind::Softmax, tc);
  out.model.scaler = km.scaler;
  return out;
}

double classifier_accuracy(const MlpModel& classifier, const KMeansModel& km,
                           const Dataset& ds, Split split) {
  const auto ix = ds.split_indices(split);
  if (ix.empty()) throw DataError("accuracy over an empty split is undefined");
  std::size_t hits = 0;
  for (std::size_t i : ix) {
    const auto f = km.scaler.transform(ds.samples[i].spec.to_features());
    const auto probs = classifier.forward({f.begin(), f.end()});
    const int pred = static_cast<int>(
        std::max_element(probs.begin(), probs.end()) - probs.begin());
    if (pred == km.assign(f)) ++hits;
  }
  return double(hits) / double(ix.size());
}

}  // namespace dra
