#pragma once

#include <string>
#include <vector>

#include "dra/array_config.hpp"
#include "dra/kmeans.hpp"
#include "dra/mlp.hpp"
#include "dra/objective.hpp"
#include "dra/weight_matrix.hpp"

namespace dra {

// Direct multi-label route: normalize the spec through the model's scaler,
// run the network, threshold each output, mirror the bits into a full
// steered weight matrix. Features outside the scaler's fitted range are
// allowed (with a stderr warning). Throws DataError on an untrained or
// dimension-mismatched model.
WeightMatrix approach1_infer(const MlpModel& model, const BeamSpec& spec,
                             const ArrayConfig& cfg);

// Raw predicted quadrant bits (before mirroring), for scoring against labels.
std::vector<std::uint8_t> approach1_predict_bits(const MlpModel& model,
                                                 const BeamSpec& spec);

// Codebook route: classify the spec into a cluster, emit that cluster's
// representative matrix with the spec's steering. Throws DataError on an
// untrained pair or a missing representative.
WeightMatrix approach2_infer(const MlpModel& classifier, const KMeansModel& km,
                             const BeamSpec& spec, const ArrayConfig& cfg);

std::vector<std::uint8_t> approach2_predict_bits(const MlpModel& classifier,
                                                 const KMeansModel& km,
                                                 const BeamSpec& spec);

// Versioned JSON model files. Loads validate schema/type and reject
// malformed content with DataError; round-trips are bit-exact.
void save_mlp_json(const MlpModel& model, const std::string& path);
MlpModel load_mlp_json(const std::string& path);
void save_kmeans_json(const KMeansModel& model, const std::string& path);
KMeansModel load_kmeans_json(const std::string& path);

}  // namespace dra
