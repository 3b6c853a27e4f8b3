#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dra/config_file.hpp"
#include "dra/dataset.hpp"
#include "dra/scaler.hpp"

namespace dra {

enum class Optimizer { Sgd, Adam };
enum class OutputKind { Logistic, Softmax };

struct TrainConfig {
  int epochs = 200;
  int batch_size = 128;
  double learning_rate = 1e-3;
  Optimizer optimizer = Optimizer::Adam;
  int early_stop_patience = 10;  // epochs without validation-loss improvement
  std::uint64_t rng_seed = 1;
  double threshold = 0.5;  // bit-decision threshold on logistic outputs
  std::vector<int> hidden_dims = {256, 512, 384};

  void validate() const;
  static TrainConfig from_config(const KeyValueConfig& c);
};

// Fully connected network: rectifier hidden layers, logistic or softmax
// output. Holds the feature scaler it was trained with so inference takes
// raw (unnormalized) features.
class MlpModel {
 public:
  MlpModel() = default;

  // Fresh network with seeded uniform(-1,1)/sqrt(fan_in) weights.
  static MlpModel create(const std::vector<int>& dims, OutputKind kind,
                         std::uint64_t seed);

  bool trained() const { return !layers_.empty(); }
  const std::vector<int>& dims() const { return dims_; }
  OutputKind output_kind() const { return kind_; }
  int input_dim() const;
  int output_dim() const;
  int layer_count() const { return static_cast<int>(layers_.size()); }

  // Deterministic forward pass on normalized features. Throws DataError on a
  // dimension mismatch and NumericError (naming the layer) on non-finite
  // activations.
  std::vector<double> forward(const std::vector<double>& x) const;

  // Mean loss over a batch: binary cross-entropy against per-unit labels for
  // logistic outputs, categorical cross-entropy against one-hot rows for
  // softmax outputs. Predictions are clamped to [1e-7, 1-1e-7].
  double loss(const std::vector<std::vector<double>>& X,
              const std::vector<std::vector<double>>& Y) const;

  // Same loss plus parameter gradients via backpropagation. Gradient layout
  // matches weights(l)/bias(l). Throws NumericError naming the first layer
  // with a non-finite value.
  double loss_and_gradients(const std::vector<std::vector<double>>& X,
                            const std::vector<std::vector<double>>& Y,
                            std::vector<std::vector<double>>& grad_w,
                            std::vector<std::vector<double>>& grad_b) const;

  // Row-major (out x in) weights and per-unit biases of one layer.
  std::vector<double>& weights(int layer);
  std::vector<double>& bias(int layer);
  const std::vector<double>& weights(int layer) const;
  const std::vector<double>& bias(int layer) const;

  FeatureScaler scaler;
  double threshold = 0.5;
  int schema = 1;

 private:
  struct Layer {
    std::vector<double> w;
    std::vector<double> b;
  };
  std::vector<int> dims_;
  OutputKind kind_ = OutputKind::Logistic;
  std::vector<Layer> layers_;
};

// Standalone losses (mean over all elements), matching the model's clamping.
double bce_loss(const std::vector<double>& predictions,
                const std::vector<double>& labels);

struct TrainCurvePoint {
  int epoch = 0;
  double train_loss = 0.0;
  double val_loss = 0.0;
};

struct TrainOutcome {
  MlpModel model;  // best-validation-loss snapshot
  std::vector<TrainCurvePoint> curve;
  double best_val_loss = 0.0;
  int best_epoch = 0;
};

// Mini-batch training with seeded shuffling, early stopping on validation
// loss, and a best-snapshot return. Validation arrays may be empty, in which
// case the training loss drives early stopping. Throws NumericError when the
// loss diverges (suggesting a lower learning rate).
TrainOutcome train_network(const std::vector<std::vector<double>>& X,
                           const std::vector<std::vector<double>>& Y,
                           const std::vector<std::vector<double>>& Xval,
                           const std::vector<std::vector<double>>& Yval,
                           OutputKind kind, const TrainConfig& tc);

// Approach-1 trainer: fit the scaler on the train split, train a multi-label
// network mapping 8 features to the quadrant bits. Uses the validation split
// for early stopping when present. Throws DataError on an empty train split.
TrainOutcome train_mlp(const Dataset& ds, const TrainConfig& tc);

// Training curve as CSV text (`epoch,train_loss,val_loss`).
std::string curve_to_csv(const std::vector<TrainCurvePoint>& curve);

}  // namespace dra
