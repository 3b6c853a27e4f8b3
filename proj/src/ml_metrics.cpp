#include "dra/ml_metrics.hpp"

#include <string>

#include "dra/errors.hpp"

namespace dra {

void MultilabelCounts::add(const std::vector<std::uint8_t>& predicted,
                           const std::vector<std::uint8_t>& truth) {
  if (predicted.size() != truth.size())
    throw DataError("prediction has " + std::to_string(predicted.size()) +
                    " bits but truth has " + std::to_string(truth.size()));
  if (predicted.empty())
    throw DataError("cannot score empty bit vectors");
  for (std::size_t i = 0; i < predicted.size(); ++i) {
    const bool p = predicted[i] != 0;
    const bool t = truth[i] != 0;
    if (p && t)
      ++tp;
    else if (p && !t)
      ++fp;
    else if (!p && t)
      ++fn;
    else
      ++tn;
  }
}

double MultilabelCounts::precision() const {
  return (tp + fp) > 0 ? double(tp) / double(tp + fp) : 0.0;
}

double MultilabelCounts::recall() const {
  return (tp + fn) > 0 ? double(tp) / double(tp + fn) : 0.0;
}

double MultilabelCounts::f1() const {
  const double p = precision();
  const double r = recall();
  return (p + r) > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

double MultilabelCounts::hamming_accuracy() const {
  return total() > 0 ? double(tp + tn) / double(total()) : 0.0;
}

MultilabelCounts multilabel_metrics(const std::vector<std::uint8_t>& predicted,
                                    const std::vector<std::uint8_t>& truth) {
  MultilabelCounts c;
  c.add(predicted, truth);
  return c;
}

}  // namespace dra
