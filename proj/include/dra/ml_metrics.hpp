#pragma once

#include <cstdint>
#include <vector>

namespace dra {

// Micro-averaged multi-label counts over bit pairs, accumulated across any
// number of prediction/label vectors.
struct MultilabelCounts {
  long long tp = 0;
  long long fp = 0;
  long long fn = 0;
  long long tn = 0;

  // Throws DataError on length mismatch or empty vectors.
  void add(const std::vector<std::uint8_t>& predicted,
           const std::vector<std::uint8_t>& truth);

  long long total() const { return tp + fp + fn + tn; }
  double precision() const;         // tp/(tp+fp), 0 when undefined
  double recall() const;            // tp/(tp+fn), 0 when undefined
  double f1() const;                // harmonic mean, 0 when P+R = 0
  double hamming_accuracy() const;  // (tp+tn)/total
};

// Single-pair convenience wrapper.
MultilabelCounts multilabel_metrics(const std::vector<std::uint8_t>& predicted,
                                    const std::vector<std::uint8_t>& truth);

}  // namespace dra
