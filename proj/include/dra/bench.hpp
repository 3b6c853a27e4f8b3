#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "dra/approaches.hpp"
#include "dra/dataset.hpp"
#include "dra/ga.hpp"
#include "dra/kpi.hpp"
#include "dra/link_budget.hpp"
#include "dra/ml_metrics.hpp"

namespace dra {

// One approach's aggregate over the benchmark sample set.
struct ApproachBench {
  std::string name;
  KpiReport mean;                // field-wise mean of rows
  std::vector<KpiReport> rows;   // per-sample reports, sample order
  MultilabelCounts micro;        // pooled bit counts vs. the optimizer labels
  double mean_time_s = 0.0;
  double median_time_s = 0.0;
  std::size_t n_samples = 0;
  std::size_t n_eval_failures = 0;  // produced matrices that broke evaluation
};

struct BenchResult {
  int schema = 1;
  std::string config_digest;
  std::uint64_t ga_seed = 0;
  double ga_mean_time_s = 0.0;  // KPI 6 reference for every approach
  ApproachBench ga;
  ApproachBench approach1;
  ApproachBench approach2;

  std::string to_json() const;   // summary (means, timings, seeds, digest)
  std::string rows_csv() const;  // approach,sample,<per-sample KPI columns>
};

struct BenchOptions {
  bool kpi5_complement = false;
  std::size_t max_samples = 0;  // 0 = use the whole validation split
};

// For every validation-split target: run the optimizer, run both model
// inferences (timed around the inference call only), evaluate every produced
// matrix, and score the six KPIs. KPI 6 uses the optimizer's mean wall time
// as the reference. Throws DataError on an empty validation split.
BenchResult run_bench(const Dataset& ds, const ArrayConfig& cfg,
                      const CostWeights& kw, const GaParams& gp,
                      const MlpModel& a1_model, const MlpModel& classifier,
                      const KMeansModel& km, const LinkGeometry& geom,
                      const BenchOptions& opt = {},
                      std::ostream* progress = nullptr);

}  // namespace dra
