#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <sstream>
#include <string>
#include <vector>

#include "doctest.h"
#include "json.hpp"

#include "dra/approaches.hpp"
#include "dra/array_config.hpp"
#include "dra/bench.hpp"
#include "dra/dataset.hpp"
#include "dra/errors.hpp"
#include "dra/ga.hpp"
#include "dra/kmeans.hpp"
#include "dra/link_budget.hpp"
#include "dra/ml_metrics.hpp"
#include "dra/mlp.hpp"
#include "dra/scaler.hpp"

using namespace dra;

namespace {

using Bits = std::vector<std::uint8_t>;

FeatureScaler unit_scaler() {
  FeatureScaler sc;
  std::array<double, 8> lo{0.4, 0.4, -21.0, -21.0, 70.0, -9.0, -9.0, 4.0};
  std::array<double, 8> hi{0.9, 0.9, -12.0, -12.0, 85.0, 9.0, 9.0, 1296.0};
  sc.set_bounds(lo, hi);
  return sc;
}

MlpModel bias_only(OutputKind kind, const std::vector<double>& out_bias) {
  MlpModel m =
      MlpModel::create({8, 4, int(out_bias.size())}, kind, 1);
  for (int l = 0; l < m.layer_count(); ++l)
    std::fill(m.weights(l).begin(), m.weights(l).end(), 0.0);
  m.bias(m.layer_count() - 1) = out_bias;
  m.scaler = unit_scaler();
  return m;
}

KMeansModel toy_codebook() {
  KMeansModel km;
  km.n_clusters = 2;
  km.centroids.resize(2);
  km.centroids[0].fill(0.2);
  km.centroids[1].fill(0.8);
  km.representatives.push_back(canonical_quadrant_disc(520.0, 36));
  km.representatives.push_back(canonical_quadrant_disc(104.0, 36));
  km.scaler = unit_scaler();
  km.inertia = 1.5;
  return km;
}

BeamSpec bench_spec(int i) {
  BeamSpec s;
  s.bw_az_deg = 0.5 + 0.05 * i;
  s.bw_el_deg = 0.5 + 0.05 * i;
  s.sll_az_db = -16.0;
  s.sll_el_db = -15.5;
  s.eirp_dbw = 80.0 - 0.5 * i;
  s.steer_az_deg = 1.0 + i;
  s.steer_el_deg = -0.5;
  s.n_active = 520.0;
  return s;
}

Dataset bench_dataset(std::size_t n_val) {
  Dataset ds;
  for (std::size_t i = 0; i < n_val + 2; ++i) {
    Sample s;
    s.spec = bench_spec(int(i));
    s.quadrant_bits = canonical_quadrant_disc(520.0, 36);
    s.cost = 0.1;
    s.accepted = true;
    s.split = i < n_val ? Split::Validation : Split::Train;
    ds.samples.push_back(std::move(s));
  }
  return ds;
}

GaParams quick_ga(std::uint64_t seed) {
  GaParams gp;
  gp.population_size = 8;
  gp.max_generations = 4;
  gp.convergence_patience = 4;
  gp.rng_seed = seed;
  return gp;
}

}  // namespace

// ------------------------------------------------------ bit-agreement counts

TEST_CASE("bit counts: confusion cells, ratios, and accumulation") {
  MultilabelCounts c;
  c.add({1, 1, 0, 0, 1}, {1, 0, 0, 1, 1});
  CHECK(c.tp == 2);
  CHECK(c.fp == 1);
  CHECK(c.fn == 1);
  CHECK(c.tn == 1);
  CHECK(c.total() == 5);
  CHECK(c.precision() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(c.recall() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(c.f1() == doctest::Approx(2.0 / 3.0).epsilon(1e-15));
  CHECK(c.hamming_accuracy() == doctest::Approx(0.6).epsilon(1e-15));

  // A second call pools counts rather than replacing them.
  c.add({1, 1}, {1, 1});
  CHECK(c.tp == 4);
  CHECK(c.total() == 7);

  const MultilabelCounts w = multilabel_metrics({1, 0}, {0, 0});
  CHECK(w.fp == 1);
  CHECK(w.tn == 1);
  CHECK(w.precision() == 0.0);
  CHECK(w.recall() == 0.0);
  CHECK(w.f1() == 0.0);

  // All-negative agreement: ratios degrade to zero but accuracy is perfect.
  const MultilabelCounts z = multilabel_metrics({0, 0, 0}, {0, 0, 0});
  CHECK(z.f1() == 0.0);
  CHECK(z.hamming_accuracy() == 1.0);

  MultilabelCounts bad;
  CHECK_THROWS_AS(bad.add({1, 0}, {1}), DataError);
  CHECK_THROWS_AS(bad.add({}, {}), DataError);
}

// ------------------------------------------------------------ benchmark runs

TEST_CASE("benchmark: optimizer lane scores perfectly against itself") {
  const ArrayConfig cfg;
  const CostWeights kw;
  const Dataset ds = bench_dataset(2);
  const MlpModel a1 = bias_only(OutputKind::Logistic,
                                std::vector<double>(324, 3.0));
  const MlpModel cls = bias_only(OutputKind::Softmax, {5.0, -5.0});
  const KMeansModel km = toy_codebook();
  const LinkGeometry geom;

  std::ostringstream progress;
  const BenchResult r = run_bench(ds, cfg, kw, quick_ga(7), a1, cls, km, geom,
                                  {}, &progress);

  CHECK(r.schema == 1);
  CHECK(r.ga_seed == 7);
  CHECK(r.config_digest == cfg.digest());

  // The optimizer is its own truth: every bit agrees.
  CHECK(r.ga.n_samples == 2);
  CHECK(r.ga.n_eval_failures == 0);
  CHECK(r.ga.micro.fp == 0);
  CHECK(r.ga.micro.fn == 0);
  CHECK(r.ga.micro.total() == 2 * 324);
  CHECK(r.ga.micro.f1() == 1.0);
  CHECK(r.ga.mean.kpi5_f1 == 100.0);
  CHECK(r.ga.mean.precision == 1.0);
  CHECK(r.ga.mean.recall == 1.0);

  // Speed scored against the lane's own mean wall time averages to zero.
  CHECK(std::abs(r.ga.mean.kpi6_speed) < 1e-6);
  CHECK(r.ga_mean_time_s == r.ga.mean_time_s);
  CHECK(r.ga_mean_time_s > 0.0);

  // Quality scores are percentages.
  for (const ApproachBench* lane : {&r.ga, &r.approach1, &r.approach2}) {
    REQUIRE(lane->rows.size() == 2);
    CHECK(lane->n_samples == 2);
    for (const KpiReport& row : lane->rows) {
      CHECK(row.kpi1_eirp >= 0.0);
      CHECK(row.kpi1_eirp <= 100.0);
      CHECK(row.kpi2_beamwidth >= 0.0);
      CHECK(row.kpi2_beamwidth <= 100.0);
      CHECK(row.kpi3_sll >= 0.0);
      CHECK(row.kpi3_sll <= 100.0);
      CHECK(row.kpi4_demand >= 0.0);
      CHECK(row.kpi4_demand <= 100.0);
      CHECK(row.kpi5_f1 >= 0.0);
      CHECK(row.kpi5_f1 <= 100.0);
      CHECK(row.execution_time_s > 0.0);
      // Every lane shares the optimizer's mean wall time as reference.
      CHECK(row.reference_time_s == r.ga_mean_time_s);
    }
    // Aggregates really are the row statistics.
    double sum = 0.0;
    for (const KpiReport& row : lane->rows) sum += row.execution_time_s;
    CHECK(lane->mean_time_s ==
          doctest::Approx(sum / 2.0).epsilon(1e-15));
    CHECK(lane->median_time_s ==
          doctest::Approx(0.5 * (lane->rows[0].execution_time_s +
                                 lane->rows[1].execution_time_s))
              .epsilon(1e-15));
    const double kpi1 =
        0.5 * (lane->rows[0].kpi1_eirp + lane->rows[1].kpi1_eirp);
    CHECK(lane->mean.kpi1_eirp == doctest::Approx(kpi1).epsilon(1e-12));
    CHECK(lane->micro.total() == 2 * 324);
  }

  // The always-on direct model never misses an active bit.
  CHECK(r.approach1.micro.fn == 0);
  CHECK(r.approach1.micro.recall() == 1.0);
  CHECK(r.approach1.n_eval_failures == 0);
  CHECK(r.approach2.n_eval_failures == 0);

  // Progress stream: header plus one row per sample.
  std::istringstream in(progress.str());
  std::string line;
  REQUIRE(std::getline(in, line));
  CHECK(line == "sample,ga_cost,ga_wall_s,a1_wall_ms,a2_wall_ms");
  std::size_t rows = 0;
  while (std::getline(in, line))
    if (!line.empty()) ++rows;
  CHECK(rows == 2);
}

TEST_CASE("benchmark: deterministic scores across repeated runs") {
  const ArrayConfig cfg;
  const CostWeights kw;
  const Dataset ds = bench_dataset(2);
  const MlpModel a1 = bias_only(OutputKind::Logistic,
                                std::vector<double>(324, 3.0));
  const MlpModel cls = bias_only(OutputKind::Softmax, {-5.0, 5.0});
  const KMeansModel km = toy_codebook();
  const LinkGeometry geom;

  const BenchResult a = run_bench(ds, cfg, kw, quick_ga(11), a1, cls, km,
                                  geom);
  const BenchResult b = run_bench(ds, cfg, kw, quick_ga(11), a1, cls, km,
                                  geom);
  for (auto pick : {&BenchResult::ga, &BenchResult::approach1,
                    &BenchResult::approach2}) {
    const ApproachBench& la = a.*pick;
    const ApproachBench& lb = b.*pick;
    CHECK(la.mean.kpi1_eirp == lb.mean.kpi1_eirp);
    CHECK(la.mean.kpi2_beamwidth == lb.mean.kpi2_beamwidth);
    CHECK(la.mean.kpi3_sll == lb.mean.kpi3_sll);
    CHECK(la.mean.kpi4_demand == lb.mean.kpi4_demand);
    CHECK(la.mean.kpi5_f1 == lb.mean.kpi5_f1);
    CHECK(la.micro.tp == lb.micro.tp);
    CHECK(la.micro.fp == lb.micro.fp);
    CHECK(la.micro.fn == lb.micro.fn);
    CHECK(la.micro.tn == lb.micro.tn);
  }
}

TEST_CASE("benchmark: a model that emits an empty array is counted as an "
          "evaluation failure") {
  const ArrayConfig cfg;
  const CostWeights kw;
  const Dataset ds = bench_dataset(2);
  // Strongly negative biases keep every output under the threshold, so the
  // produced layout has no active elements and cannot be evaluated.
  const MlpModel a1 = bias_only(OutputKind::Logistic,
                                std::vector<double>(324, -10.0));
  const MlpModel cls = bias_only(OutputKind::Softmax, {5.0, -5.0});
  const KMeansModel km = toy_codebook();

  const BenchResult r =
      run_bench(ds, cfg, kw, quick_ga(3), a1, cls, km, LinkGeometry{});
  CHECK(r.approach1.n_eval_failures == 2);
  CHECK(r.approach2.n_eval_failures == 0);
  for (const KpiReport& row : r.approach1.rows) {
    CHECK(row.kpi1_eirp == 0.0);
    CHECK(row.kpi2_beamwidth == 0.0);
    CHECK(row.kpi3_sll == 0.0);
    CHECK(row.kpi4_demand == 0.0);
    CHECK(row.kpi5_f1 == 0.0);  // no true bits predicted
    CHECK(row.precision == 0.0);
    CHECK(row.recall == 0.0);
    CHECK(row.execution_time_s > 0.0);
    CHECK(row.reference_time_s == r.ga_mean_time_s);
  }
  // The miss still counts against the pooled bit score.
  CHECK(r.approach1.micro.tp == 0);
  CHECK(r.approach1.micro.fp == 0);
  CHECK(r.approach1.micro.fn > 0);
}

TEST_CASE("benchmark: sample budget, empty split, and serializations") {
  const ArrayConfig cfg;
  const CostWeights kw;
  const MlpModel a1 = bias_only(OutputKind::Logistic,
                                std::vector<double>(324, 3.0));
  const MlpModel cls = bias_only(OutputKind::Softmax, {5.0, -5.0});
  const KMeansModel km = toy_codebook();

  Dataset no_val = bench_dataset(2);
  for (auto& s : no_val.samples) s.split = Split::Train;
  CHECK_THROWS_AS(run_bench(no_val, cfg, kw, quick_ga(1), a1, cls, km,
                            LinkGeometry{}),
                  DataError);

  BenchOptions opt;
  opt.max_samples = 1;
  const BenchResult r = run_bench(bench_dataset(3), cfg, kw, quick_ga(5), a1,
                                  cls, km, LinkGeometry{}, opt);
  CHECK(r.ga.n_samples == 1);
  CHECK(r.approach1.n_samples == 1);
  CHECK(r.approach2.n_samples == 1);
  CHECK(r.ga.rows.size() == 1);

  // JSON summary: parseable, carries the lane aggregates.
  const nlohmann::json j = nlohmann::json::parse(r.to_json());
  CHECK(j.at("schema").get<int>() == 1);
  CHECK(j.at("ga_seed").get<std::uint64_t>() == 5);
  CHECK(j.at("config_digest").get<std::string>() == cfg.digest());
  CHECK(j.at("ga_mean_time_s").get<double>() == r.ga_mean_time_s);
  const auto& lanes = j.at("approaches");
  CHECK(lanes.at("ga").at("name").get<std::string>() == "ga");
  CHECK(lanes.at("ga").at("micro_f1").get<double>() == 1.0);
  CHECK(lanes.at("approach1").at("n_samples").get<std::size_t>() == 1);
  CHECK(lanes.at("approach2").at("kpi5_f1").get<double>() ==
        r.approach2.mean.kpi5_f1);
  CHECK(lanes.at("ga").at("n_eval_failures").get<std::size_t>() == 0);

  // Row CSV: header plus one line per lane and sample, lane names leading.
  std::istringstream rows(r.rows_csv());
  std::string line;
  REQUIRE(std::getline(rows, line));
  CHECK(line == std::string("approach,sample,") + KpiReport::csv_header());
  std::vector<std::string> body;
  while (std::getline(rows, line))
    if (!line.empty()) body.push_back(line);
  REQUIRE(body.size() == 3);
  CHECK(body[0].rfind("ga,0,", 0) == 0);
  CHECK(body[1].rfind("approach1,0,", 0) == 0);
  CHECK(body[2].rfind("approach2,0,", 0) == 0);
}
