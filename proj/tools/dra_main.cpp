// dra: command-line front end for the thinned-array synthesis toolkit.
//
// Subcommands mirror the pipeline stages: gen-data -> split -> train ->
// bench, plus predict and pattern for one-off inference and plot exports.
// Exit codes: 0 success, 2 usage/config error, 3 data error, 4 numeric error.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dra/approaches.hpp"
#include "dra/array_config.hpp"
#include "dra/bench.hpp"
#include "dra/config_file.hpp"
#include "dra/dataset_io.hpp"
#include "dra/errors.hpp"
#include "dra/ga.hpp"
#include "dra/kmeans.hpp"
#include "dra/link_budget.hpp"
#include "dra/ml_metrics.hpp"
#include "dra/mlp.hpp"
#include "dra/pattern.hpp"
#include "dra/sampler.hpp"

namespace {

using dra::ConfigError;
using dra::DataError;

constexpr const char* kConfigDirEnv = "DRA_CONFIG_DIR";

// Resolve the config file. Empty path: use $DRA_CONFIG_DIR/dra.cfg when it
// exists, otherwise built-in defaults. A relative path that does not exist
// as given is also tried under $DRA_CONFIG_DIR.
dra::KeyValueConfig load_kv(const std::string& path) {
  namespace fs = std::filesystem;
  const char* env = std::getenv(kConfigDirEnv);
  if (path.empty()) {
    if (env != nullptr) {
      fs::path candidate = fs::path(env) / "dra.cfg";
      if (fs::exists(candidate)) {
        return dra::KeyValueConfig::parse_file(candidate.string());
      }
    }
    return dra::KeyValueConfig{};
  }
  if (!fs::exists(path) && fs::path(path).is_relative() && env != nullptr) {
    fs::path candidate = fs::path(env) / path;
    if (fs::exists(candidate)) {
      return dra::KeyValueConfig::parse_file(candidate.string());
    }
  }
  return dra::KeyValueConfig::parse_file(path);
}

dra::CostWeights cost_weights_from(const dra::KeyValueConfig& kv) {
  dra::CostWeights kw;
  kw.k1 = kv.get_double("cost_k1", kw.k1);
  kw.k2 = kv.get_double("cost_k2", kw.k2);
  kw.k3 = kv.get_double("cost_k3", kw.k3);
  kw.validate();
  return kw;
}

dra::DatasetFormat format_for(const std::string& explicit_name,
                              const std::string& out_path) {
  if (!explicit_name.empty()) {
    return dra::dataset_format_from_name(explicit_name);
  }
  std::filesystem::path p(out_path);
  return p.extension() == ".bin" ? dra::DatasetFormat::Binary
                                 : dra::DatasetFormat::Csv;
}

void write_text_file(const std::string& path, const std::string& text) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open for writing: " + path);
  os << text;
  if (!os) throw DataError("write failed: " + path);
}

nlohmann::json metrics_json(const dra::BeamMetrics& m) {
  return nlohmann::json{
      {"schema", 1},
      {"bw_az_deg", m.bw_az_deg},
      {"bw_el_deg", m.bw_el_deg},
      {"sll_az_db", m.sll_az_db},
      {"sll_el_db", m.sll_el_db},
      {"eirp_dbw", m.eirp_dbw},
      {"directivity_dbi", m.directivity_dbi},
      {"peak_az_deg", m.peak_az_deg},
      {"peak_el_deg", m.peak_el_deg},
  };
}

std::string matrix_text(const dra::WeightMatrix& w) {
  std::ostringstream os;
  const int n = w.n_ports();
  for (int ix = 0; ix < n; ++ix) {
    for (int iy = 0; iy < n; ++iy) {
      if (iy > 0) os << ',';
      os << (w.bit(ix, iy) ? '1' : '0');
    }
    os << '\n';
  }
  return os.str();
}

std::vector<std::uint8_t> load_matrix_text(const std::string& path, int n) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open matrix file: " + path);
  std::vector<std::uint8_t> bits;
  bits.reserve(static_cast<std::size_t>(n) * n);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(is, line)) {
    ++line_no;
    for (char& c : line) {
      if (c == ',' || c == '\t' || c == '\r') c = ' ';
    }
    std::istringstream ls(line);
    std::string tok;
    while (ls >> tok) {
      if (tok == "0") {
        bits.push_back(0);
      } else if (tok == "1") {
        bits.push_back(1);
      } else {
        throw DataError(path + ":" + std::to_string(line_no) +
                        ": matrix entries must be 0 or 1, got '" + tok + "'");
      }
    }
  }
  if (bits.size() != static_cast<std::size_t>(n) * n) {
    throw DataError(path + ": expected " + std::to_string(n) + "x" +
                    std::to_string(n) + " = " + std::to_string(n * n) +
                    " entries, got " + std::to_string(bits.size()));
  }
  return bits;
}

std::string derived_classifier_path(const std::string& codebook_path) {
  std::filesystem::path p(codebook_path);
  if (p.extension() == ".json") {
    p.replace_extension();
    return p.string() + "_classifier.json";
  }
  return codebook_path + ".classifier.json";
}

double wall_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
      .count();
}

// ---------------------------------------------------------------- gen-data

struct GenDataOpts {
  int count = 0;
  std::string out;
  std::string format;
  std::string config;
  std::uint64_t seed = 1;
  std::string progress;
};

void cmd_gen_data(const GenDataOpts& o) {
  const dra::KeyValueConfig kv = load_kv(o.config);
  const dra::ArrayConfig cfg = dra::ArrayConfig::from_config(kv);
  const dra::SamplerRanges ranges = dra::SamplerRanges::from_config(kv);
  const dra::GaParams gp = dra::GaParams::from_config(kv);
  const dra::CostWeights kw = cost_weights_from(kv);

  std::ofstream progress_file;
  std::ostream* progress = nullptr;
  if (o.progress == "-") {
    progress = &std::cerr;
  } else if (!o.progress.empty()) {
    progress_file.open(o.progress);
    if (!progress_file) {
      throw DataError("cannot open progress file: " + o.progress);
    }
    progress = &progress_file;
  }

  const auto t0 = std::chrono::steady_clock::now();
  dra::Dataset ds =
      dra::generate_dataset(ranges, o.count, cfg, kw, gp, o.seed, progress);
  const double wall_s = wall_since(t0);

  dra::save_dataset(ds, o.out, format_for(o.format, o.out));

  const std::size_t accepted = ds.count_accepted();
  std::printf("samples: %zu\naccepted: %zu\nacceptance_rate: %.4f\n",
              ds.samples.size(), accepted,
              ds.samples.empty()
                  ? 0.0
                  : static_cast<double>(accepted) /
                        static_cast<double>(ds.samples.size()));
  std::printf("wall_s: %.2f\nwrote: %s\n", wall_s, o.out.c_str());
}

// ------------------------------------------------------------------- split

struct SplitOpts {
  std::string data;
  std::string out;
  std::string format;
  double train = 0.70;
  double test = 0.15;
  double validation = 0.15;
  std::uint64_t seed = 1;
};

void cmd_split(const SplitOpts& o) {
  dra::Dataset ds = dra::load_dataset(o.data);
  dra::assign_splits(ds, o.train, o.test, o.validation, o.seed);
  const std::string out = o.out.empty() ? o.data : o.out;
  dra::save_dataset(ds, out, format_for(o.format, out));
  std::printf("train: %zu\ntest: %zu\nvalidation: %zu\nrejected: %zu\n",
              ds.count_split(dra::Split::Train),
              ds.count_split(dra::Split::Test),
              ds.count_split(dra::Split::Validation),
              ds.samples.size() - ds.count_accepted());
  std::printf("wrote: %s\n", out.c_str());
}

// ------------------------------------------------------------------- train

struct TrainOpts {
  std::string data;
  int approach = 1;
  std::string out;
  std::string classifier_out;
  std::string curve;
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
  int clusters = 0;       // 0 = pick by elbow sweep
  int clusters_min = 4;   // sweep lower bound
  int clusters_max = 64;  // sweep upper bound
};

void require_splits(const dra::Dataset& ds) {
  if (ds.split_indices(dra::Split::Train).empty()) {
    throw DataError(
        "dataset has no train split; run `dra split` on it first");
  }
}

void train_approach1(const dra::Dataset& ds, const dra::TrainConfig& tc,
                     const TrainOpts& o) {
  dra::TrainOutcome out = dra::train_mlp(ds, tc);
  dra::save_mlp_json(out.model, o.out);
  const std::string curve_path =
      o.curve.empty() ? o.out + ".curve.csv" : o.curve;
  write_text_file(curve_path, dra::curve_to_csv(out.curve));

  // Pooled bit-level scores on the validation split (train split fallback).
  dra::Split eval_split = dra::Split::Validation;
  if (ds.split_indices(eval_split).empty()) eval_split = dra::Split::Train;
  dra::MultilabelCounts micro;
  for (std::size_t i : ds.split_indices(eval_split)) {
    micro.add(dra::approach1_predict_bits(out.model, ds.samples[i].spec),
              ds.samples[i].quadrant_bits);
  }
  std::printf("approach: 1\nbest_epoch: %d\nbest_val_loss: %.6g\n",
              out.best_epoch, out.best_val_loss);
  std::printf("eval_split: %s\nmicro_precision: %.4f\nmicro_recall: %.4f\n",
              dra::split_name(eval_split), micro.precision(), micro.recall());
  std::printf("micro_f1: %.4f\n", micro.f1());
  std::printf("wrote: %s\nwrote: %s\n", o.out.c_str(), curve_path.c_str());
}

void train_approach2(const dra::Dataset& ds, const dra::TrainConfig& tc,
                     const TrainOpts& o, const dra::ArrayConfig& cfg,
                     const dra::CostWeights& kw) {
  const auto train_idx = ds.split_indices(dra::Split::Train);
  const auto raw_rows = ds.feature_rows(dra::Split::Train);
  const dra::FeatureScaler scaler =
      dra::FeatureScaler::fit_split(ds, dra::Split::Train);
  std::vector<std::array<double, dra::FeatureScaler::kDim>> rows;
  rows.reserve(raw_rows.size());
  for (const auto& r : raw_rows) rows.push_back(scaler.transform(r));

  int k = o.clusters;
  if (k <= 0) {
    std::vector<int> ks;
    for (int c = std::max(2, o.clusters_min);
         c <= o.clusters_max && c <= static_cast<int>(rows.size()); ++c) {
      ks.push_back(c);
    }
    if (ks.empty()) throw DataError("too few training rows for clustering");
    const auto sweep = dra::inertia_sweep(rows, ks, tc.rng_seed);
    std::printf("inertia_curve:\nk,inertia\n");
    for (const auto& p : sweep) std::printf("%d,%.6g\n", p.k, p.inertia);
    k = dra::pick_elbow(sweep);
  }

  dra::KMeansModel km = dra::kmeans_fit(rows, k, tc.rng_seed);
  km.scaler = scaler;

  std::vector<std::vector<std::size_t>> members(
      static_cast<std::size_t>(km.n_clusters));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    members[static_cast<std::size_t>(km.assign(rows[i]))].push_back(
        train_idx[i]);
  }
  km.representatives.clear();
  for (int c = 0; c < km.n_clusters; ++c) {
    if (members[static_cast<std::size_t>(c)].empty()) {
      throw DataError("cluster " + std::to_string(c) +
                      " has no training members; reduce --clusters");
    }
    km.representatives.push_back(dra::cluster_representative(
        ds, members[static_cast<std::size_t>(c)], cfg, kw));
  }

  dra::TrainOutcome cls = dra::train_cluster_classifier(ds, km, tc);

  dra::save_kmeans_json(km, o.out);
  const std::string cls_path = o.classifier_out.empty()
                                   ? derived_classifier_path(o.out)
                                   : o.classifier_out;
  dra::save_mlp_json(cls.model, cls_path);
  const std::string curve_path =
      o.curve.empty() ? o.out + ".curve.csv" : o.curve;
  write_text_file(curve_path, dra::curve_to_csv(cls.curve));

  dra::Split eval_split = dra::Split::Validation;
  if (ds.split_indices(eval_split).empty()) eval_split = dra::Split::Train;
  const double acc =
      dra::classifier_accuracy(cls.model, km, ds, eval_split);
  std::printf("approach: 2\nn_clusters: %d\ninertia: %.6g\n", km.n_clusters,
              km.inertia);
  std::printf("best_epoch: %d\nbest_val_loss: %.6g\n", cls.best_epoch,
              cls.best_val_loss);
  std::printf("eval_split: %s\nclassifier_accuracy: %.4f\n",
              dra::split_name(eval_split), acc);
  std::printf("wrote: %s\nwrote: %s\nwrote: %s\n", o.out.c_str(),
              cls_path.c_str(), curve_path.c_str());
}

void cmd_train(const TrainOpts& o) {
  const dra::KeyValueConfig kv = load_kv(o.config);
  dra::TrainConfig tc = dra::TrainConfig::from_config(kv);
  if (o.seed_given) tc.rng_seed = o.seed;
  tc.validate();

  dra::Dataset ds = dra::load_dataset(o.data);
  require_splits(ds);

  if (o.approach == 1) {
    train_approach1(ds, tc, o);
  } else {
    const dra::ArrayConfig cfg = dra::ArrayConfig::from_config(kv);
    const dra::CostWeights kw = cost_weights_from(kv);
    train_approach2(ds, tc, o, cfg, kw);
  }
}

// ------------------------------------------------------------------- bench

struct BenchOpts {
  std::string data;
  std::string model1;
  std::string codebook;
  std::string classifier;
  std::string out_prefix = "bench";
  std::string config;
  std::uint64_t seed = 0;
  bool seed_given = false;
  std::size_t max_samples = 0;
  bool f1_complement = false;
  bool verbose = false;
};

void print_bench_table(const dra::BenchResult& res) {
  std::printf("%-10s %7s %7s %7s %7s %7s %8s %12s %12s\n", "approach",
              "kpi1", "kpi2", "kpi3", "kpi4", "kpi5", "kpi6", "mean_s",
              "median_s");
  const dra::ApproachBench* lanes[] = {&res.ga, &res.approach1,
                                       &res.approach2};
  for (const auto* b : lanes) {
    std::printf("%-10s %7.2f %7.2f %7.2f %7.2f %7.2f %8.2f %12.6f %12.6f\n",
                b->name.c_str(), b->mean.kpi1_eirp, b->mean.kpi2_beamwidth,
                b->mean.kpi3_sll, b->mean.kpi4_demand, b->mean.kpi5_f1,
                b->mean.kpi6_speed, b->mean_time_s, b->median_time_s);
  }
  std::printf("samples: %zu\n", res.ga.n_samples);
  std::printf("micro_f1: approach1 %.4f, approach2 %.4f\n",
              res.approach1.micro.f1(), res.approach2.micro.f1());
  if (res.approach1.mean_time_s > 0 && res.approach2.mean_time_s > 0) {
    std::printf("speedup_vs_ga: approach1 %.0fx, approach2 %.0fx\n",
                res.ga_mean_time_s / res.approach1.mean_time_s,
                res.ga_mean_time_s / res.approach2.mean_time_s);
  }
  std::printf(
      "timing: per-inference wall time only; model load and pattern "
      "evaluation excluded; kpi6 reference = mean optimizer time (%.4f s)\n",
      res.ga_mean_time_s);
}

void cmd_bench(const BenchOpts& o) {
  const dra::KeyValueConfig kv = load_kv(o.config);
  const dra::ArrayConfig cfg = dra::ArrayConfig::from_config(kv);
  const dra::CostWeights kw = cost_weights_from(kv);
  dra::GaParams gp = dra::GaParams::from_config(kv);
  if (o.seed_given) gp.rng_seed = o.seed;
  const dra::LinkGeometry geom = dra::LinkGeometry::from_config(kv);

  dra::Dataset ds = dra::load_dataset(o.data);
  const dra::MlpModel a1 = dra::load_mlp_json(o.model1);
  const dra::KMeansModel km = dra::load_kmeans_json(o.codebook);
  const dra::MlpModel classifier = dra::load_mlp_json(o.classifier);

  dra::BenchOptions opt;
  opt.kpi5_complement = o.f1_complement;
  opt.max_samples = o.max_samples;

  dra::BenchResult res =
      dra::run_bench(ds, cfg, kw, gp, a1, classifier, km, geom, opt,
                     o.verbose ? &std::cerr : nullptr);

  const std::string summary_path = o.out_prefix + "_summary.json";
  const std::string rows_path = o.out_prefix + "_rows.csv";
  write_text_file(summary_path, res.to_json() + "\n");
  write_text_file(rows_path, res.rows_csv());
  print_bench_table(res);
  std::printf("wrote: %s\nwrote: %s\n", summary_path.c_str(),
              rows_path.c_str());
}

// ----------------------------------------------------------------- predict

struct SpecOpts {
  double bw_az = 0.0;
  double bw_el = 0.0;
  double sll_az = 0.0;
  double sll_el = 0.0;
  double eirp = 0.0;
  double steer_az = 0.0;
  double steer_el = 0.0;
  double n_active = 0.0;
};

dra::BeamSpec to_spec(const SpecOpts& s, const dra::ArrayConfig& cfg) {
  dra::BeamSpec spec;
  spec.bw_az_deg = s.bw_az;
  spec.bw_el_deg = s.bw_el;
  spec.sll_az_db = s.sll_az;
  spec.sll_el_db = s.sll_el;
  spec.eirp_dbw = s.eirp;
  spec.steer_az_deg = s.steer_az;
  spec.steer_el_deg = s.steer_el;
  spec.n_active = s.n_active;
  spec.validate(cfg);
  return spec;
}

// Attach --bw-az .. --n-active to a subcommand.
void add_spec_flags(CLI::App* cmd, SpecOpts& s, bool required) {
  auto* bw_az = cmd->add_option("--bw-az", s.bw_az,
                                "Target -3 dB azimuth beamwidth [deg]");
  auto* bw_el = cmd->add_option("--bw-el", s.bw_el,
                                "Target -3 dB elevation beamwidth [deg]");
  auto* sll_az =
      cmd->add_option("--sll-az", s.sll_az, "Target azimuth SLL [dB]");
  auto* sll_el =
      cmd->add_option("--sll-el", s.sll_el, "Target elevation SLL [dB]");
  auto* eirp = cmd->add_option("--eirp", s.eirp, "Target EIRP [dBW]");
  auto* n_active =
      cmd->add_option("--n-active", s.n_active, "Target active-port count");
  cmd->add_option("--steer-az", s.steer_az, "Steering azimuth [deg]");
  cmd->add_option("--steer-el", s.steer_el, "Steering elevation [deg]");
  if (required) {
    bw_az->required();
    bw_el->required();
    sll_az->required();
    sll_el->required();
    eirp->required();
    n_active->required();
  }
}

struct PredictOpts {
  std::string model;
  std::string codebook;
  std::string classifier;
  std::string out;
  std::string config;
  bool evaluate = false;
  SpecOpts spec;
};

dra::WeightMatrix infer_matrix(const std::string& model,
                               const std::string& codebook,
                               const std::string& classifier,
                               const dra::BeamSpec& spec,
                               const dra::ArrayConfig& cfg) {
  if (!model.empty()) {
    return dra::approach1_infer(dra::load_mlp_json(model), spec, cfg);
  }
  return dra::approach2_infer(dra::load_mlp_json(classifier),
                              dra::load_kmeans_json(codebook), spec, cfg);
}

void cmd_predict(const PredictOpts& o) {
  const dra::KeyValueConfig kv = load_kv(o.config);
  const dra::ArrayConfig cfg = dra::ArrayConfig::from_config(kv);
  const dra::BeamSpec spec = to_spec(o.spec, cfg);
  const dra::WeightMatrix w =
      infer_matrix(o.model, o.codebook, o.classifier, spec, cfg);

  const std::string text = matrix_text(w);
  if (o.out.empty()) {
    std::fputs(text.c_str(), stdout);
  } else {
    write_text_file(o.out, text);
    std::printf("wrote: %s\n", o.out.c_str());
  }
  std::printf("n_active: %d\n", w.n_active());
  if (o.evaluate) {
    const dra::BeamMetrics m = dra::evaluate_beam(cfg, w);
    std::printf("%s\n", metrics_json(m).dump(2).c_str());
  }
}

// ----------------------------------------------------------------- pattern

struct PatternOpts {
  bool all_on = false;
  std::string matrix;
  std::string model;
  std::string codebook;
  std::string classifier;
  std::string out_prefix;
  std::string config;
  double half_range_deg = 10.0;
  double step_deg = 0.005;
  SpecOpts spec;
  bool spec_given = false;
};

void cmd_pattern(const PatternOpts& o) {
  const dra::KeyValueConfig kv = load_kv(o.config);
  const dra::ArrayConfig cfg = dra::ArrayConfig::from_config(kv);

  const int sources = (o.all_on ? 1 : 0) + (o.matrix.empty() ? 0 : 1) +
                      ((!o.model.empty() || !o.codebook.empty()) ? 1 : 0);
  if (sources != 1) {
    throw ConfigError(
        "pattern needs exactly one weight source: --all-on, --matrix, or a "
        "model (--model | --codebook + --classifier)");
  }

  auto make_matrix = [&]() -> dra::WeightMatrix {
    if (o.all_on) {
      return dra::WeightMatrix::all_on(cfg, o.spec.steer_az, o.spec.steer_el);
    }
    if (!o.matrix.empty()) {
      return dra::WeightMatrix(cfg, load_matrix_text(o.matrix, cfg.n_ports),
                               o.spec.steer_az, o.spec.steer_el);
    }
    if (!o.spec_given) {
      throw ConfigError(
          "model-driven pattern needs the full beam target "
          "(--bw-az .. --n-active)");
    }
    return infer_matrix(o.model, o.codebook, o.classifier,
                        to_spec(o.spec, cfg), cfg);
  };
  const dra::WeightMatrix w = make_matrix();

  const dra::PatternCut az =
      dra::pattern_cut(cfg, w, dra::CutPlane::Azimuth, o.half_range_deg,
                       o.step_deg);
  const dra::PatternCut el =
      dra::pattern_cut(cfg, w, dra::CutPlane::Elevation, o.half_range_deg,
                       o.step_deg);
  const std::string az_path = o.out_prefix + "_az.csv";
  const std::string el_path = o.out_prefix + "_el.csv";
  dra::save_pattern_cut_csv(az, az_path);
  dra::save_pattern_cut_csv(el, el_path);

  const dra::BeamMetrics m = dra::evaluate_beam(cfg, w);
  nlohmann::json side = metrics_json(m);
  side["n_active"] = w.n_active();
  side["steer_az_deg"] = w.steer_az_deg();
  side["steer_el_deg"] = w.steer_el_deg();
  const std::string metrics_path = o.out_prefix + "_metrics.json";
  write_text_file(metrics_path, side.dump(2) + "\n");

  std::printf("bw_az_deg: %.4f\nbw_el_deg: %.4f\nsll_az_db: %.2f\n"
              "sll_el_db: %.2f\neirp_dbw: %.2f\n",
              m.bw_az_deg, m.bw_el_deg, m.sll_az_db, m.sll_el_db, m.eirp_dbw);
  std::printf("wrote: %s\nwrote: %s\nwrote: %s\n", az_path.c_str(),
              el_path.c_str(), metrics_path.c_str());
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "Thinned-array beam synthesis: dataset generation, model training, "
      "and GA-vs-model benchmarking.\n"
      "Config files are flat `key = value` text; $DRA_CONFIG_DIR supplies "
      "the default directory (and dra.cfg default file)."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "1.0.0");

  GenDataOpts gen;
  CLI::App* cgen = app.add_subcommand(
      "gen-data", "Draw beam targets and label them with optimizer runs");
  cgen->add_option("-n,--count", gen.count, "Number of samples to draw")
      ->required()
      ->check(CLI::PositiveNumber);
  cgen->add_option("-o,--out", gen.out, "Output dataset path")->required();
  cgen->add_option("--format", gen.format, "Output format: csv|bin")
      ->check(CLI::IsMember({"csv", "bin", "binary"}));
  cgen->add_option("--config", gen.config, "Config file path");
  cgen->add_option("--seed", gen.seed, "Base RNG seed");
  cgen->add_option("--progress", gen.progress,
                   "Per-sample progress CSV path ('-' for stderr)");
  cgen->callback([&gen] { cmd_gen_data(gen); });

  SplitOpts spl;
  CLI::App* cspl = app.add_subcommand(
      "split", "Assign train/test/validation labels to accepted samples");
  cspl->add_option("--data", spl.data, "Dataset path")->required();
  cspl->add_option("-o,--out", spl.out,
                   "Output path (default: rewrite --data)");
  cspl->add_option("--format", spl.format, "Output format: csv|bin")
      ->check(CLI::IsMember({"csv", "bin", "binary"}));
  cspl->add_option("--train", spl.train, "Train ratio");
  cspl->add_option("--test", spl.test, "Test ratio");
  cspl->add_option("--val", spl.validation, "Validation ratio");
  cspl->add_option("--seed", spl.seed, "Shuffle seed");
  cspl->callback([&spl] { cmd_split(spl); });

  TrainOpts trn;
  CLI::App* ctrn =
      app.add_subcommand("train", "Train approach 1 (multi-label network) "
                                  "or approach 2 (codebook + classifier)");
  ctrn->add_option("--data", trn.data, "Split dataset path")->required();
  ctrn->add_option("-a,--approach", trn.approach, "1 | 2")
      ->required()
      ->check(CLI::IsMember({1, 2}));
  ctrn->add_option("-o,--out", trn.out, "Model output path (JSON)")
      ->required();
  ctrn->add_option("--classifier-out", trn.classifier_out,
                   "Approach-2 classifier output path");
  ctrn->add_option("--curve", trn.curve, "Training-curve CSV path");
  ctrn->add_option("--config", trn.config, "Config file path");
  auto* trn_seed =
      ctrn->add_option("--seed", trn.seed, "Training RNG seed override");
  ctrn->add_option("--clusters", trn.clusters,
                   "Approach-2 cluster count (0 = elbow sweep)");
  ctrn->add_option("--clusters-min", trn.clusters_min,
                   "Elbow sweep lower bound")
      ->check(CLI::PositiveNumber);
  ctrn->add_option("--clusters-max", trn.clusters_max,
                   "Elbow sweep upper bound")
      ->check(CLI::PositiveNumber);
  ctrn->callback([&trn, trn_seed] {
    trn.seed_given = trn_seed->count() > 0;
    cmd_train(trn);
  });

  BenchOpts ben;
  CLI::App* cben = app.add_subcommand(
      "bench", "Run optimizer and both models on the validation split and "
               "score KPI 1-6");
  cben->add_option("--data", ben.data, "Split dataset path")->required();
  cben->add_option("--model1", ben.model1, "Approach-1 model path")
      ->required();
  cben->add_option("--codebook", ben.codebook, "Approach-2 codebook path")
      ->required();
  cben->add_option("--classifier", ben.classifier,
                   "Approach-2 classifier path")
      ->required();
  cben->add_option("-o,--out-prefix", ben.out_prefix,
                   "Output prefix for _summary.json and _rows.csv");
  cben->add_option("--config", ben.config, "Config file path");
  auto* ben_seed =
      cben->add_option("--seed", ben.seed, "Optimizer seed override");
  cben->add_option("--max-samples", ben.max_samples,
                   "Cap on validation samples (0 = all)");
  cben->add_flag("--f1-complement", ben.f1_complement,
                 "Report KPI 5 as (1 - F1) * 100");
  cben->add_flag("-v,--verbose", ben.verbose,
                 "Per-sample progress on stderr");
  cben->callback([&ben, ben_seed] {
    ben.seed_given = ben_seed->count() > 0;
    cmd_bench(ben);
  });

  PredictOpts prd;
  CLI::App* cprd = app.add_subcommand(
      "predict", "Predict a weight matrix for one beam target");
  cprd->add_option("--model", prd.model, "Approach-1 model path");
  cprd->add_option("--codebook", prd.codebook, "Approach-2 codebook path");
  cprd->add_option("--classifier", prd.classifier,
                   "Approach-2 classifier path");
  cprd->add_option("-o,--out", prd.out, "Matrix output path (default stdout)");
  cprd->add_option("--config", prd.config, "Config file path");
  cprd->add_flag("--evaluate", prd.evaluate,
                 "Also evaluate the produced matrix");
  add_spec_flags(cprd, prd.spec, /*required=*/true);
  cprd->callback([&prd] {
    const bool a1 = !prd.model.empty();
    const bool a2 = !prd.codebook.empty() && !prd.classifier.empty();
    if (a1 == a2) {
      throw ConfigError(
          "predict needs either --model or --codebook + --classifier");
    }
    cmd_predict(prd);
  });

  PatternOpts pat;
  CLI::App* cpat = app.add_subcommand(
      "pattern", "Export azimuth/elevation cuts and a metrics sidecar");
  cpat->add_flag("--all-on", pat.all_on, "Use the fully active array");
  cpat->add_option("--matrix", pat.matrix, "Weight matrix text file (0/1)");
  cpat->add_option("--model", pat.model, "Approach-1 model path");
  cpat->add_option("--codebook", pat.codebook, "Approach-2 codebook path");
  cpat->add_option("--classifier", pat.classifier,
                   "Approach-2 classifier path");
  cpat->add_option("-o,--out-prefix", pat.out_prefix, "Output path prefix")
      ->required();
  cpat->add_option("--config", pat.config, "Config file path");
  cpat->add_option("--range", pat.half_range_deg,
                   "Cut half-range [deg]")
      ->check(CLI::PositiveNumber);
  cpat->add_option("--step", pat.step_deg, "Cut step [deg]")
      ->check(CLI::PositiveNumber);
  SpecOpts& ps = pat.spec;
  add_spec_flags(cpat, ps, /*required=*/false);
  cpat->callback([&pat, cpat] {
    pat.spec_given = cpat->count("--bw-az") > 0;
    cmd_pattern(pat);
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? dra::kExitOk : dra::kExitConfig;
  } catch (const dra::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return dra::kExitConfig;
  } catch (const dra::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return dra::kExitData;
  } catch (const dra::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return dra::kExitNumeric;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return dra::kExitOk;
}
