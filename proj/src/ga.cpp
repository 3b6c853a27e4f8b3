#include "dra/ga.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <string>
#include <unordered_map>
#include <utility>

#include "dra/errors.hpp"
#include "dra/rng.hpp"

namespace dra {

void GaParams::validate() const {
  if (population_size < 2)
    throw ConfigError("population size must be at least 2");
  if (max_generations < 1)
    throw ConfigError("max generations must be at least 1");
  if (crossover_rate < 0.0 || crossover_rate > 1.0)
    throw ConfigError("crossover rate must lie in [0, 1]");
  if (mutation_rate < 0.0 || mutation_rate > 1.0)
    throw ConfigError("mutation rate must lie in [0, 1]");
  if (elitism_count < 0 || elitism_count > population_size)
    throw ConfigError("elitism count must lie in [0, population size]");
  if (tournament_size < 1 || tournament_size > population_size)
    throw ConfigError("tournament size must lie in [1, population size]");
  if (convergence_patience < 1)
    throw ConfigError("convergence patience must be at least 1");
  if (!(convergence_cost_threshold >= 0.0))
    throw ConfigError("convergence cost threshold must be nonnegative");
  if (polish_sweeps < 0)
    throw ConfigError("polish sweeps must be nonnegative");
}

GaParams GaParams::from_config(const KeyValueConfig& c) {
  GaParams gp;
  gp.population_size = c.get_int("ga_population", gp.population_size);
  gp.max_generations = c.get_int("ga_max_generations", gp.max_generations);
  gp.crossover_rate = c.get_double("ga_crossover_rate", gp.crossover_rate);
  gp.mutation_rate = c.get_double("ga_mutation_rate", gp.mutation_rate);
  gp.elitism_count = c.get_int("ga_elitism", gp.elitism_count);
  gp.tournament_size = c.get_int("ga_tournament", gp.tournament_size);
  gp.convergence_patience = c.get_int("ga_patience", gp.convergence_patience);
  gp.convergence_cost_threshold =
      c.get_double("ga_cost_threshold", gp.convergence_cost_threshold);
  gp.polish_sweeps = c.get_int("ga_polish_sweeps", gp.polish_sweeps);
  gp.rng_seed = c.get_u64("ga_seed", gp.rng_seed);
  gp.validate();
  return gp;
}

std::vector<std::uint8_t> expand_quadrant(const std::vector<std::uint8_t>& q,
                                          int n_ports) {
  const int half = n_ports / 2;
  if (n_ports < 2 || n_ports % 2 != 0)
    throw DataError("quadrant expansion requires an even port count");
  if (static_cast<int>(q.size()) != half * half)
    throw DataError("quadrant bit block must hold " +
                    std::to_string(half * half) + " bits, got " +
                    std::to_string(q.size()));
  std::vector<std::uint8_t> full(static_cast<size_t>(n_ports) * n_ports, 0);
  for (int a = 0; a < half; ++a) {
    for (int b = 0; b < half; ++b) {
      const std::uint8_t v = q[static_cast<size_t>(a) * half + b] ? 1 : 0;
      const int am = n_ports - 1 - a;
      const int bm = n_ports - 1 - b;
      full[static_cast<size_t>(a) * n_ports + b] = v;
      full[static_cast<size_t>(am) * n_ports + b] = v;
      full[static_cast<size_t>(a) * n_ports + bm] = v;
      full[static_cast<size_t>(am) * n_ports + bm] = v;
    }
  }
  return full;
}

std::vector<std::uint8_t> extract_quadrant(const std::vector<std::uint8_t>& full,
                                           int n_ports) {
  const int half = n_ports / 2;
  if (n_ports < 2 || n_ports % 2 != 0)
    throw DataError("quadrant extraction requires an even port count");
  if (static_cast<int>(full.size()) != n_ports * n_ports)
    throw DataError("full bit block must hold " +
                    std::to_string(n_ports * n_ports) + " bits, got " +
                    std::to_string(full.size()));
  std::vector<std::uint8_t> q(static_cast<size_t>(half) * half, 0);
  for (int a = 0; a < half; ++a)
    for (int b = 0; b < half; ++b)
      q[static_cast<size_t>(a) * half + b] =
          full[static_cast<size_t>(a) * n_ports + b] ? 1 : 0;
  return q;
}

std::vector<std::uint8_t> canonical_quadrant_disc(double n_active_target,
                                                  int n_ports) {
  const int half = n_ports / 2;
  if (n_ports < 2 || n_ports % 2 != 0)
    throw DataError("canonical disc requires an even port count");
  int m = static_cast<int>(std::lround(n_active_target / 4.0));
  m = std::clamp(m, 1, half * half);
  struct Cell {
    double r2;
    int a, b;
  };
  std::vector<Cell> cells;
  cells.reserve(static_cast<size_t>(half) * half);
  const double c = (n_ports - 1) / 2.0;
  for (int a = 0; a < half; ++a)
    for (int b = 0; b < half; ++b)
      cells.push_back({(c - a) * (c - a) + (c - b) * (c - b), a, b});
  std::sort(cells.begin(), cells.end(), [](const Cell& x, const Cell& y) {
    if (x.r2 != y.r2) return x.r2 < y.r2;
    if (x.a != y.a) return x.a < y.a;
    return x.b < y.b;
  });
  std::vector<std::uint8_t> q(static_cast<size_t>(half) * half, 0);
  for (int i = 0; i < m; ++i)
    q[static_cast<size_t>(cells[i].a) * half + cells[i].b] = 1;
  return q;
}

namespace {

constexpr double kPenaltyCost = 1e6;

struct Evaluated {
  double cost = kPenaltyCost;
  BeamMetrics metrics{};
  bool valid = false;
};

// Fitness cache keyed by the exact packed bit string of the chromosome.
class FitnessCache {
 public:
  FitnessCache(const ArrayConfig& cfg, const BeamSpec& spec,
               const CostWeights& kw)
      : eval_(cfg), cfg_(cfg), spec_(spec), kw_(kw) {}

  const Evaluated& get(const std::vector<std::uint8_t>& qbits) {
    std::string key((qbits.size() + 7) / 8, '\0');
    for (size_t i = 0; i < qbits.size(); ++i)
      if (qbits[i]) key[i / 8] |= static_cast<char>(1u << (i % 8));
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
    Evaluated ev;
    try {
      WeightMatrix w(cfg_, expand_quadrant(qbits, cfg_.n_ports),
                     spec_.steer_az_deg, spec_.steer_el_deg);
      ev.metrics = eval_.evaluate(w);
      ev.cost = cost(ev.metrics, spec_, kw_);
      ev.valid = true;
    } catch (const DataError&) {
      // Degenerate layouts (no active port, no resolvable beam or sidelobe)
      // stay in the pool with a prohibitive cost.
    } catch (const NumericError&) {
    }
    return cache_.emplace(std::move(key), ev).first->second;
  }

 private:
  BeamEvaluator eval_;
  const ArrayConfig& cfg_;
  const BeamSpec& spec_;
  const CostWeights& kw_;
  std::unordered_map<std::string, Evaluated> cache_;
};

struct Chrom {
  std::vector<std::uint8_t> bits;
  double cost = kPenaltyCost;
};

bool chrom_less(const Chrom& a, const Chrom& b) {
  if (a.cost != b.cost) return a.cost < b.cost;
  return a.bits < b.bits;  // deterministic tie-break
}

std::uint64_t stream_id(int generation, int index) {
  return (static_cast<std::uint64_t>(static_cast<std::uint32_t>(generation))
          << 32) |
         static_cast<std::uint32_t>(index);
}

}  // namespace

GaResult ga_optimize(const BeamSpec& spec, const ArrayConfig& cfg,
                     const CostWeights& kw, const GaParams& gp,
                     std::ostream* progress) {
  const auto t0 = std::chrono::steady_clock::now();
  cfg.validate();
  spec.validate(cfg);
  kw.validate();
  gp.validate();
  const int half = cfg.n_ports / 2;
  const int nbits = half * half;
  const int pop_n = gp.population_size;

  FitnessCache fitness(cfg, spec, kw);
  const auto wall_s = [&t0]() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
        .count();
  };

  // Initial population: one centered disc at the target fill, half the pool
  // randomly filled at the target density, the rest at 50 % density.
  std::vector<Chrom> pop(pop_n);
  const double p_bias =
      std::clamp(spec.n_active / (double(cfg.n_ports) * cfg.n_ports), 0.05, 1.0);
  for (int j = 0; j < pop_n; ++j) {
    Rng rng(Rng::mix(gp.rng_seed, stream_id(0, j)));
    auto& c = pop[j];
    c.bits.assign(static_cast<size_t>(nbits), 0);
    if (j == 0) {
      c.bits = canonical_quadrant_disc(spec.n_active, cfg.n_ports);
    } else {
      const double p = (j < pop_n / 2 || pop_n < 4) ? p_bias : 0.5;
      for (int i = 0; i < nbits; ++i) c.bits[i] = rng.bernoulli(p) ? 1 : 0;
    }
    c.cost = fitness.get(c.bits).cost;
  }

  Chrom best = *std::min_element(pop.begin(), pop.end(), chrom_less);
  int stall = 0;
  int generations_run = 0;

  const auto log_row = [&](int gen) {
    if (!progress) return;
    double mean = 0.0;
    for (const auto& c : pop) mean += c.cost;
    mean /= pop_n;
    char buf[128];
    std::snprintf(buf, sizeof(buf), "%d,%.9g,%.9g,%.3f\n", gen, best.cost, mean,
                  wall_s());
    *progress << buf;
  };
  if (progress) *progress << "gen,best_cost,mean_cost,wall_s\n";
  log_row(0);

  std::vector<int> order(pop_n);
  for (int g = 1; g <= gp.max_generations; ++g) {
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(), [&pop](int a, int b) {
      return chrom_less(pop[a], pop[b]);
    });
    std::vector<Chrom> next(pop_n);
    for (int e = 0; e < gp.elitism_count; ++e) next[e] = pop[order[e]];
    for (int j = gp.elitism_count; j < pop_n; ++j) {
      Rng rng(Rng::mix(gp.rng_seed, stream_id(g, j)));
      const auto pick_parent = [&]() -> const Chrom& {
        int best_ix = static_cast<int>(rng.below(static_cast<std::uint64_t>(pop_n)));
        for (int t = 1; t < gp.tournament_size; ++t) {
          const int ix =
              static_cast<int>(rng.below(static_cast<std::uint64_t>(pop_n)));
          if (chrom_less(pop[ix], pop[best_ix])) best_ix = ix;
        }
        return pop[best_ix];
      };
      const Chrom& pa = pick_parent();
      const Chrom& pb = pick_parent();
      auto& c = next[j];
      c.bits.assign(static_cast<size_t>(nbits), 0);
      const bool crossed = rng.bernoulli(gp.crossover_rate);
      for (int i = 0; i < nbits; ++i)
        c.bits[i] = crossed ? (rng.bernoulli(0.5) ? pa.bits[i] : pb.bits[i])
                            : pa.bits[i];
      for (int i = 0; i < nbits; ++i)
        if (rng.bernoulli(gp.mutation_rate)) c.bits[i] ^= 1;
      c.cost = fitness.get(c.bits).cost;
    }
    pop = std::move(next);
    const Chrom& gen_best =
        *std::min_element(pop.begin(), pop.end(), chrom_less);
    if (gen_best.cost < best.cost - 1e-12) {
      best = gen_best;
      stall = 0;
    } else {
      ++stall;
    }
    generations_run = g;
    log_row(g);
    if (stall >= gp.convergence_patience) break;
  }

  // Deterministic greedy refinement: accept any single-bit flip that lowers
  // the cost, sweeping the quadrant in index order.
  for (int sweep = 0; sweep < gp.polish_sweeps; ++sweep) {
    bool improved = false;
    for (int i = 0; i < nbits; ++i) {
      best.bits[i] ^= 1;
      const double flipped = fitness.get(best.bits).cost;
      if (flipped < best.cost - 1e-12) {
        best.cost = flipped;
        improved = true;
      } else {
        best.bits[i] ^= 1;
      }
    }
    if (!improved) break;
  }

  const Evaluated& final_eval = fitness.get(best.bits);
  if (!final_eval.valid)
    throw DataError(
        "optimization produced no evaluable candidate; the beam target is "
        "likely unreachable for this array");
  GaResult r{WeightMatrix(cfg, expand_quadrant(best.bits, cfg.n_ports),
                          spec.steer_az_deg, spec.steer_el_deg),
             final_eval.metrics,
             final_eval.cost,
             generations_run,
             wall_s(),
             final_eval.cost <= gp.convergence_cost_threshold};
  return r;
}

}  // namespace dra
