#pragma once

#include <algorithm>
#include <cstdint>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "setmax/local_search.hpp"
#include "setmax/oracle.hpp"
#include "setmax/rng.hpp"

namespace setmax {

/// Shared knobs for the population baselines. Both algorithms encode a
/// candidate as one gene per block: 0 keeps the block unselected, j in
/// 1..|B_i| selects the block's j-th element (ascending id order), so every
/// candidate is feasible by construction. Requires capacity 1 per block.
///
/// The structural parameters below the seed come from the attack literature
/// these baselines mirror; where the sources configure machinery that is out
/// of scope here (substitute generation), the names are reinterpreted as
/// documented on each field.
struct PopulationConfig {
  int population_size = 60;
  int max_iterations = 20;
  std::uint64_t seed = 0;

  // PSO
  double v_max = 1.0;
  double omega_max = 0.8;
  double omega_min = 0.2;
  double p_max = 0.8;
  double p_min = 0.2;
  /// "k": number of blocks resampled per perturbation event.
  int perturb_blocks = 2;

  // GA
  /// "N": parent candidates drawn (fitness-proportionally) per child; the
  /// two fittest draws become the parents.
  int tournament_draws = 8;
  /// "K": parents are drawn from the top-K individuals only.
  int parent_pool = 4;
  /// "delta": per-block probability that a child's gene is replaced by a
  /// uniformly random substitute.
  double mutation_rate = 0.5;

  bool stop_on_success = false;
  std::optional<std::int64_t> budget;
};

namespace detail {

inline void validate(const PopulationConfig& cfg, const PartitionConstraint& c) {
  if (cfg.population_size < 2) {
    throw std::invalid_argument("PopulationConfig: population_size must be >= 2");
  }
  if (cfg.max_iterations < 1) {
    throw std::invalid_argument("PopulationConfig: max_iterations must be >= 1");
  }
  if (!(cfg.v_max > 0.0)) throw std::invalid_argument("PopulationConfig: v_max must be positive");
  if (!(cfg.omega_min > 0.0) || cfg.omega_min > cfg.omega_max) {
    throw std::invalid_argument("PopulationConfig: need 0 < omega_min <= omega_max");
  }
  if (cfg.p_min < 0.0 || cfg.p_min > cfg.p_max || cfg.p_max > 1.0) {
    throw std::invalid_argument("PopulationConfig: need 0 <= p_min <= p_max <= 1");
  }
  if (cfg.perturb_blocks < 1) {
    throw std::invalid_argument("PopulationConfig: perturb_blocks must be >= 1");
  }
  if (cfg.tournament_draws < 1 || cfg.parent_pool < 1) {
    throw std::invalid_argument("PopulationConfig: tournament_draws and parent_pool must be >= 1");
  }
  if (cfg.mutation_rate < 0.0 || cfg.mutation_rate > 1.0) {
    throw std::invalid_argument("PopulationConfig: mutation_rate must be in [0, 1]");
  }
  if (c.ground_size() == 0) {
    throw std::invalid_argument("population search: empty ground set");
  }
  for (int i = 0; i < c.num_blocks(); ++i) {
    if (c.capacity(i) != 1) {
      throw std::invalid_argument(
          "population search requires capacity 1 per block (one choice or none)");
    }
  }
}

using Chromosome = std::vector<int>;  // per block: 0 = none, j = j-th element

inline Subset to_subset(const Chromosome& genes, const PartitionConstraint& c) {
  std::vector<int> ids;
  for (int i = 0; i < c.num_blocks(); ++i) {
    if (genes[i] > 0) ids.push_back(c.block(i)[genes[i] - 1]);
  }
  return Subset(std::move(ids));
}

/// Initial population: individual 0 is the all-original (empty) candidate,
/// the rest are random single substitutions.
inline std::vector<Chromosome> seed_population(const PartitionConstraint& c,
                                               const PopulationConfig& cfg,
                                               SplitRng& rng) {
  std::vector<Chromosome> pop;
  pop.reserve(cfg.population_size);
  pop.emplace_back(c.num_blocks(), 0);
  for (int i = 1; i < cfg.population_size; ++i) {
    Chromosome genes(c.num_blocks(), 0);
    const int b = rng.next_int(c.num_blocks());
    genes[b] = 1 + rng.next_int(static_cast<int>(c.block(b).size()));
    pop.push_back(std::move(genes));
  }
  return pop;
}

struct PopulationRun {
  CountedOracle& oracle;
  const PopulationConfig& cfg;
  std::int64_t start;
  std::optional<std::pair<Subset, double>> best;

  PopulationRun(CountedOracle& o, const PopulationConfig& pc)
      : oracle(o), cfg(pc), start(o.query_count()) {}

  double eval(const Subset& s) {
    if (cfg.budget && used() >= *cfg.budget) throw BudgetSignal{};
    double v;
    try {
      v = oracle.evaluate(s);
    } catch (const BudgetExhaustedError&) {
      throw BudgetSignal{};
    }
    if (!best || v > best->second) best = std::make_pair(s, v);
    if (cfg.stop_on_success && oracle.is_success(s, v)) throw SuccessSignal{s, v};
    return v;
  }

  std::int64_t used() const { return oracle.query_count() - start; }
};

inline SearchResult population_result(const Subset& best, double value,
                                      std::int64_t queries, Termination term) {
  SearchResult r;
  r.solution = best;
  r.value = value;
  r.queries = queries;
  r.termination = term;
  return r;
}

/// Fitness-proportional index draw over `weights` (all zero falls back to
/// uniform).
inline int proportional_pick(const std::vector<double>& weights, SplitRng& rng) {
  double total = 0.0;
  for (double w : weights) total += w;
  if (total <= 0.0) return rng.next_int(static_cast<int>(weights.size()));
  double t = rng.next_unit() * total;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    t -= weights[i];
    if (t < 0.0) return static_cast<int>(i);
  }
  return static_cast<int>(weights.size()) - 1;
}

}  // namespace detail

/// Genetic-algorithm baseline. Per generation: the single best individual is
/// carried over unchanged; every other slot is filled by uniform per-block
/// crossover of two parents picked from the top-K pool (N fitness-
/// proportional draws, fittest two win), then per-block mutation with
/// probability delta to a random substitute. Deterministic for a fixed seed:
/// all randomness derives from per-individual streams.
inline SearchResult ga_search(CountedOracle& oracle, const PopulationConfig& cfg = {}) {
  const auto& c = oracle.constraint();
  detail::validate(cfg, c);
  detail::PopulationRun run(oracle, cfg);

  struct Individual {
    detail::Chromosome genes;
    double fitness;
  };

  try {
    SplitRng init_rng(derive_seed(cfg.seed, 0x6741));
    std::vector<detail::Chromosome> seeds = detail::seed_population(c, cfg, init_rng);
    std::vector<Individual> pop;
    pop.reserve(seeds.size());
    for (auto& genes : seeds) {
      const double v = run.eval(detail::to_subset(genes, c));
      pop.push_back(Individual{std::move(genes), v});
    }

    auto best_of = [](const std::vector<Individual>& p) {
      std::size_t b = 0;
      for (std::size_t i = 1; i < p.size(); ++i) {
        if (p[i].fitness > p[b].fitness) b = i;
      }
      return b;
    };

    for (int gen = 0; gen < cfg.max_iterations; ++gen) {
      // Rank by fitness (stable: ties keep the older individual first).
      std::vector<int> order(pop.size());
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
        return pop[a].fitness > pop[b].fitness;
      });
      const int pool_size = std::min<int>(cfg.parent_pool, static_cast<int>(pop.size()));
      std::vector<double> pool_weights(pool_size);
      for (int i = 0; i < pool_size; ++i) {
        pool_weights[i] = std::max(0.0, pop[order[i]].fitness);
      }

      std::vector<Individual> next;
      next.reserve(pop.size());
      next.push_back(pop[order[0]]);  // elitism of 1, not re-evaluated
      for (int slot = 1; slot < cfg.population_size; ++slot) {
        SplitRng rng(derive_seed(cfg.seed, 0x6368, static_cast<std::uint64_t>(gen),
                                 static_cast<std::uint64_t>(slot)));
        // N draws from the pool; the two fittest draws become the parents.
        int p1 = -1, p2 = -1;
        for (int d = 0; d < cfg.tournament_draws; ++d) {
          const int pick = order[detail::proportional_pick(pool_weights, rng)];
          if (p1 < 0 || pop[pick].fitness > pop[p1].fitness) {
            p2 = p1;
            p1 = pick;
          } else if (p2 < 0 || pop[pick].fitness > pop[p2].fitness) {
            p2 = pick;
          }
        }
        if (p2 < 0) p2 = p1;

        detail::Chromosome child(c.num_blocks());
        for (int i = 0; i < c.num_blocks(); ++i) {
          child[i] = rng.next_bool() ? pop[p1].genes[i] : pop[p2].genes[i];
          if (rng.next_unit() < cfg.mutation_rate) {
            child[i] = 1 + rng.next_int(static_cast<int>(c.block(i).size()));
          }
        }
        const double v = run.eval(detail::to_subset(child, c));
        next.push_back(Individual{std::move(child), v});
      }
      pop = std::move(next);
    }

    const std::size_t b = best_of(pop);
    return detail::population_result(detail::to_subset(pop[b].genes, c), pop[b].fitness,
                                     run.used(), Termination::kIterations);
  } catch (const detail::SuccessSignal& hit) {
    return detail::population_result(hit.subset, hit.value, run.used(),
                                     Termination::kSuccess);
  } catch (const detail::BudgetSignal&) {
    SearchResult r;
    r.termination = Termination::kBudget;
    if (run.best) {
      r.solution = run.best->first;
      r.value = run.best->second;
    }
    r.queries = run.used();
    return r;
  }
}

/// Particle-swarm baseline over the same categorical encoding. Velocity is a
/// per-block drive toward the personal/global best choice, clamped to
/// [-v_max, v_max]; inertia anneals omega_max -> omega_min across
/// iterations; each particle is perturbed with probability interpolated
/// p_max -> p_min by resampling `perturb_blocks` random blocks.
/// Deterministic for a fixed seed via per-particle streams.
inline SearchResult pso_search(CountedOracle& oracle, const PopulationConfig& cfg = {}) {
  const auto& c = oracle.constraint();
  detail::validate(cfg, c);
  detail::PopulationRun run(oracle, cfg);

  const int n = c.num_blocks();
  struct Particle {
    detail::Chromosome position;
    std::vector<double> velocity;
    detail::Chromosome best_position;
    double best_value;
    SplitRng rng;
  };

  try {
    SplitRng init_rng(derive_seed(cfg.seed, 0x7073));
    std::vector<detail::Chromosome> seeds = detail::seed_population(c, cfg, init_rng);
    std::vector<Particle> swarm;
    swarm.reserve(seeds.size());
    detail::Chromosome global_best;
    double global_value = 0.0;
    bool have_global = false;
    for (std::size_t i = 0; i < seeds.size(); ++i) {
      const double v = run.eval(detail::to_subset(seeds[i], c));
      Particle p{seeds[i], std::vector<double>(n, 0.0), seeds[i], v,
                 SplitRng(derive_seed(cfg.seed, 0x7061, i))};
      if (!have_global || v > global_value) {
        global_best = seeds[i];
        global_value = v;
        have_global = true;
      }
      swarm.push_back(std::move(p));
    }

    const int t_max = cfg.max_iterations;
    for (int t = 0; t < t_max; ++t) {
      const double frac = t_max > 1 ? static_cast<double>(t) / (t_max - 1) : 0.0;
      const double omega = cfg.omega_max - (cfg.omega_max - cfg.omega_min) * frac;
      const double p_perturb = cfg.p_max - (cfg.p_max - cfg.p_min) * frac;

      for (auto& p : swarm) {
        for (int i = 0; i < n; ++i) {
          const double toward_own = p.best_position[i] != p.position[i] ? 1.0 : 0.0;
          const double toward_global = global_best[i] != p.position[i] ? 1.0 : 0.0;
          double v = omega * p.velocity[i] + p.rng.next_unit() * toward_own +
                     p.rng.next_unit() * toward_global;
          p.velocity[i] = std::clamp(v, -cfg.v_max, cfg.v_max);
        }
        for (int i = 0; i < n; ++i) {
          if (p.rng.next_unit() < std::max(p.velocity[i], 0.0)) {
            p.position[i] = p.rng.next_bool() ? p.best_position[i] : global_best[i];
          }
        }
        if (p.rng.next_unit() < p_perturb) {
          const int hits = std::min(cfg.perturb_blocks, n);
          for (int h = 0; h < hits; ++h) {
            const int i = p.rng.next_int(n);
            p.position[i] = p.rng.next_int(static_cast<int>(c.block(i).size()) + 1);
          }
        }
      }
      // Synchronous update: evaluate every particle, then refresh bests in
      // index order so concurrency in evaluation could never change results.
      for (auto& p : swarm) {
        const double v = run.eval(detail::to_subset(p.position, c));
        if (v > p.best_value) {
          p.best_value = v;
          p.best_position = p.position;
        }
      }
      for (const auto& p : swarm) {
        if (p.best_value > global_value) {
          global_value = p.best_value;
          global_best = p.best_position;
        }
      }
    }

    return detail::population_result(detail::to_subset(global_best, c), global_value,
                                     run.used(), Termination::kIterations);
  } catch (const detail::SuccessSignal& hit) {
    return detail::population_result(hit.subset, hit.value, run.used(),
                                     Termination::kSuccess);
  } catch (const detail::BudgetSignal&) {
    SearchResult r;
    r.termination = Termination::kBudget;
    if (run.best) {
      r.solution = run.best->first;
      r.value = run.best->second;
    }
    r.queries = run.used();
    return r;
  }
}

}  // namespace setmax
