#include <gtest/gtest.h>

#include <vector>

#include "setmax/population.hpp"
#include "test_util.h"

namespace setmax {
namespace {

// Three two-element blocks, one pick each; distinct weights make the optimum
// {1,2,5} = 0.95 unique.
PartitionConstraint unit_blocks() {
  return PartitionConstraint({{0, 1}, {2, 3}, {4, 5}}, {1, 1, 1});
}

double block_weights(const Subset& s) {
  static const double w[6] = {0.1, 0.4, 0.3, 0.2, 0.0, 0.25};
  double total = 0.0;
  for (int e : s) total += w[e];
  return total;
}

TEST(Population, RequiresUnitCapacities) {
  CountedOracle oracle(block_weights, PartitionConstraint({{0, 1, 2}, {3, 4, 5}}, {2, 1}));
  EXPECT_THROW(ga_search(oracle), std::invalid_argument);
  EXPECT_THROW(pso_search(oracle), std::invalid_argument);
}

TEST(Population, ValidatesConfig) {
  CountedOracle oracle(block_weights, unit_blocks());
  PopulationConfig cfg;
  cfg.population_size = 1;
  EXPECT_THROW(ga_search(oracle, cfg), std::invalid_argument);
  cfg = {};
  cfg.max_iterations = 0;
  EXPECT_THROW(pso_search(oracle, cfg), std::invalid_argument);
  cfg = {};
  cfg.mutation_rate = 1.5;
  EXPECT_THROW(ga_search(oracle, cfg), std::invalid_argument);
  cfg = {};
  cfg.omega_min = 0.9;  // above omega_max
  EXPECT_THROW(pso_search(oracle, cfg), std::invalid_argument);
}

TEST(Population, SeedPopulationShape) {
  const auto c = unit_blocks();
  PopulationConfig cfg;
  cfg.population_size = 12;
  SplitRng rng(7);
  const auto pop = detail::seed_population(c, cfg, rng);
  ASSERT_EQ(pop.size(), 12u);
  // Individual 0 keeps every block unselected; the rest substitute exactly
  // one block.
  EXPECT_EQ(detail::to_subset(pop[0], c).size(), 0);
  for (std::size_t i = 1; i < pop.size(); ++i) {
    int nonzero = 0;
    for (std::size_t b = 0; b < pop[i].size(); ++b) {
      if (pop[i][b] != 0) {
        ++nonzero;
        ASSERT_GE(pop[i][b], 1);
        ASSERT_LE(pop[i][b], static_cast<int>(c.block(static_cast<int>(b)).size()));
      }
    }
    EXPECT_EQ(nonzero, 1);
  }
}

TEST(Population, ChromosomeDecoding) {
  const auto c = unit_blocks();
  EXPECT_EQ(detail::to_subset({0, 0, 0}, c).to_string(), "");
  EXPECT_EQ(detail::to_subset({2, 1, 2}, c).to_string(), "1,2,5");
  EXPECT_EQ(detail::to_subset({1, 0, 2}, c).to_string(), "0,5");
}

TEST(Population, GaIsDeterministicWithExactQueryCount) {
  PopulationConfig cfg;
  cfg.population_size = 20;
  cfg.max_iterations = 5;
  cfg.seed = 42;

  CountedOracle a(block_weights, unit_blocks());
  CountedOracle b(block_weights, unit_blocks());
  const SearchResult ra = ga_search(a, cfg);
  const SearchResult rb = ga_search(b, cfg);

  EXPECT_EQ(ra.solution, rb.solution);
  EXPECT_DOUBLE_EQ(ra.value, rb.value);
  EXPECT_EQ(ra.queries, rb.queries);
  EXPECT_EQ(ra.termination, Termination::kIterations);
  // Seeding evaluates every individual; each generation re-evaluates all but
  // the carried-over elite. No caching, so the count is structural.
  EXPECT_EQ(ra.queries, 20 + 5 * 19);
}

TEST(Population, PsoIsDeterministicWithExactQueryCount) {
  PopulationConfig cfg;
  cfg.population_size = 20;
  cfg.max_iterations = 5;
  cfg.seed = 42;

  CountedOracle a(block_weights, unit_blocks());
  CountedOracle b(block_weights, unit_blocks());
  const SearchResult ra = pso_search(a, cfg);
  const SearchResult rb = pso_search(b, cfg);

  EXPECT_EQ(ra.solution, rb.solution);
  EXPECT_DOUBLE_EQ(ra.value, rb.value);
  EXPECT_EQ(ra.queries, rb.queries);
  EXPECT_EQ(ra.termination, Termination::kIterations);
  EXPECT_EQ(ra.queries, 20 * (1 + 5));
}

TEST(Population, BothFindTheUniqueOptimumOnASmallLattice) {
  // 27 feasible candidates against ~1200 evaluations: with the pinned seed
  // this is a deterministic regression, not a probabilistic one.
  PopulationConfig cfg;
  cfg.seed = 3;
  {
    CountedOracle oracle(block_weights, unit_blocks());
    const SearchResult r = ga_search(oracle, cfg);
    EXPECT_EQ(r.solution.to_string(), "1,2,5");
    EXPECT_DOUBLE_EQ(r.value, 0.95);
  }
  {
    CountedOracle oracle(block_weights, unit_blocks());
    const SearchResult r = pso_search(oracle, cfg);
    EXPECT_EQ(r.solution.to_string(), "1,2,5");
    EXPECT_DOUBLE_EQ(r.value, 0.95);
  }
}

TEST(Population, StopOnSuccessEndsTheRunAtTheFirstHit) {
  PopulationConfig cfg;
  cfg.stop_on_success = true;
  for (int which = 0; which < 2; ++which) {
    CountedOracle oracle(block_weights, unit_blocks());
    // The all-original candidate is evaluated first and already qualifies.
    oracle.set_success_predicate([](const Subset& s, double) { return s.empty(); });
    const SearchResult r =
        which == 0 ? ga_search(oracle, cfg) : pso_search(oracle, cfg);
    EXPECT_EQ(r.termination, Termination::kSuccess);
    EXPECT_EQ(r.solution.to_string(), "");
    EXPECT_EQ(r.queries, 1);
  }
}

TEST(Population, BudgetStopsMidSeedingAndReportsTheBestSeen) {
  PopulationConfig cfg;
  cfg.budget = 5;
  for (int which = 0; which < 2; ++which) {
    CountedOracle oracle(block_weights, unit_blocks());
    const SearchResult r =
        which == 0 ? ga_search(oracle, cfg) : pso_search(oracle, cfg);
    EXPECT_EQ(r.termination, Termination::kBudget);
    EXPECT_EQ(r.queries, 5);
    EXPECT_TRUE(oracle.is_feasible(r.solution));
    EXPECT_GE(r.value, 0.0);                      // at least the empty set
    EXPECT_DOUBLE_EQ(r.value, block_weights(r.solution));
  }
}

TEST(Population, OracleBudgetIsEquivalentToTheRunLocalOne) {
  PopulationConfig cfg;
  CountedOracle oracle(block_weights, unit_blocks());
  oracle.set_budget(5);
  const SearchResult r = ga_search(oracle, cfg);
  EXPECT_EQ(r.termination, Termination::kBudget);
  EXPECT_EQ(oracle.query_count(), 5);
}

TEST(Population, HandlesWiderRandomLattices) {
  // Unit-capacity constraints with ragged block sizes; both baselines must
  // stay feasible and never beat the exhaustive optimum.
  SplitRng rng(11);
  for (int trial = 0; trial < 5; ++trial) {
    const int blocks = 2 + rng.next_int(3);
    std::vector<std::vector<int>> parts;
    int next_id = 0;
    for (int b = 0; b < blocks; ++b) {
      std::vector<int> ids;
      const int size = 1 + rng.next_int(3);
      for (int k = 0; k < size; ++k) ids.push_back(next_id++);
      parts.push_back(std::move(ids));
    }
    PartitionConstraint c(parts, std::vector<int>(parts.size(), 1));
    auto f = test::squashed(test::random_quadratic(rng, next_id, 0.3));
    const auto exact = test::enumerate_opt(f, c);

    PopulationConfig cfg;
    cfg.seed = derive_seed(99, static_cast<std::uint64_t>(trial));
    cfg.population_size = 30;
    cfg.max_iterations = 10;
    for (int which = 0; which < 2; ++which) {
      CountedOracle oracle(f, c);
      const SearchResult r =
          which == 0 ? ga_search(oracle, cfg) : pso_search(oracle, cfg);
      ASSERT_TRUE(oracle.is_feasible(r.solution));
      ASSERT_LE(r.value, exact.value + 1e-12);
      ASSERT_DOUBLE_EQ(r.value, f(r.solution));
    }
  }
}

}  // namespace
}  // namespace setmax
