#pragma once

#include <atomic>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "setmax/analysis.hpp"
#include "setmax/attack.hpp"
#include "setmax/generator.hpp"
#include "setmax/rng.hpp"

namespace setmax {

/// Shortest decimal form that parses back to the same double.
inline std::string format_double(double v) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v);
  if (ec != std::errc()) throw std::runtime_error("format_double: to_chars failed");
  return std::string(buf, end);
}

struct BenchConfig {
  std::vector<Algorithm> algorithms = {Algorithm::kLocalSearch, Algorithm::kGreedy,
                                       Algorithm::kGa, Algorithm::kPso};
  /// Stochastic algorithms run this many times per instance; deterministic
  /// ones (local search, greedy) always run once.
  int repeats = 10;
  std::uint64_t seed = 0;
  int jobs = 1;
  double epsilon = 0.0;
  std::optional<std::int64_t> budget;
  double modification_cap = 0.25;
  int population_size = 60;
  int iterations = 20;
  bool stop_on_success = true;

  void validate() const {
    if (algorithms.empty()) throw std::invalid_argument("BenchConfig: no algorithms");
    if (repeats < 1) throw std::invalid_argument("BenchConfig: repeats < 1");
    if (jobs < 1) throw std::invalid_argument("BenchConfig: jobs < 1");
  }
};

inline bool is_deterministic(Algorithm a) {
  return a == Algorithm::kLocalSearch || a == Algorithm::kGreedy;
}

/// One (instance, algorithm, repeat) run.
struct TaskResult {
  int instance = 0;
  Algorithm algorithm = Algorithm::kLocalSearch;
  int repeat = 0;
  std::uint64_t task_seed = 0;
  bool success = false;
  std::int64_t queries = 0;
  double value = 0.0;
  double mod_rate = 0.0;
};

/// Mean and sample standard deviation (N - 1 denominator; 0 when N < 2).
struct MeanStd {
  double mean = 0.0;
  double std = 0.0;
  int count = 0;
};

inline MeanStd mean_std(const std::vector<double>& xs) {
  MeanStd m;
  m.count = static_cast<int>(xs.size());
  if (xs.empty()) return m;
  double sum = 0.0;
  for (double x : xs) sum += x;
  m.mean = sum / static_cast<double>(xs.size());
  if (xs.size() >= 2) {
    double ss = 0.0;
    for (double x : xs) ss += (x - m.mean) * (x - m.mean);
    m.std = std::sqrt(ss / static_cast<double>(xs.size() - 1));
  }
  return m;
}

/// Per-algorithm aggregate: each repeat is first reduced over the corpus
/// (success rate over all instances, mean queries over all instances, mean
/// modification rate over that repeat's successes), then mean/std are taken
/// across repeats. Repeats with zero successes do not contribute a
/// modification-rate sample.
struct AlgorithmSummary {
  Algorithm algorithm = Algorithm::kLocalSearch;
  int repeats = 1;
  MeanStd success_rate;
  MeanStd queries;
  MeanStd mod_rate;
};

struct BenchReport {
  int instances = 0;
  std::uint64_t seed = 0;
  std::uint64_t config_hash = 0;
  std::vector<TaskResult> tasks;
  std::vector<AlgorithmSummary> summaries;
};

namespace detail {

inline std::uint64_t fnv1a64(const std::string& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline std::uint64_t bench_config_hash(const BenchConfig& cfg, int instances) {
  std::string s;
  for (Algorithm a : cfg.algorithms) {
    s += algorithm_name(a);
    s += ';';
  }
  s += std::to_string(cfg.repeats) + ';' + std::to_string(cfg.seed) + ';';
  s += format_double(cfg.epsilon) + ';';
  s += (cfg.budget ? std::to_string(*cfg.budget) : std::string("none")) + ';';
  s += format_double(cfg.modification_cap) + ';';
  s += std::to_string(cfg.population_size) + ';' + std::to_string(cfg.iterations) + ';';
  s += std::to_string(cfg.stop_on_success ? 1 : 0) + ';' + std::to_string(instances);
  return fnv1a64(s);
}

}  // namespace detail

/// Runs every (instance, algorithm, repeat) combination. Task seeds are a
/// pure function of (bench seed, instance, algorithm, repeat) and results
/// land in preassigned slots, so the report is identical for any --jobs.
inline BenchReport run_bench(const std::vector<GeneratedInstance>& corpus,
                             const BenchConfig& cfg = {}) {
  cfg.validate();
  if (corpus.empty()) throw std::invalid_argument("run_bench: empty corpus");

  BenchReport report;
  report.instances = static_cast<int>(corpus.size());
  report.seed = cfg.seed;
  report.config_hash = detail::bench_config_hash(cfg, report.instances);

  for (int i = 0; i < report.instances; ++i) {
    for (Algorithm a : cfg.algorithms) {
      const int reps = is_deterministic(a) ? 1 : cfg.repeats;
      for (int r = 0; r < reps; ++r) {
        TaskResult t;
        t.instance = i;
        t.algorithm = a;
        t.repeat = r;
        t.task_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i),
                                  static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(r));
        report.tasks.push_back(t);
      }
    }
  }

  auto run_slot = [&](TaskResult& t) {
    AttackConfig ac;
    ac.algorithm = t.algorithm;
    ac.stop_on_success = cfg.stop_on_success;
    ac.epsilon = cfg.epsilon;
    ac.budget = cfg.budget;
    ac.modification_cap = cfg.modification_cap;
    ac.population_size = cfg.population_size;
    ac.iterations = cfg.iterations;
    ac.seed = t.task_seed;
    const AttackOutcome out = run_attack(corpus[static_cast<std::size_t>(t.instance)].instance,
                                         corpus[static_cast<std::size_t>(t.instance)].victim, ac);
    t.success = out.success;
    t.queries = out.queries;
    t.value = out.value;
    t.mod_rate = out.modification_rate;
  };

  const int jobs = std::min<int>(cfg.jobs, static_cast<int>(report.tasks.size()));
  if (jobs <= 1) {
    for (TaskResult& t : report.tasks) run_slot(t);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> workers;
    workers.reserve(static_cast<std::size_t>(jobs));
    for (int w = 0; w < jobs; ++w) {
      workers.emplace_back([&] {
        for (;;) {
          const std::size_t idx = next.fetch_add(1);
          if (idx >= report.tasks.size()) return;
          run_slot(report.tasks[idx]);
        }
      });
    }
    for (std::thread& w : workers) w.join();
  }

  for (Algorithm a : cfg.algorithms) {
    const int reps = is_deterministic(a) ? 1 : cfg.repeats;
    std::vector<double> rate_by_rep, queries_by_rep, mod_by_rep;
    for (int r = 0; r < reps; ++r) {
      int successes = 0;
      double query_sum = 0.0;
      double mod_sum = 0.0;
      int count = 0;
      for (const TaskResult& t : report.tasks) {
        if (t.algorithm != a || t.repeat != r) continue;
        ++count;
        query_sum += static_cast<double>(t.queries);
        if (t.success) {
          ++successes;
          mod_sum += t.mod_rate;
        }
      }
      rate_by_rep.push_back(static_cast<double>(successes) / count);
      queries_by_rep.push_back(query_sum / count);
      if (successes > 0) mod_by_rep.push_back(mod_sum / successes);
    }
    AlgorithmSummary s;
    s.algorithm = a;
    s.repeats = reps;
    s.success_rate = mean_std(rate_by_rep);
    s.queries = mean_std(queries_by_rep);
    s.mod_rate = mean_std(mod_by_rep);
    report.summaries.push_back(s);
  }
  return report;
}

/// Per-run rows, one line per (instance, algorithm, repeat), rows in
/// instance-major order matching the configured algorithm order.
inline void write_tasks_csv(std::ostream& os, const BenchReport& report) {
  os << "instance,algorithm,repeat,seed,success,queries,value,mod_rate\n";
  for (const TaskResult& t : report.tasks) {
    os << t.instance << ',' << algorithm_name(t.algorithm) << ',' << t.repeat << ','
       << t.task_seed << ',' << (t.success ? 1 : 0) << ',' << t.queries << ','
       << format_double(t.value) << ',' << format_double(t.mod_rate) << '\n';
  }
}

inline void write_summary_csv(std::ostream& os, const BenchReport& report) {
  os << "algorithm,repeats,success_rate_mean,success_rate_std,queries_mean,queries_std,"
        "mod_rate_mean,mod_rate_std\n";
  for (const AlgorithmSummary& s : report.summaries) {
    os << algorithm_name(s.algorithm) << ',' << s.repeats << ','
       << format_double(s.success_rate.mean) << ',' << format_double(s.success_rate.std) << ','
       << format_double(s.queries.mean) << ',' << format_double(s.queries.std) << ','
       << format_double(s.mod_rate.mean) << ',' << format_double(s.mod_rate.std) << '\n';
  }
}

/// Fixed-width text table of the per-algorithm summaries.
inline std::string render_table(const BenchReport& report) {
  std::string out;
  char line[160];
  std::snprintf(line, sizeof line, "%-8s %4s %18s %20s %16s\n", "alg", "reps",
                "success_rate", "queries", "mod_rate");
  out += line;
  for (const AlgorithmSummary& s : report.summaries) {
    char rate[32], queries[32], mod[32];
    std::snprintf(rate, sizeof rate, "%.3f+-%.3f", s.success_rate.mean, s.success_rate.std);
    std::snprintf(queries, sizeof queries, "%.1f+-%.1f", s.queries.mean, s.queries.std);
    if (s.mod_rate.count > 0) {
      std::snprintf(mod, sizeof mod, "%.3f+-%.3f", s.mod_rate.mean, s.mod_rate.std);
    } else {
      std::snprintf(mod, sizeof mod, "n/a");
    }
    std::snprintf(line, sizeof line, "%-8s %4d %18s %20s %16s\n", algorithm_name(s.algorithm),
                  s.repeats, rate, queries, mod);
    out += line;
  }
  return out;
}

inline void write_prior_grid_csv(std::ostream& os, const std::vector<GridEntry>& grid) {
  os << "alpha,d,prior_minus_third,prior_minus_half\n";
  for (const GridEntry& e : grid) {
    os << format_double(e.alpha) << ',' << e.d << ',' << format_double(e.prior_minus_third)
       << ',' << format_double(e.prior_minus_half) << '\n';
  }
}

/// One small-instance certification row: enumerate the true optimum, run
/// local search to a genuine local optimum (no early stop), evaluate its
/// certified lower bound, and record a tuned-baseline value for contrast.
struct BoundRow {
  int instance = 0;
  double optimum = 0.0;
  double lower_bound = 0.0;
  double ls_value = 0.0;
  double pso_value = 0.0;
  bool holds = false;
};

struct BoundExperimentConfig {
  std::uint64_t seed = 0;
  int population_size = 60;
  int iterations = 20;
  /// Largest ground set tolerated (relational-bound terms need exhaustive
  /// enumeration).
  int max_ground = 14;
};

inline std::vector<BoundRow> run_bound_experiment(const std::vector<GeneratedInstance>& corpus,
                                                  const BoundExperimentConfig& cfg = {}) {
  std::vector<BoundRow> rows;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto inst = std::make_shared<const AttackInstance>(corpus[i].instance);
    auto vict = std::make_shared<const SurrogateVictim>(corpus[i].victim);
    auto map = std::make_shared<const GroundMap>(build_ground_set(*inst));
    if (map->constraint.ground_size() > cfg.max_ground) {
      throw SizeLimitError(
          "run_bound_experiment: instance " + std::to_string(i) + " has ground size " +
              std::to_string(map->constraint.ground_size()) + " > " +
              std::to_string(cfg.max_ground),
          static_cast<double>(map->constraint.ground_size()));
    }
    const Objective obj = untargeted_objective(inst, vict, map, 1.0);

    BoundRow row;
    row.instance = static_cast<int>(i);

    CountedOracle ls_oracle(obj.value, map->constraint);
    SearchConfig sc;
    const SearchResult ls = local_search(ls_oracle, sc);
    row.ls_value = ls.value;
    const Subset s = ls.local_optimum ? *ls.local_optimum : ls.solution;

    const OptResult opt = brute_force_opt(obj.value, map->constraint);
    row.optimum = opt.value;

    const BoundReport bound = theorem1_check(obj.value, s, opt.argmax, map->constraint);
    row.lower_bound = bound.lower_bound;
    row.holds = bound.holds;

    CountedOracle pso_oracle(obj.value, map->constraint);
    PopulationConfig pc;
    pc.population_size = cfg.population_size;
    pc.max_iterations = cfg.iterations;
    pc.seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(i),
                          static_cast<std::uint64_t>(Algorithm::kPso));
    row.pso_value = pso_search(pso_oracle, pc).value;

    rows.push_back(row);
  }
  return rows;
}

inline void write_bound_rows_csv(std::ostream& os, const std::vector<BoundRow>& rows) {
  os << "instance,optimum,lower_bound,ls_value,pso_value,holds\n";
  for (const BoundRow& r : rows) {
    os << r.instance << ',' << format_double(r.optimum) << ',' << format_double(r.lower_bound)
       << ',' << format_double(r.ls_value) << ',' << format_double(r.pso_value) << ','
       << (r.holds ? 1 : 0) << '\n';
  }
}

struct Violation {
  std::string suite;
  std::string message;
};

/// Grid claims: with unit block capacities the classic guarantee drops
/// below 1/3 for every total budget >= 3 (any alpha > 0) and below 1/2 for
/// every total budget >= 2, while budget 1 keeps it competitive.
inline std::vector<Violation> verify_prior_grid(const std::vector<GridEntry>& grid) {
  std::vector<Violation> v;
  bool positive_at_d1_third = false;
  bool positive_at_d1_half = false;
  for (const GridEntry& e : grid) {
    if (e.d >= 3 && e.prior_minus_third >= 0.0) {
      v.push_back({"prior-grid", "alpha=" + format_double(e.alpha) + " d=" + std::to_string(e.d) +
                                     ": expected prior bound below 1/3, margin " +
                                     format_double(e.prior_minus_third)});
    }
    if (e.d >= 2 && e.prior_minus_half >= 0.0) {
      v.push_back({"prior-grid", "alpha=" + format_double(e.alpha) + " d=" + std::to_string(e.d) +
                                     ": expected prior bound below 1/2, margin " +
                                     format_double(e.prior_minus_half)});
    }
    if (e.d == 1 && e.prior_minus_third > 0.0) positive_at_d1_third = true;
    if (e.d == 1 && e.prior_minus_half > 0.0) positive_at_d1_half = true;
  }
  if (!positive_at_d1_third) {
    v.push_back({"prior-grid", "no alpha with prior bound above 1/3 at d=1"});
  }
  if (!positive_at_d1_half) {
    v.push_back({"prior-grid", "no alpha with prior bound above 1/2 at d=1"});
  }
  return v;
}

/// Certification rows must be internally consistent: the relational
/// inequality holds, the certified lower bound never exceeds the enumerated
/// optimum, and the search value sits between them.
inline std::vector<Violation> verify_bound_rows(const std::vector<BoundRow>& rows) {
  std::vector<Violation> v;
  for (const BoundRow& r : rows) {
    const double slack =
        1e-12 * std::max({1.0, std::abs(r.optimum), std::abs(r.ls_value), std::abs(r.lower_bound)});
    if (!r.holds) {
      v.push_back({"bounds", "instance " + std::to_string(r.instance) +
                                 ": relational inequality violated"});
    }
    if (r.lower_bound > r.optimum + slack) {
      v.push_back({"bounds", "instance " + std::to_string(r.instance) + ": lower bound " +
                                 format_double(r.lower_bound) + " exceeds optimum " +
                                 format_double(r.optimum)});
    }
    if (r.ls_value < r.lower_bound - slack) {
      v.push_back({"bounds", "instance " + std::to_string(r.instance) + ": search value " +
                                 format_double(r.ls_value) + " below certified bound " +
                                 format_double(r.lower_bound)});
    }
    if (r.ls_value > r.optimum + slack) {
      v.push_back({"bounds", "instance " + std::to_string(r.instance) + ": search value " +
                                 format_double(r.ls_value) + " exceeds optimum " +
                                 format_double(r.optimum)});
    }
  }
  return v;
}

/// Cross-validates the two independent curvature probes on each instance's
/// objective: the pairwise witness scan and the exact second-order deficiency
/// at the full ground set must agree on whether the function is submodular.
inline std::vector<Violation> verify_submodularity_probe(
    const std::vector<GeneratedInstance>& corpus, int max_ground = 12) {
  std::vector<Violation> v;
  for (std::size_t i = 0; i < corpus.size(); ++i) {
    auto inst = std::make_shared<const AttackInstance>(corpus[i].instance);
    auto vict = std::make_shared<const SurrogateVictim>(corpus[i].victim);
    auto map = std::make_shared<const GroundMap>(build_ground_set(*inst));
    const int n = map->constraint.ground_size();
    if (n > max_ground) {
      throw SizeLimitError("verify_submodularity_probe: instance " + std::to_string(i) +
                               " has ground size " + std::to_string(n) + " > " +
                               std::to_string(max_ground),
                           static_cast<double>(n));
    }
    const Objective obj = untargeted_objective(inst, vict, map, 1.0);
    const auto witness = check_submodular(obj.value, n, 0.0, max_ground);
    SmIOptions opts;
    opts.exact_cap = max_ground;
    const SmIReport smi_report =
        smi(obj.value, map->constraint.complement(Subset{}), 2, n, opts);
    const bool witness_says_non_submodular = witness.has_value();
    const bool deficiency_says_non_submodular = smi_report.lambda < 0.0;
    if (witness_says_non_submodular != deficiency_says_non_submodular) {
      v.push_back({"submodularity",
                   "instance " + std::to_string(i) + ": witness scan says " +
                       (witness_says_non_submodular ? "non-submodular" : "submodular") +
                       " but pair deficiency is " + format_double(smi_report.lambda)});
    }
  }
  return v;
}

}  // namespace setmax
