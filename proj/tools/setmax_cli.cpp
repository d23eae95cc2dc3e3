// Command-line front end: corpus generation, single-instance attacks,
// benchmark sweeps, and verification of the certified bounds.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "setmax/setmax.hpp"

namespace {

std::string join_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    out += tokens[i];
  }
  return out;
}

std::ofstream open_or_throw(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

setmax::GeneratorConfig tiny_gen_config(int instances, std::uint64_t seed) {
  setmax::GeneratorConfig g;
  g.instances = instances;
  g.seed = seed;
  g.min_tokens = 5;
  g.max_tokens = 7;
  g.substitute_prob = 0.7;
  g.max_substitutes = 2;
  return g;
}

int run_gen(const setmax::GeneratorConfig& cfg, const std::string& out_path) {
  const auto corpus = setmax::generate_corpus(cfg);
  setmax::write_corpus(out_path, corpus, cfg.seed, cfg);
  std::cout << "wrote " << corpus.size() << " instances to " << out_path << " (seed "
            << cfg.seed << ")\n";
  return 0;
}

int run_solve(const std::string& corpus_path, int index, const std::string& alg_name,
              const setmax::AttackConfig& base_cfg) {
  const auto corpus = setmax::read_corpus(corpus_path);
  if (index < 0 || index >= static_cast<int>(corpus.size())) {
    throw std::runtime_error("instance index " + std::to_string(index) + " out of range (corpus has " +
                             std::to_string(corpus.size()) + " instances)");
  }
  const auto& g = corpus[static_cast<std::size_t>(index)];

  setmax::AttackConfig cfg = base_cfg;
  cfg.algorithm = *setmax::algorithm_from_name(alg_name);

  const setmax::AttackOutcome out = setmax::run_attack(g.instance, g.victim, cfg);

  std::cout << "instance: " << index << " (tokens " << g.instance.tokens.size() << ", true label "
            << g.instance.true_label;
  if (g.instance.target_label) std::cout << ", target " << *g.instance.target_label;
  std::cout << ")\n";
  std::cout << "algorithm: " << setmax::algorithm_name(out.algorithm) << '\n';
  std::cout << "success: " << (out.success ? "yes" : "no") << '\n';
  std::cout << "value: " << setmax::format_double(out.value) << '\n';
  std::cout << "queries: " << out.queries << '\n';
  std::cout << "modification_rate: " << setmax::format_double(out.modification_rate) << '\n';
  std::cout << "termination: " << setmax::termination_name(out.termination) << '\n';
  std::cout << "original:    " << join_tokens(g.instance.tokens) << '\n';
  std::cout << "adversarial: " << join_tokens(out.adversarial_tokens) << '\n';
  return out.success ? 0 : 2;
}

int run_bench_cmd(const std::vector<setmax::GeneratedInstance>& corpus,
                  const setmax::BenchConfig& cfg, const std::string& out_prefix) {
  const setmax::BenchReport report = setmax::run_bench(corpus, cfg);
  std::cout << "instances: " << report.instances << "  seed: " << report.seed
            << "  config_hash: " << report.config_hash << '\n';
  std::cout << setmax::render_table(report);
  if (!out_prefix.empty()) {
    auto summary = open_or_throw(out_prefix + "_summary.csv");
    setmax::write_summary_csv(summary, report);
    auto runs = open_or_throw(out_prefix + "_runs.csv");
    setmax::write_tasks_csv(runs, report);
    std::cout << "wrote " << out_prefix << "_summary.csv and " << out_prefix << "_runs.csv\n";
  }
  return 0;
}

int run_verify(const std::vector<std::string>& suites,
               const std::optional<std::string>& corpus_path, int gen_count, std::uint64_t seed,
               const std::string& grid_out, const std::string& rows_out) {
  auto want = [&](const char* name) {
    for (const auto& s : suites) {
      if (s == name || s == "all") return true;
    }
    return false;
  };

  std::vector<setmax::Violation> violations;

  if (want("prior-grid")) {
    const auto grid = setmax::bound_comparison_grid();
    auto v = setmax::verify_prior_grid(grid);
    violations.insert(violations.end(), v.begin(), v.end());
    if (!grid_out.empty()) {
      auto os = open_or_throw(grid_out);
      setmax::write_prior_grid_csv(os, grid);
    }
    if (v.empty()) std::cout << "ok: prior-grid (" << grid.size() << " cells)\n";
  }

  if (want("bounds") || want("submodularity")) {
    const auto corpus = corpus_path ? setmax::read_corpus(*corpus_path)
                                    : setmax::generate_corpus(tiny_gen_config(gen_count, seed));
    if (want("bounds")) {
      setmax::BoundExperimentConfig bc;
      bc.seed = seed;
      const auto rows = setmax::run_bound_experiment(corpus, bc);
      auto v = setmax::verify_bound_rows(rows);
      violations.insert(violations.end(), v.begin(), v.end());
      if (!rows_out.empty()) {
        auto os = open_or_throw(rows_out);
        setmax::write_bound_rows_csv(os, rows);
      }
      if (v.empty()) std::cout << "ok: bounds (" << rows.size() << " instances certified)\n";
    }
    if (want("submodularity")) {
      auto v = setmax::verify_submodularity_probe(corpus);
      violations.insert(violations.end(), v.begin(), v.end());
      if (v.empty()) std::cout << "ok: submodularity (" << corpus.size() << " instances probed)\n";
    }
  }

  for (const auto& v : violations) {
    std::cerr << "violation[" << v.suite << "]: " << v.message << '\n';
  }
  return violations.empty() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Black-box subset maximization under per-block selection caps"};
  app.require_subcommand(1);

  // gen
  auto* gen = app.add_subcommand("gen", "Generate a synthetic word-substitution corpus (JSON)");
  setmax::GeneratorConfig gcfg;
  std::string gen_out;
  gen->add_option("--out", gen_out, "Output JSON path")->required();
  gen->add_option("-n,--instances", gcfg.instances, "Number of instances");
  gen->add_option("--seed", gcfg.seed, "Corpus seed");
  gen->add_option("--min-tokens", gcfg.min_tokens, "Minimum sentence length");
  gen->add_option("--max-tokens", gcfg.max_tokens, "Maximum sentence length");
  gen->add_option("--substitute-prob", gcfg.substitute_prob,
                  "Probability a position is modifiable");
  gen->add_option("--max-substitutes", gcfg.max_substitutes, "Max candidates per position");
  gen->add_option("--interaction-density", gcfg.interaction_density,
                  "Pairwise interaction rate per modifiable position");
  gen->add_option("--push-mean", gcfg.push_mean, "Mean logit push of a substitute");
  gen->add_option("--push-stddev", gcfg.push_stddev, "Stddev of the push");
  gen->add_option("--original-stddev", gcfg.original_weight_stddev,
                  "Stddev of original-word weights");
  gen->add_option("--interaction-stddev", gcfg.interaction_stddev,
                  "Scale of interaction magnitudes");
  gen->add_option("--margin-min", gcfg.margin_min, "Min clean-sentence logit margin");
  gen->add_option("--margin-max", gcfg.margin_max, "Max clean-sentence logit margin");
  gen->add_option("--temperature", gcfg.temperature, "Victim softmax temperature");
  gen->add_option("--targeted-fraction", gcfg.targeted_fraction,
                  "Fraction of instances with an explicit target label");

  // solve
  auto* solve = app.add_subcommand("solve", "Attack one instance of a corpus");
  std::string solve_corpus, solve_alg = "ls";
  int solve_index = 0;
  setmax::AttackConfig acfg;
  std::int64_t solve_budget = 0;
  bool solve_no_stop = false;
  solve->add_option("--corpus", solve_corpus, "Corpus JSON path")->required();
  solve->add_option("--index", solve_index, "Instance index within the corpus");
  solve->add_option("--alg", solve_alg, "Algorithm")
      ->check(CLI::IsMember({"ls", "greedy", "ga", "pso"}));
  solve->add_option("--seed", acfg.seed, "Seed for stochastic algorithms");
  solve->add_option("--epsilon", acfg.epsilon, "Minimal accepted gain for ls/greedy");
  auto* solve_budget_opt = solve->add_option("--budget", solve_budget, "Max oracle queries");
  solve->add_option("--cap-modification", acfg.modification_cap,
                    "Max fraction of positions changed for a successful attack");
  solve->add_option("--pop-size", acfg.population_size, "Population size for ga/pso");
  solve->add_option("--iters", acfg.iterations, "Iterations for ga/pso");
  solve->add_flag("--no-stop-on-success", solve_no_stop,
                  "Run to termination instead of stopping at the first success");
  solve->add_flag("--ignore-target", acfg.ignore_target,
                  "Use the untargeted objective even if the instance has a target");

  // bench
  auto* bench = app.add_subcommand("bench", "Benchmark algorithms over a corpus");
  std::string bench_corpus, bench_out;
  int bench_gen = 0;
  std::vector<std::string> bench_algs;
  setmax::BenchConfig bcfg;
  std::int64_t bench_budget = 0;
  auto* bench_corpus_opt = bench->add_option("--corpus", bench_corpus, "Corpus JSON path");
  auto* bench_gen_opt =
      bench->add_option("--gen", bench_gen, "Generate this many instances instead");
  bench_corpus_opt->excludes(bench_gen_opt);
  bench->add_option("--alg", bench_algs, "Algorithms to run (repeatable; default all)")
      ->check(CLI::IsMember({"ls", "greedy", "ga", "pso"}));
  bench->add_option("--repeats", bcfg.repeats, "Repeats for stochastic algorithms");
  bench->add_option("--seed", bcfg.seed, "Benchmark seed");
  bench->add_option("--jobs", bcfg.jobs, "Worker threads (never affects results)");
  bench->add_option("--epsilon", bcfg.epsilon, "Minimal accepted gain for ls/greedy");
  auto* bench_budget_opt =
      bench->add_option("--budget", bench_budget, "Max oracle queries per run");
  bench->add_option("--cap-modification", bcfg.modification_cap,
                    "Max fraction of positions changed for a successful attack");
  bench->add_option("--pop-size", bcfg.population_size, "Population size for ga/pso");
  bench->add_option("--iters", bcfg.iterations, "Iterations for ga/pso");
  bench->add_option("--out", bench_out, "CSV path prefix (writes _summary.csv and _runs.csv)");

  // verify
  auto* verify = app.add_subcommand("verify", "Check the certified-bound machinery");
  std::vector<std::string> verify_suites;
  std::string verify_corpus, verify_grid_out, verify_rows_out;
  int verify_gen = 6;
  std::uint64_t verify_seed = 0;
  verify->add_option("--suite", verify_suites, "prior-grid, bounds, submodularity, or all")
      ->check(CLI::IsMember({"prior-grid", "bounds", "submodularity", "all"}));
  verify->add_option("--corpus", verify_corpus,
                     "Corpus JSON for bounds/submodularity (small instances only)");
  verify->add_option("--gen", verify_gen, "Generate this many tiny instances instead");
  verify->add_option("--seed", verify_seed, "Seed for generated instances and baselines");
  verify->add_option("--grid-out", verify_grid_out, "CSV path for the prior-grid table");
  verify->add_option("--rows-out", verify_rows_out, "CSV path for the certification rows");

  CLI11_PARSE(app, argc, argv);

  try {
    if (app.got_subcommand(gen)) return run_gen(gcfg, gen_out);

    if (app.got_subcommand(solve)) {
      if (solve_budget_opt->count() > 0) acfg.budget = solve_budget;
      acfg.stop_on_success = !solve_no_stop;
      return run_solve(solve_corpus, solve_index, solve_alg, acfg);
    }

    if (app.got_subcommand(bench)) {
      if (bench_budget_opt->count() > 0) bcfg.budget = bench_budget;
      if (!bench_algs.empty()) {
        bcfg.algorithms.clear();
        for (const auto& name : bench_algs) {
          bcfg.algorithms.push_back(*setmax::algorithm_from_name(name));
        }
      }
      std::vector<setmax::GeneratedInstance> corpus;
      if (bench_corpus_opt->count() > 0) {
        corpus = setmax::read_corpus(bench_corpus);
      } else if (bench_gen_opt->count() > 0) {
        setmax::GeneratorConfig g;
        g.instances = bench_gen;
        g.seed = bcfg.seed;
        corpus = setmax::generate_corpus(g);
      } else {
        throw std::runtime_error("bench needs --corpus or --gen");
      }
      return run_bench_cmd(corpus, bcfg, bench_out);
    }

    if (app.got_subcommand(verify)) {
      if (verify_suites.empty()) verify_suites.push_back("all");
      std::optional<std::string> corpus_path;
      if (!verify_corpus.empty()) corpus_path = verify_corpus;
      return run_verify(verify_suites, corpus_path, verify_gen, verify_seed, verify_grid_out,
                        verify_rows_out);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
