#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>
#include <string>
#include <vector>

#include "setmax/bench.hpp"
#include "setmax/corpus_io.hpp"
#include "setmax/generator.hpp"

namespace setmax {
namespace {

GeneratorConfig tiny_config() {
  GeneratorConfig cfg;
  cfg.instances = 4;
  cfg.min_tokens = 4;
  cfg.max_tokens = 6;
  cfg.substitute_prob = 0.6;
  cfg.max_substitutes = 2;
  cfg.seed = 5;
  return cfg;
}

TEST(FormatDouble, ShortestRoundTrip) {
  for (double v : {0.0, 1.0, 0.1, 0.25, -2.5e17, 1e-300, 1.0 / 3.0, 123456.789}) {
    EXPECT_EQ(std::stod(format_double(v)), v);
  }
  EXPECT_EQ(format_double(0.25), "0.25");
  EXPECT_EQ(format_double(-1.5), "-1.5");
}

TEST(MeanStd, SampleStatistics) {
  const MeanStd m = mean_std({1.0, 2.0, 3.0, 4.0});
  EXPECT_DOUBLE_EQ(m.mean, 2.5);
  EXPECT_DOUBLE_EQ(m.std, std::sqrt(5.0 / 3.0));
  EXPECT_EQ(m.count, 4);

  const MeanStd one = mean_std({7.0});
  EXPECT_DOUBLE_EQ(one.mean, 7.0);
  EXPECT_DOUBLE_EQ(one.std, 0.0);

  const MeanStd none = mean_std({});
  EXPECT_EQ(none.count, 0);
  EXPECT_DOUBLE_EQ(none.mean, 0.0);
}

TEST(Generator, DeterministicAndCalibrated) {
  const auto cfg = tiny_config();
  const auto a = generate_corpus(cfg);
  const auto b = generate_corpus(cfg);
  ASSERT_EQ(a.size(), 4u);
  EXPECT_EQ(corpus_to_json(a, cfg.seed).dump(), corpus_to_json(b, cfg.seed).dump());

  for (const GeneratedInstance& g : a) {
    g.instance.validate();
    const int n = static_cast<int>(g.instance.tokens.size());
    EXPECT_GE(n, cfg.min_tokens);
    EXPECT_LE(n, cfg.max_tokens);
    // Calibration: the clean sentence is classified as its true label.
    EXPECT_EQ(g.victim.predict(g.instance.tokens), g.instance.true_label);
    // Something is always modifiable.
    EXPECT_GT(build_ground_set(g.instance).constraint.ground_size(), 0);
  }
}

TEST(Generator, SeedSelectsTheCorpus) {
  GeneratorConfig cfg = tiny_config();
  const auto a = generate_corpus(cfg);
  cfg.seed = 6;
  const auto b = generate_corpus(cfg);
  EXPECT_NE(corpus_to_json(a).dump(), corpus_to_json(b).dump());
}

TEST(Generator, TargetedFractionAndValidation) {
  GeneratorConfig cfg = tiny_config();
  cfg.targeted_fraction = 1.0;
  for (const GeneratedInstance& g : generate_corpus(cfg)) {
    ASSERT_TRUE(g.instance.target_label.has_value());
    EXPECT_EQ(*g.instance.target_label, 1 - g.instance.true_label);
  }
  cfg = tiny_config();
  cfg.instances = 0;
  EXPECT_THROW(generate_corpus(cfg), std::invalid_argument);
  cfg = tiny_config();
  cfg.margin_min = 0.0;
  EXPECT_THROW(generate_corpus(cfg), std::invalid_argument);
  cfg = tiny_config();
  cfg.min_tokens = 8;  // above max_tokens
  EXPECT_THROW(generate_corpus(cfg), std::invalid_argument);
}

TEST(CorpusIo, JsonRoundTripIsByteStable) {
  GeneratorConfig cfg = tiny_config();
  cfg.targeted_fraction = 0.5;  // exercise the optional target field
  const auto corpus = generate_corpus(cfg);
  const auto doc = corpus_to_json(corpus, cfg.seed, cfg);
  const auto reread = corpus_from_json(doc);
  ASSERT_EQ(reread.size(), corpus.size());
  EXPECT_EQ(corpus_to_json(reread, cfg.seed, cfg).dump(), doc.dump());
  EXPECT_EQ(doc.at("schema").get<int>(), kCorpusSchemaVersion);
  EXPECT_EQ(doc.at("config").at("seed").get<std::uint64_t>(), cfg.seed);
}

TEST(CorpusIo, AcceptsBareInstancesAndRejectsUnknownSchema) {
  const auto corpus = generate_corpus(tiny_config());
  const auto single = corpus_from_json(instance_to_json(corpus[0]));
  ASSERT_EQ(single.size(), 1u);
  EXPECT_EQ(single[0].instance.tokens, corpus[0].instance.tokens);

  nlohmann::json bad{{"schema", 99}, {"instances", nlohmann::json::array()}};
  EXPECT_THROW(corpus_from_json(bad), std::invalid_argument);
}

TEST(CorpusIo, FileRoundTrip) {
  const auto corpus = generate_corpus(tiny_config());
  const std::string path = testing::TempDir() + "setmax_corpus_io_test.json";
  write_corpus(path, corpus, 5);
  const auto reread = read_corpus(path);
  ASSERT_EQ(reread.size(), corpus.size());
  EXPECT_EQ(corpus_to_json(reread).dump(), corpus_to_json(corpus).dump());
  std::remove(path.c_str());

  EXPECT_THROW(read_corpus(testing::TempDir() + "setmax_missing.json"), std::runtime_error);
}

TEST(Bench, ReportIsIdenticalAcrossJobCounts) {
  const auto corpus = generate_corpus(tiny_config());
  BenchConfig cfg;
  cfg.repeats = 2;
  cfg.seed = 12;
  cfg.population_size = 20;
  cfg.iterations = 5;

  cfg.jobs = 1;
  const BenchReport serial = run_bench(corpus, cfg);
  cfg.jobs = 3;
  const BenchReport parallel = run_bench(corpus, cfg);

  std::ostringstream s1, s2, t1, t2;
  write_tasks_csv(s1, serial);
  write_tasks_csv(s2, parallel);
  write_summary_csv(t1, serial);
  write_summary_csv(t2, parallel);
  EXPECT_EQ(s1.str(), s2.str());
  EXPECT_EQ(t1.str(), t2.str());
  EXPECT_EQ(serial.config_hash, parallel.config_hash);
}

TEST(Bench, TaskLayoutAndSeeds) {
  const auto corpus = generate_corpus(tiny_config());
  BenchConfig cfg;
  cfg.repeats = 3;
  cfg.seed = 2;
  cfg.population_size = 10;
  cfg.iterations = 2;
  const BenchReport report = run_bench(corpus, cfg);

  // Deterministic algorithms run once; stochastic ones `repeats` times.
  ASSERT_EQ(report.tasks.size(), corpus.size() * (1 + 1 + 3 + 3));
  int at = 0;
  for (int i = 0; i < static_cast<int>(corpus.size()); ++i) {
    for (Algorithm a : cfg.algorithms) {
      const int reps = is_deterministic(a) ? 1 : cfg.repeats;
      for (int r = 0; r < reps; ++r, ++at) {
        const TaskResult& t = report.tasks[at];
        ASSERT_EQ(t.instance, i);
        ASSERT_EQ(t.algorithm, a);
        ASSERT_EQ(t.repeat, r);
        ASSERT_EQ(t.task_seed,
                  derive_seed(cfg.seed, static_cast<std::uint64_t>(i),
                              static_cast<std::uint64_t>(a), static_cast<std::uint64_t>(r)));
      }
    }
  }
}

TEST(Bench, SummariesMatchAnIndependentReduction) {
  const auto corpus = generate_corpus(tiny_config());
  BenchConfig cfg;
  cfg.repeats = 2;
  cfg.population_size = 15;
  cfg.iterations = 3;
  const BenchReport report = run_bench(corpus, cfg);

  for (const AlgorithmSummary& s : report.summaries) {
    std::vector<double> rates, queries;
    for (int r = 0; r < s.repeats; ++r) {
      int successes = 0, count = 0;
      double qsum = 0.0;
      for (const TaskResult& t : report.tasks) {
        if (t.algorithm != s.algorithm || t.repeat != r) continue;
        ++count;
        qsum += static_cast<double>(t.queries);
        successes += t.success ? 1 : 0;
      }
      ASSERT_EQ(count, static_cast<int>(corpus.size()));
      rates.push_back(static_cast<double>(successes) / count);
      queries.push_back(qsum / count);
    }
    const MeanStd rate = mean_std(rates);
    const MeanStd qs = mean_std(queries);
    ASSERT_DOUBLE_EQ(s.success_rate.mean, rate.mean);
    ASSERT_DOUBLE_EQ(s.success_rate.std, rate.std);
    ASSERT_DOUBLE_EQ(s.queries.mean, qs.mean);
    ASSERT_DOUBLE_EQ(s.queries.std, qs.std);
  }
}

TEST(Bench, ConfigHashTracksTheConfiguration) {
  const auto corpus = generate_corpus(tiny_config());
  BenchConfig cfg;
  cfg.repeats = 1;
  cfg.population_size = 10;
  cfg.iterations = 2;
  const auto base = run_bench(corpus, cfg).config_hash;
  BenchConfig other = cfg;
  other.epsilon = 0.125;
  EXPECT_NE(run_bench(corpus, other).config_hash, base);
  EXPECT_EQ(run_bench(corpus, cfg).config_hash, base);
}

TEST(Bench, RejectsBadInput) {
  const auto corpus = generate_corpus(tiny_config());
  EXPECT_THROW(run_bench({}, BenchConfig{}), std::invalid_argument);
  BenchConfig cfg;
  cfg.repeats = 0;
  EXPECT_THROW(run_bench(corpus, cfg), std::invalid_argument);
  cfg = {};
  cfg.jobs = 0;
  EXPECT_THROW(run_bench(corpus, cfg), std::invalid_argument);
  cfg = {};
  cfg.algorithms.clear();
  EXPECT_THROW(run_bench(corpus, cfg), std::invalid_argument);
}

TEST(Bench, RenderTableSmoke) {
  const auto corpus = generate_corpus(tiny_config());
  BenchConfig cfg;
  cfg.repeats = 1;
  cfg.population_size = 10;
  cfg.iterations = 2;
  const std::string table = render_table(run_bench(corpus, cfg));
  EXPECT_NE(table.find("alg"), std::string::npos);
  EXPECT_NE(table.find("ls"), std::string::npos);
  EXPECT_NE(table.find("pso"), std::string::npos);
  EXPECT_EQ(std::count(table.begin(), table.end(), '\n'), 5);  // header + 4 rows
}

TEST(BoundExperiment, RowsAreInternallyConsistent) {
  const auto corpus = generate_corpus(tiny_config());
  const std::vector<BoundRow> rows = run_bound_experiment(corpus);
  ASSERT_EQ(rows.size(), corpus.size());
  for (const BoundRow& r : rows) {
    EXPECT_TRUE(r.holds) << "instance " << r.instance;
    EXPECT_LE(r.lower_bound, r.optimum + 1e-12);
    EXPECT_GE(r.ls_value, r.lower_bound - 1e-12);
    EXPECT_LE(r.ls_value, r.optimum + 1e-12);
    EXPECT_LE(r.pso_value, r.optimum + 1e-12);
  }
  EXPECT_TRUE(verify_bound_rows(rows).empty());

  std::ostringstream os;
  write_bound_rows_csv(os, rows);
  EXPECT_NE(os.str().find("instance,optimum,lower_bound"), std::string::npos);
}

TEST(BoundExperiment, RefusesOversizedGroundSets) {
  const auto corpus = generate_corpus(tiny_config());
  BoundExperimentConfig cfg;
  cfg.max_ground = 1;
  EXPECT_THROW(run_bound_experiment(corpus, cfg), SizeLimitError);
}

TEST(VerifySuites, PriorGridCleanAndTamperDetected) {
  EXPECT_TRUE(verify_prior_grid(bound_comparison_grid()).empty());

  const std::vector<GridEntry> tampered = {GridEntry{0.5, 3, 0.1, -0.1}};
  const auto violations = verify_prior_grid(tampered);
  ASSERT_EQ(violations.size(), 3u);  // bad margin + both missing d=1 positives
  for (const Violation& v : violations) EXPECT_EQ(v.suite, "prior-grid");
}

TEST(VerifySuites, BoundRowTamperDetected) {
  BoundRow row;
  row.optimum = 0.5;
  row.lower_bound = 0.7;  // above the optimum
  row.ls_value = 0.4;
  row.holds = false;
  const auto violations = verify_bound_rows({row});
  ASSERT_GE(violations.size(), 2u);
  for (const Violation& v : violations) EXPECT_EQ(v.suite, "bounds");
}

TEST(VerifySuites, SubmodularityProbeAgreesWithItself) {
  EXPECT_TRUE(verify_submodularity_probe(generate_corpus(tiny_config())).empty());
}

TEST(VerifySuites, SubmodularityProbeSizeGuard) {
  GeneratorConfig cfg = tiny_config();
  EXPECT_THROW(verify_submodularity_probe(generate_corpus(cfg), 1), SizeLimitError);
}

}  // namespace
}  // namespace setmax
