#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include <json.hpp>

#include "setmax/attack.hpp"
#include "setmax/generator.hpp"

namespace setmax {

inline constexpr int kCorpusSchemaVersion = 1;

namespace detail {

// String keys survive JSON round trips exactly; doubles are emitted by the
// serializer at full precision, so numeric fields round-trip bit-for-bit.

inline nlohmann::json victim_to_json(const SurrogateVictim& victim) {
  std::vector<std::tuple<int, std::string, double>> rows;
  rows.reserve(victim.weights().size());
  for (const auto& [key, w] : victim.weights()) {
    const auto colon = key.find(':');
    rows.emplace_back(std::stoi(key.substr(0, colon)), key.substr(colon + 1), w);
  }
  std::sort(rows.begin(), rows.end());

  nlohmann::json weights = nlohmann::json::array();
  for (const auto& [pos, word, w] : rows) {
    weights.push_back(nlohmann::json::array({pos, word, w}));
  }
  nlohmann::json interactions = nlohmann::json::array();
  for (const auto& q : victim.interactions()) {
    interactions.push_back(
        nlohmann::json::array({q.pos_a, q.word_a, q.pos_b, q.word_b, q.weight}));
  }
  return nlohmann::json{{"bias", victim.bias()},
                        {"temperature", victim.temperature()},
                        {"weights", std::move(weights)},
                        {"interactions", std::move(interactions)}};
}

inline SurrogateVictim victim_from_json(const nlohmann::json& j) {
  SurrogateVictim victim;
  victim.set_bias(j.at("bias").get<double>());
  victim.set_temperature(j.at("temperature").get<double>());
  for (const auto& row : j.at("weights")) {
    if (!row.is_array() || row.size() != 3) {
      throw std::invalid_argument("victim weights: expected [pos, word, weight] rows");
    }
    victim.add_weight(row[0].get<int>(), row[1].get<std::string>(), row[2].get<double>());
  }
  for (const auto& row : j.at("interactions")) {
    if (!row.is_array() || row.size() != 5) {
      throw std::invalid_argument(
          "victim interactions: expected [pos_a, word_a, pos_b, word_b, weight] rows");
    }
    victim.add_interaction(row[0].get<int>(), row[1].get<std::string>(), row[2].get<int>(),
                           row[3].get<std::string>(), row[4].get<double>());
  }
  return victim;
}

}  // namespace detail

inline nlohmann::json instance_to_json(const GeneratedInstance& g) {
  nlohmann::json j{{"tokens", g.instance.tokens},
                   {"substitutes", g.instance.substitutes},
                   {"true_label", g.instance.true_label},
                   {"seed", g.instance.seed},
                   {"victim", detail::victim_to_json(g.victim)}};
  if (g.instance.target_label) j["target_label"] = *g.instance.target_label;
  return j;
}

inline GeneratedInstance instance_from_json(const nlohmann::json& j) {
  GeneratedInstance g;
  g.instance.tokens = j.at("tokens").get<std::vector<std::string>>();
  g.instance.substitutes = j.at("substitutes").get<std::vector<std::vector<std::string>>>();
  g.instance.true_label = j.at("true_label").get<int>();
  if (j.contains("target_label") && !j.at("target_label").is_null()) {
    g.instance.target_label = j.at("target_label").get<int>();
  }
  if (j.contains("seed")) g.instance.seed = j.at("seed").get<std::uint64_t>();
  g.victim = detail::victim_from_json(j.at("victim"));
  g.instance.validate();
  return g;
}

inline nlohmann::json corpus_to_json(const std::vector<GeneratedInstance>& corpus,
                                     std::uint64_t seed = 0,
                                     const std::optional<GeneratorConfig>& cfg = std::nullopt) {
  nlohmann::json instances = nlohmann::json::array();
  for (const auto& g : corpus) instances.push_back(instance_to_json(g));
  nlohmann::json j{{"schema", kCorpusSchemaVersion},
                   {"seed", seed},
                   {"instances", std::move(instances)}};
  if (cfg) {
    j["config"] = nlohmann::json{{"instances", cfg->instances},
                                 {"min_tokens", cfg->min_tokens},
                                 {"max_tokens", cfg->max_tokens},
                                 {"substitute_prob", cfg->substitute_prob},
                                 {"max_substitutes", cfg->max_substitutes},
                                 {"interaction_density", cfg->interaction_density},
                                 {"push_mean", cfg->push_mean},
                                 {"push_stddev", cfg->push_stddev},
                                 {"original_weight_stddev", cfg->original_weight_stddev},
                                 {"interaction_stddev", cfg->interaction_stddev},
                                 {"margin_min", cfg->margin_min},
                                 {"margin_max", cfg->margin_max},
                                 {"temperature", cfg->temperature},
                                 {"targeted_fraction", cfg->targeted_fraction},
                                 {"seed", cfg->seed}};
  }
  return j;
}

/// Accepts either a whole corpus document or a bare single-instance object.
inline std::vector<GeneratedInstance> corpus_from_json(const nlohmann::json& j) {
  if (!j.contains("instances")) {
    return {instance_from_json(j)};
  }
  if (j.contains("schema") && j.at("schema").get<int>() != kCorpusSchemaVersion) {
    throw std::invalid_argument("corpus_from_json: unsupported schema version");
  }
  std::vector<GeneratedInstance> corpus;
  for (const auto& e : j.at("instances")) corpus.push_back(instance_from_json(e));
  return corpus;
}

inline void write_corpus(const std::string& path, const std::vector<GeneratedInstance>& corpus,
                         std::uint64_t seed = 0,
                         const std::optional<GeneratorConfig>& cfg = std::nullopt) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("write_corpus: cannot open " + path);
  out << corpus_to_json(corpus, seed, cfg).dump(2) << '\n';
  if (!out) throw std::runtime_error("write_corpus: write failed for " + path);
}

inline std::vector<GeneratedInstance> read_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("read_corpus: cannot open " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error("read_corpus: " + path + ": " + e.what());
  }
  return corpus_from_json(j);
}

}  // namespace setmax
