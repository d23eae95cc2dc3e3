#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "setmax/local_search.hpp"
#include "setmax/oracle.hpp"
#include "setmax/population.hpp"

namespace setmax {

/// A sentence with per-position substitute candidates. Substitutes never
/// repeat the original word of their position; a position with no
/// substitutes is unmodifiable.
struct AttackInstance {
  std::vector<std::string> tokens;
  std::vector<std::vector<std::string>> substitutes;
  int true_label = 0;
  std::optional<int> target_label;
  std::uint64_t seed = 0;

  void validate() const {
    if (tokens.empty()) throw std::invalid_argument("AttackInstance: no tokens");
    if (substitutes.size() != tokens.size()) {
      throw std::invalid_argument("AttackInstance: one substitute list per token required");
    }
    if (true_label != 0 && true_label != 1) {
      throw std::invalid_argument("AttackInstance: true_label must be 0 or 1");
    }
    if (target_label && *target_label != 0 && *target_label != 1) {
      throw std::invalid_argument("AttackInstance: target_label must be 0 or 1");
    }
  }
};

/// Differentiable-free stand-in for a binary text classifier: a logistic
/// model over per-(position, word) scores plus sparse pairwise interaction
/// terms. P(class 1 | tokens) = sigmoid(score / temperature).
class SurrogateVictim {
 public:
  struct Interaction {
    int pos_a;
    std::string word_a;
    int pos_b;
    std::string word_b;
    double weight;
  };

  SurrogateVictim() = default;

  void set_bias(double b) { bias_ = b; }
  double bias() const { return bias_; }

  void set_temperature(double t) {
    if (!(t > 0.0)) throw std::invalid_argument("SurrogateVictim: temperature must be positive");
    temperature_ = t;
  }
  double temperature() const { return temperature_; }

  void add_weight(int pos, std::string word, double w) {
    weights_[key(pos, word)] = w;
  }

  void add_interaction(int pos_a, std::string word_a, int pos_b, std::string word_b,
                       double w) {
    interactions_.push_back(Interaction{pos_a, std::move(word_a), pos_b,
                                        std::move(word_b), w});
  }

  const std::unordered_map<std::string, double>& weights() const { return weights_; }
  const std::vector<Interaction>& interactions() const { return interactions_; }

  /// Score of `word` at `pos`; unknown pairs score 0.
  double weight(int pos, const std::string& word) const {
    auto it = weights_.find(key(pos, word));
    return it == weights_.end() ? 0.0 : it->second;
  }
  bool modular_logit() const { return interactions_.empty(); }

  double logit(const std::vector<std::string>& tokens) const {
    double total = bias_;
    for (std::size_t i = 0; i < tokens.size(); ++i) {
      auto it = weights_.find(key(static_cast<int>(i), tokens[i]));
      if (it != weights_.end()) total += it->second;
    }
    for (const auto& q : interactions_) {
      if (q.pos_a < static_cast<int>(tokens.size()) &&
          q.pos_b < static_cast<int>(tokens.size()) && tokens[q.pos_a] == q.word_a &&
          tokens[q.pos_b] == q.word_b) {
        total += q.weight;
      }
    }
    return total;
  }

  /// P(class 1 | tokens); P(class 0) is its complement.
  double probability_one(const std::vector<std::string>& tokens) const {
    return 1.0 / (1.0 + std::exp(-logit(tokens) / temperature_));
  }

  double probability(int label, const std::vector<std::string>& tokens) const {
    const double p1 = probability_one(tokens);
    return label == 1 ? p1 : 1.0 - p1;
  }

  /// Argmax label; the knife-edge P = 0.5 resolves to class 0.
  int predict(const std::vector<std::string>& tokens) const {
    return probability_one(tokens) > 0.5 ? 1 : 0;
  }

 private:
  static std::string key(int pos, const std::string& word) {
    return std::to_string(pos) + ':' + word;
  }

  std::unordered_map<std::string, double> weights_;
  std::vector<Interaction> interactions_;
  double bias_ = 0.0;
  double temperature_ = 1.0;
};

/// Ground-set encoding of an instance: every (position, substitute) pair is
/// one element; each modifiable position forms a block with capacity 1, so
/// feasible subsets pick at most one substitute per position and block
/// disjointness is inherent (ids are position-major).
struct GroundMap {
  PartitionConstraint constraint;
  /// element id -> (position, substitute index)
  std::vector<std::pair<int, int>> element_origin;
};

inline GroundMap build_ground_set(const AttackInstance& inst) {
  inst.validate();
  std::vector<std::vector<int>> blocks;
  std::vector<std::pair<int, int>> origin;
  int next = 0;
  for (std::size_t pos = 0; pos < inst.substitutes.size(); ++pos) {
    const auto& subs = inst.substitutes[pos];
    if (subs.empty()) continue;
    std::vector<int> block;
    for (std::size_t j = 0; j < subs.size(); ++j) {
      block.push_back(next++);
      origin.emplace_back(static_cast<int>(pos), static_cast<int>(j));
    }
    blocks.push_back(std::move(block));
  }
  if (blocks.empty()) {
    throw std::invalid_argument("build_ground_set: no substitutes anywhere (degenerate instance)");
  }
  return GroundMap{PartitionConstraint::unit(std::move(blocks)), std::move(origin)};
}

/// Applies the selected substitutions to the original sentence.
inline std::vector<std::string> decode(const AttackInstance& inst, const GroundMap& map,
                                       const Subset& s) {
  std::vector<std::string> tokens = inst.tokens;
  for (int e : s) {
    const auto [pos, j] = map.element_origin.at(e);
    tokens[pos] = inst.substitutes[pos][j];
  }
  return tokens;
}

/// Fraction of positions changed by `s` (each element changes exactly one
/// position; substitutes never equal the original word).
inline double modification_rate(const AttackInstance& inst, const Subset& s) {
  return static_cast<double>(s.size()) / static_cast<double>(inst.tokens.size());
}

/// A set objective over substitution subsets plus its success predicate.
/// Values are always in [0, 1]. The predicate enforces the modification-rate
/// cap; the cap never constrains the search lattice itself.
struct Objective {
  std::function<double(const Subset&)> value;
  std::function<bool(const Subset&, double)> success;
};

/// Untargeted attack objective: 1 - P(true label | decoded sentence).
/// Success = the victim's argmax label moved off the true label (for a
/// binary victim, value > 0.5) within the modification cap.
inline Objective untargeted_objective(std::shared_ptr<const AttackInstance> inst,
                                      std::shared_ptr<const SurrogateVictim> victim,
                                      std::shared_ptr<const GroundMap> map,
                                      double cap = 0.25) {
  Objective obj;
  obj.value = [inst, victim, map](const Subset& s) {
    return 1.0 - victim->probability(inst->true_label, decode(*inst, *map, s));
  };
  obj.success = [inst, cap](const Subset& s, double value) {
    return value > 0.5 && modification_rate(*inst, s) <= cap;
  };
  return obj;
}

/// Targeted attack objective: P(target | decoded sentence); the target must
/// differ from the true label. Success = the victim prefers the target
/// (value > 0.5) within the modification cap.
inline Objective targeted_objective(std::shared_ptr<const AttackInstance> inst,
                                    std::shared_ptr<const SurrogateVictim> victim,
                                    std::shared_ptr<const GroundMap> map, int target,
                                    double cap = 0.25) {
  if (target == inst->true_label) {
    throw std::invalid_argument("targeted_objective: target equals the true label");
  }
  if (target != 0 && target != 1) {
    throw std::invalid_argument("targeted_objective: target must be 0 or 1");
  }
  Objective obj;
  obj.value = [inst, victim, map, target](const Subset& s) {
    return victim->probability(target, decode(*inst, *map, s));
  };
  obj.success = [inst, cap](const Subset& s, double value) {
    return value > 0.5 && modification_rate(*inst, s) <= cap;
  };
  return obj;
}

/// Score-suppression objective for sequence scorers: value = 1 - score.
/// The scorer must emit values in [0, 1]; success = the score reached 0
/// within the modification cap.
inline Objective score_objective(
    std::shared_ptr<const AttackInstance> inst, std::shared_ptr<const GroundMap> map,
    std::function<double(const std::vector<std::string>&)> scorer, double cap = 0.25) {
  if (!scorer) throw std::invalid_argument("score_objective: null scorer");
  Objective obj;
  obj.value = [inst, map, scorer](const Subset& s) {
    const double score = scorer(decode(*inst, *map, s));
    if (!(score >= 0.0 && score <= 1.0)) {
      throw std::domain_error("score_objective: scorer left [0, 1]");
    }
    return 1.0 - score;
  };
  obj.success = [inst, cap](const Subset& s, double value) {
    return value >= 1.0 && modification_rate(*inst, s) <= cap;
  };
  return obj;
}

enum class Algorithm { kLocalSearch, kGreedy, kGa, kPso };

inline const char* algorithm_name(Algorithm a) {
  switch (a) {
    case Algorithm::kLocalSearch:
      return "ls";
    case Algorithm::kGreedy:
      return "greedy";
    case Algorithm::kGa:
      return "ga";
    case Algorithm::kPso:
      return "pso";
  }
  return "?";
}

inline std::optional<Algorithm> algorithm_from_name(const std::string& name) {
  if (name == "ls") return Algorithm::kLocalSearch;
  if (name == "greedy") return Algorithm::kGreedy;
  if (name == "ga") return Algorithm::kGa;
  if (name == "pso") return Algorithm::kPso;
  return std::nullopt;
}

struct AttackConfig {
  Algorithm algorithm = Algorithm::kLocalSearch;
  /// Runs stop at the first successful candidate by default, mirroring the
  /// evaluation protocol the baselines come from.
  bool stop_on_success = true;
  double epsilon = 0.0;
  std::optional<std::int64_t> budget;
  double modification_cap = 0.25;
  /// Used by GA/PSO only.
  int population_size = 60;
  int iterations = 20;
  std::uint64_t seed = 0;
  /// Force the untargeted objective even when the instance carries a target.
  bool ignore_target = false;
};

struct AttackOutcome {
  bool success = false;
  std::vector<std::string> adversarial_tokens;
  Subset solution;
  double value = 0.0;
  double modification_rate = 0.0;
  std::int64_t queries = 0;
  Termination termination = Termination::kLocalOptimum;
  Algorithm algorithm = Algorithm::kLocalSearch;
};

/// End-to-end single-instance attack: builds the substitution lattice and
/// objective, runs the chosen search, and grades the final solution. The
/// modification cap is graded on the final solution too: crossing the cap
/// with a flipped label still counts as a failed attack.
inline AttackOutcome run_attack(const AttackInstance& instance,
                                const SurrogateVictim& victim,
                                const AttackConfig& cfg = {}) {
  auto inst = std::make_shared<const AttackInstance>(instance);
  auto vict = std::make_shared<const SurrogateVictim>(victim);
  auto map = std::make_shared<const GroundMap>(build_ground_set(*inst));

  Objective obj = (inst->target_label && !cfg.ignore_target)
                      ? targeted_objective(inst, vict, map, *inst->target_label,
                                           cfg.modification_cap)
                      : untargeted_objective(inst, vict, map, cfg.modification_cap);

  CountedOracle oracle(obj.value, map->constraint);
  oracle.set_success_predicate(obj.success);

  SearchResult result;
  switch (cfg.algorithm) {
    case Algorithm::kLocalSearch:
    case Algorithm::kGreedy: {
      SearchConfig sc;
      sc.epsilon = cfg.epsilon;
      sc.budget = cfg.budget;
      sc.stop_on_success = cfg.stop_on_success;
      result = cfg.algorithm == Algorithm::kLocalSearch ? local_search(oracle, sc)
                                                        : greedy(oracle, sc);
      break;
    }
    default: {
      PopulationConfig pc;
      pc.population_size = cfg.population_size;
      pc.max_iterations = cfg.iterations;
      pc.seed = cfg.seed;
      pc.stop_on_success = cfg.stop_on_success;
      pc.budget = cfg.budget;
      result = cfg.algorithm == Algorithm::kGa ? ga_search(oracle, pc)
                                               : pso_search(oracle, pc);
      break;
    }
  }

  AttackOutcome out;
  out.algorithm = cfg.algorithm;
  out.solution = result.solution;
  out.value = result.value;
  out.queries = result.queries;
  out.termination = result.termination;
  out.modification_rate = modification_rate(*inst, result.solution);
  out.success = obj.success(result.solution, result.value);
  out.adversarial_tokens = decode(*inst, *map, result.solution);
  return out;
}

}  // namespace setmax
