#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "setmax/attack.hpp"
#include "setmax/rng.hpp"

namespace setmax {

/// Knobs for the synthetic attack corpus. Sign conventions: a substitute's
/// "push" is the logit shift toward flipping the true label, drawn from
/// N(push_mean, push_stddev); negative draws are decoys that individually
/// strengthen the victim. Interactions fire only when both of their
/// substitutes are selected and always push toward the flip, which is what
/// makes coordinated multi-word edits pay off.
struct GeneratorConfig {
  int instances = 10;
  int min_tokens = 10;
  int max_tokens = 40;
  /// Probability that a position is modifiable at all.
  double substitute_prob = 0.8;
  /// Modifiable positions carry 1..max_substitutes candidates.
  int max_substitutes = 3;
  /// Per modifiable position, probability of spawning one pairwise
  /// interaction with a random substitute of another modifiable position.
  double interaction_density = 0.3;
  double push_mean = 1.0;
  double push_stddev = 0.7;
  /// Original words get inert flavor weights from N(0, this).
  double original_weight_stddev = 0.5;
  /// Interaction magnitudes are |N(0, this)|.
  double interaction_stddev = 2.0;
  /// The clean sentence starts at logit margin U[margin_min, margin_max] on
  /// the true side.
  double margin_min = 1.0;
  double margin_max = 2.5;
  double temperature = 1.0;
  /// Fraction of instances that carry an explicit target label (the
  /// opposite class; binary victims make this equivalent to untargeted).
  double targeted_fraction = 0.0;
  /// Sanity resamples if a victim comes out misclassifying its own clean
  /// sentence. Calibration is exact here, so this is a guard rail.
  int calibration_retries = 5;
  std::uint64_t seed = 1;

  void validate() const {
    if (instances < 1) throw std::invalid_argument("GeneratorConfig: instances < 1");
    if (min_tokens < 1 || max_tokens < min_tokens) {
      throw std::invalid_argument("GeneratorConfig: bad token range");
    }
    if (substitute_prob < 0.0 || substitute_prob > 1.0) {
      throw std::invalid_argument("GeneratorConfig: substitute_prob outside [0, 1]");
    }
    if (max_substitutes < 1) throw std::invalid_argument("GeneratorConfig: max_substitutes < 1");
    if (interaction_density < 0.0 || interaction_density > 1.0) {
      throw std::invalid_argument("GeneratorConfig: interaction_density outside [0, 1]");
    }
    if (push_stddev < 0.0 || original_weight_stddev < 0.0 || interaction_stddev < 0.0) {
      throw std::invalid_argument("GeneratorConfig: negative stddev");
    }
    if (margin_min <= 0.0 || margin_max < margin_min) {
      throw std::invalid_argument("GeneratorConfig: bad margin range");
    }
    if (!(temperature > 0.0)) throw std::invalid_argument("GeneratorConfig: temperature <= 0");
    if (targeted_fraction < 0.0 || targeted_fraction > 1.0) {
      throw std::invalid_argument("GeneratorConfig: targeted_fraction outside [0, 1]");
    }
    if (calibration_retries < 0) {
      throw std::invalid_argument("GeneratorConfig: calibration_retries < 0");
    }
  }
};

struct GeneratedInstance {
  AttackInstance instance;
  SurrogateVictim victim;
};

namespace detail {

inline GeneratedInstance generate_one(const GeneratorConfig& cfg, std::uint64_t instance_seed) {
  SplitRng rng(instance_seed);

  GeneratedInstance out;
  AttackInstance& inst = out.instance;
  inst.seed = instance_seed;

  const int n = cfg.min_tokens + rng.next_int(cfg.max_tokens - cfg.min_tokens + 1);
  inst.true_label = rng.next_bool() ? 1 : 0;
  // Flipping class 1 means driving the logit down; flipping class 0 means
  // driving it up. `sign` maps a push onto the raw logit axis.
  const double sign = inst.true_label == 1 ? 1.0 : -1.0;

  inst.tokens.reserve(n);
  inst.substitutes.resize(n);
  for (int p = 0; p < n; ++p) inst.tokens.push_back("w" + std::to_string(p));

  std::vector<int> modifiable;
  for (int p = 0; p < n; ++p) {
    if (rng.next_unit() < cfg.substitute_prob) {
      const int count = 1 + rng.next_int(cfg.max_substitutes);
      for (int j = 0; j < count; ++j) {
        inst.substitutes[p].push_back("w" + std::to_string(p) + "x" + std::to_string(j));
      }
      modifiable.push_back(p);
    }
  }
  if (modifiable.empty()) {
    // Degenerate draw: force one modifiable position so the instance has a
    // non-empty search space.
    inst.substitutes[0].push_back("w0x0");
    modifiable.push_back(0);
  }

  for (int attempt = 0; attempt <= cfg.calibration_retries; ++attempt) {
    SurrogateVictim victim;
    victim.set_temperature(cfg.temperature);

    double original_sum = 0.0;
    for (int p = 0; p < n; ++p) {
      const double w = rng.next_normal(0.0, cfg.original_weight_stddev);
      victim.add_weight(p, inst.tokens[p], w);
      original_sum += w;
    }
    for (int p : modifiable) {
      const double base = victim.weight(p, inst.tokens[p]);
      for (const std::string& sub : inst.substitutes[p]) {
        const double push = rng.next_normal(cfg.push_mean, cfg.push_stddev);
        victim.add_weight(p, sub, base - sign * push);
      }
    }
    if (modifiable.size() >= 2) {
      for (int p : modifiable) {
        if (rng.next_unit() >= cfg.interaction_density) continue;
        int q = p;
        while (q == p) {
          q = modifiable[static_cast<std::size_t>(rng.next_int(static_cast<int>(modifiable.size())))];
        }
        const std::string& sub_p = inst.substitutes[p][static_cast<std::size_t>(
            rng.next_int(static_cast<int>(inst.substitutes[p].size())))];
        const std::string& sub_q = inst.substitutes[q][static_cast<std::size_t>(
            rng.next_int(static_cast<int>(inst.substitutes[q].size())))];
        const double mag = std::abs(rng.next_normal(0.0, cfg.interaction_stddev));
        victim.add_interaction(p, sub_p, q, sub_q, -sign * mag);
      }
    }

    const double margin = rng.next_uniform(cfg.margin_min, cfg.margin_max);
    victim.set_bias(sign * margin - original_sum);

    if (victim.predict(inst.tokens) == inst.true_label) {
      out.victim = std::move(victim);
      if (rng.next_unit() < cfg.targeted_fraction) {
        inst.target_label = 1 - inst.true_label;
      }
      return out;
    }
  }
  throw std::runtime_error("generate_one: victim failed calibration after retries");
}

}  // namespace detail

/// Deterministic synthetic corpus: instance i is a pure function of
/// derive_seed(cfg.seed, i), independent of the other instances.
inline std::vector<GeneratedInstance> generate_corpus(const GeneratorConfig& cfg) {
  cfg.validate();
  std::vector<GeneratedInstance> corpus;
  corpus.reserve(static_cast<std::size_t>(cfg.instances));
  for (int i = 0; i < cfg.instances; ++i) {
    corpus.push_back(detail::generate_one(cfg, derive_seed(cfg.seed, static_cast<std::uint64_t>(i))));
  }
  return corpus;
}

}  // namespace setmax
