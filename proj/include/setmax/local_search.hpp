#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "setmax/oracle.hpp"

namespace setmax {

enum class MoveKind { kInsert, kDelete, kExchange, kComplementSwap };

enum class Termination {
  kLocalOptimum,  // no move improves by more than epsilon
  kSuccess,       // stop_on_success fired
  kBudget,        // query budget exhausted
  kNoMoves,       // every neighborhood was empty (degenerate instance)
  kIterations,    // population algorithms: iteration limit reached
};

inline const char* termination_name(Termination t) {
  switch (t) {
    case Termination::kLocalOptimum:
      return "local_optimum";
    case Termination::kSuccess:
      return "success";
    case Termination::kBudget:
      return "budget";
    case Termination::kNoMoves:
      return "no_moves";
    case Termination::kIterations:
      return "iterations";
  }
  return "?";
}

enum class TieBreak {
  kLowestId,    // among equal-gain moves prefer the smallest element ids
  kFirstFound,  // keep the first equal-gain move in scan order
};

/// One accepted move. `removed`/`inserted` are -1 when the move kind does not
/// use them (insert has no removed element, delete no inserted one; the
/// complement swap uses neither).
struct Step {
  MoveKind kind;
  int removed = -1;
  int inserted = -1;
  double value_after = 0.0;
};

struct SearchConfig {
  /// Minimal accepted improvement; a move is taken only when its gain is
  /// strictly greater than epsilon.
  double epsilon = 0.0;
  /// Run-local query allowance (independent of any budget on the oracle).
  std::optional<std::int64_t> budget;
  /// Abort as soon as an evaluated subset satisfies the oracle's success
  /// predicate, even mid-scan.
  bool stop_on_success = false;
  TieBreak tie_break = TieBreak::kLowestId;
  /// Two gains within this absolute distance count as tied.
  double tie_tolerance = 0.0;
  /// Scan exchange partners from the removed element's own block before the
  /// rest of the ground set.
  bool same_block_first = false;
};

struct SearchResult {
  Subset solution;
  double value = 0.0;
  /// Oracle queries spent by this run.
  std::int64_t queries = 0;
  std::vector<Step> steps;
  Termination termination = Termination::kLocalOptimum;
  /// The set the loop converged to before the optional complement swap; set
  /// when termination == kLocalOptimum. This is the set the approximation
  /// guarantees quantify over.
  std::optional<Subset> local_optimum;
};

struct ExchangeMove {
  int out = -1;
  int in = -1;
  double gain = 0.0;
};

namespace detail {

// Internal control-flow signals for mid-scan termination.
struct SuccessSignal {
  Subset subset;
  double value;
};
struct BudgetSignal {};

class Run {
 public:
  Run(CountedOracle& oracle, const SearchConfig& cfg)
      : oracle_(oracle), cfg_(cfg), start_(oracle.query_count()) {}

  double eval(const Subset& s) {
    if (cfg_.budget && used() >= *cfg_.budget) throw BudgetSignal{};
    double v;
    try {
      v = oracle_.evaluate(s);
    } catch (const BudgetExhaustedError&) {
      throw BudgetSignal{};
    }
    if (oracle_.is_feasible(s) && (!best_ || v > best_->second)) {
      best_ = std::make_pair(s, v);
    }
    if (cfg_.stop_on_success && oracle_.is_success(s, v)) throw SuccessSignal{s, v};
    return v;
  }

  std::int64_t used() const { return oracle_.query_count() - start_; }
  const std::optional<std::pair<Subset, double>>& best() const { return best_; }
  const PartitionConstraint& constraint() const { return oracle_.constraint(); }

 private:
  CountedOracle& oracle_;
  const SearchConfig& cfg_;
  std::int64_t start_;
  std::optional<std::pair<Subset, double>> best_;
};

struct Candidate {
  MoveKind kind;
  int removed;
  int inserted;
  double value;
  bool valid = false;
};

// Keeps `best` per the configured tie handling. Candidates arrive in scan
// order; kLowestId additionally orders ties by (removed, inserted).
inline void consider(Candidate& best, const Candidate& next, const SearchConfig& cfg) {
  if (!next.valid) return;
  if (!best.valid) {
    best = next;
    return;
  }
  const double diff = next.value - best.value;
  if (diff > cfg.tie_tolerance) {
    best = next;
    return;
  }
  if (diff >= -cfg.tie_tolerance && cfg.tie_break == TieBreak::kLowestId) {
    if (std::pair<int, int>(next.removed, next.inserted) <
        std::pair<int, int>(best.removed, best.inserted)) {
      best = next;
    }
  }
}

// Best feasible insertion into `s`. `any` reports whether the neighborhood
// was non-empty.
inline Candidate scan_insertions(Run& run, const Subset& s, double /*f_s*/,
                                 const SearchConfig& cfg, bool& any) {
  const auto& c = run.constraint();
  Candidate best{};
  for (int e = 0; e < c.ground_size(); ++e) {
    if (s.contains(e)) continue;
    Subset candidate = s.with(e);
    if (!c.is_feasible(candidate)) continue;
    any = true;
    Candidate next{MoveKind::kInsert, -1, e, run.eval(candidate), true};
    consider(best, next, cfg);
  }
  return best;
}

inline Candidate scan_deletions(Run& run, const Subset& s, double /*f_s*/,
                                const SearchConfig& cfg, bool& any) {
  Candidate best{};
  for (int e : s) {
    any = true;
    Candidate next{MoveKind::kDelete, e, -1, run.eval(s.without(e)), true};
    consider(best, next, cfg);
  }
  return best;
}

inline Candidate scan_exchanges(Run& run, const Subset& s, double /*f_s*/,
                                const SearchConfig& cfg, bool& any) {
  const auto& c = run.constraint();
  Candidate best{};
  std::vector<int> order;
  for (int out : s) {
    order.clear();
    if (cfg.same_block_first) {
      for (int v : c.block(c.block_of(out))) {
        if (!s.contains(v)) order.push_back(v);
      }
      for (int v = 0; v < c.ground_size(); ++v) {
        if (s.contains(v) || c.block_of(v) == c.block_of(out)) continue;
        order.push_back(v);
      }
    } else {
      for (int v = 0; v < c.ground_size(); ++v) {
        if (!s.contains(v)) order.push_back(v);
      }
    }
    Subset removed = s.without(out);
    for (int in : order) {
      Subset candidate = removed.with(in);
      if (!c.is_feasible(candidate)) continue;
      any = true;
      Candidate next{MoveKind::kExchange, out, in, run.eval(candidate), true};
      consider(best, next, cfg);
    }
  }
  return best;
}

inline SearchResult finalize_budget(const Run& run) {
  SearchResult r;
  r.termination = Termination::kBudget;
  if (run.best()) {
    r.solution = run.best()->first;
    r.value = run.best()->second;
  }
  r.queries = run.used();
  return r;
}

inline SearchResult finalize_success(const Run& run, const SuccessSignal& hit,
                                     std::vector<Step> steps) {
  SearchResult r;
  r.solution = hit.subset;
  r.value = hit.value;
  r.termination = Termination::kSuccess;
  r.steps = std::move(steps);
  r.queries = run.used();
  return r;
}

}  // namespace detail

/// Best feasible single insertion into `s`: evaluates every e not in s with
/// s + {e} feasible and returns (element, gain), or nothing when no feasible
/// insertion exists. Pass `current` to reuse a known f(s); otherwise one
/// extra query evaluates it.
inline std::optional<std::pair<int, double>> best_insertion(
    CountedOracle& oracle, const Subset& s,
    std::optional<double> current = std::nullopt) {
  SearchConfig cfg;
  detail::Run run(oracle, cfg);
  const double f_s = current ? *current : run.eval(s);
  bool any = false;
  detail::Candidate best = detail::scan_insertions(run, s, f_s, cfg, any);
  if (!best.valid) return std::nullopt;
  return std::make_pair(best.inserted, best.value - f_s);
}

/// Best single deletion from `s` (deletions are always feasible under a
/// partition constraint); nothing when s is empty.
inline std::optional<std::pair<int, double>> best_deletion(
    CountedOracle& oracle, const Subset& s,
    std::optional<double> current = std::nullopt) {
  SearchConfig cfg;
  detail::Run run(oracle, cfg);
  const double f_s = current ? *current : run.eval(s);
  bool any = false;
  detail::Candidate best = detail::scan_deletions(run, s, f_s, cfg, any);
  if (!best.valid) return std::nullopt;
  return std::make_pair(best.removed, best.value - f_s);
}

/// Best feasible exchange: remove `out` in s, insert `in` not in s, keeping
/// feasibility. Nothing when no feasible pair exists.
inline std::optional<ExchangeMove> best_exchange(
    CountedOracle& oracle, const Subset& s,
    std::optional<double> current = std::nullopt) {
  SearchConfig cfg;
  detail::Run run(oracle, cfg);
  const double f_s = current ? *current : run.eval(s);
  bool any = false;
  detail::Candidate best = detail::scan_exchanges(run, s, f_s, cfg, any);
  if (!best.valid) return std::nullopt;
  return ExchangeMove{best.removed, best.inserted, best.value - f_s};
}

/// Local search for max f(S) under the oracle's partition constraint.
///
/// Starts from the empty set. Each step scans the insertion, deletion and
/// exchange neighborhoods, applies the single best move if it improves the
/// current value by more than epsilon, and stops otherwise. On regular
/// termination, if the complement of the final set is feasible and strictly
/// better, it is returned instead (recorded as a complement-swap step).
///
/// Moves preserve feasibility by construction; infeasible candidates are
/// never evaluated. With stop_on_success, any evaluated subset satisfying
/// the oracle's success predicate ends the run immediately, mid-scan.
inline SearchResult local_search(CountedOracle& oracle, const SearchConfig& cfg = {}) {
  detail::Run run(oracle, cfg);
  std::vector<Step> steps;
  try {
    Subset s;
    double value = run.eval(s);
    bool any_candidate = false;
    while (true) {
      bool any = false;
      detail::Candidate best{};
      detail::consider(best, detail::scan_insertions(run, s, value, cfg, any), cfg);
      {
        // Later neighborhoods only displace the incumbent on strict
        // improvement: equal-gain moves resolve to the earlier neighborhood.
        detail::Candidate del = detail::scan_deletions(run, s, value, cfg, any);
        if (del.valid && (!best.valid || del.value > best.value + cfg.tie_tolerance)) {
          best = del;
        }
        detail::Candidate ex = detail::scan_exchanges(run, s, value, cfg, any);
        if (ex.valid && (!best.valid || ex.value > best.value + cfg.tie_tolerance)) {
          best = ex;
        }
      }
      any_candidate = any_candidate || any;
      if (!best.valid || best.value - value <= cfg.epsilon) break;
      switch (best.kind) {
        case MoveKind::kInsert:
          s = s.with(best.inserted);
          break;
        case MoveKind::kDelete:
          s = s.without(best.removed);
          break;
        default:
          s = s.exchanged(best.removed, best.inserted);
          break;
      }
      value = best.value;
      steps.push_back(Step{best.kind, best.removed, best.inserted, value});
    }

    SearchResult r;
    r.termination = any_candidate ? Termination::kLocalOptimum : Termination::kNoMoves;
    r.local_optimum = s;
    Subset comp = oracle.constraint().complement(s);
    if (r.termination == Termination::kLocalOptimum && oracle.is_feasible(comp)) {
      const double comp_value = run.eval(comp);
      if (comp_value > value) {
        steps.push_back(Step{MoveKind::kComplementSwap, -1, -1, comp_value});
        s = std::move(comp);
        value = comp_value;
      }
    }
    r.solution = std::move(s);
    r.value = value;
    r.steps = std::move(steps);
    r.queries = run.used();
    return r;
  } catch (const detail::SuccessSignal& hit) {
    return detail::finalize_success(run, hit, std::move(steps));
  } catch (const detail::BudgetSignal&) {
    return detail::finalize_budget(run);
  }
}

/// Insertion-only variant: repeatedly applies the best feasible insertion
/// while it improves by more than epsilon. No deletions, no exchanges, no
/// complement fallback.
inline SearchResult greedy(CountedOracle& oracle, const SearchConfig& cfg = {}) {
  detail::Run run(oracle, cfg);
  std::vector<Step> steps;
  try {
    Subset s;
    double value = run.eval(s);
    bool any_candidate = false;
    while (true) {
      bool any = false;
      detail::Candidate best = detail::scan_insertions(run, s, value, cfg, any);
      any_candidate = any_candidate || any;
      if (!best.valid || best.value - value <= cfg.epsilon) break;
      s = s.with(best.inserted);
      value = best.value;
      steps.push_back(Step{MoveKind::kInsert, -1, best.inserted, value});
    }
    SearchResult r;
    r.termination = any_candidate ? Termination::kLocalOptimum : Termination::kNoMoves;
    r.local_optimum = s;
    r.solution = std::move(s);
    r.value = value;
    r.steps = std::move(steps);
    r.queries = run.used();
    return r;
  } catch (const detail::SuccessSignal& hit) {
    return detail::finalize_success(run, hit, std::move(steps));
  } catch (const detail::BudgetSignal&) {
    return detail::finalize_budget(run);
  }
}

/// Exact local-optimality test: f(s) is no smaller than the value of every
/// single insertion, deletion and exchange, where results violating the
/// constraint evaluate as 0 (the oracle's convention). All evaluations go
/// through the counted oracle.
inline bool is_local_optimum(CountedOracle& oracle, const Subset& s) {
  const auto& c = oracle.constraint();
  const double value = oracle.evaluate(s);
  for (int e = 0; e < c.ground_size(); ++e) {
    if (s.contains(e)) continue;
    if (oracle.evaluate(s.with(e)) > value) return false;
  }
  for (int e : s) {
    if (oracle.evaluate(s.without(e)) > value) return false;
    Subset removed = s.without(e);
    for (int v = 0; v < c.ground_size(); ++v) {
      if (s.contains(v)) continue;
      if (oracle.evaluate(removed.with(v)) > value) return false;
    }
  }
  return true;
}

}  // namespace setmax
