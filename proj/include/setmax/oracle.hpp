#pragma once

#include <atomic>
#include <cmath>
#include <cstdint>
#include <functional>
#include <mutex>
#include <optional>
#include <stdexcept>
#include <unordered_map>
#include <utility>

#include "setmax/constraint.hpp"
#include "setmax/subset.hpp"

namespace setmax {

/// Raised when a feasible evaluation would exceed the oracle budget. Carries
/// the best feasible (subset, value) seen so far so callers can finalize.
class BudgetExhaustedError : public std::runtime_error {
 public:
  BudgetExhaustedError(std::int64_t used, std::int64_t budget,
                       std::optional<std::pair<Subset, double>> best)
      : std::runtime_error("oracle budget exhausted (" + std::to_string(used) + "/" +
                           std::to_string(budget) + " queries)"),
        used_(used),
        budget_(budget),
        best_(std::move(best)) {}

  std::int64_t queries_used() const { return used_; }
  std::int64_t budget() const { return budget_; }
  const std::optional<std::pair<Subset, double>>& best_seen() const { return best_; }

 private:
  std::int64_t used_;
  std::int64_t budget_;
  std::optional<std::pair<Subset, double>> best_;
};

/// Raised when the evaluator produces NaN or an infinity.
class NumericError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Query-counted access to a black-box set function under a partition
/// constraint.
///
/// Semantics:
///  - evaluate() on a feasible subset calls the evaluator and increments the
///    query counter by exactly one;
///  - evaluate() on an infeasible subset returns 0.0 without consulting the
///    evaluator and without counting (the objective is defined as 0 there);
///  - feasibility checks are free;
///  - with a budget set, an evaluation that would exceed it raises
///    BudgetExhaustedError instead of running (the counter stays exact);
///  - the counter is atomic, so concurrent workers never lose increments and
///    transient budget overshoot is bounded by the worker count;
///  - value caching is off by default (repeated evaluations of the same
///    subset each count); enable_cache(true) makes repeats count once.
///
/// The function is assumed non-negative; a negative evaluator output is
/// flagged (negative_value_seen) rather than rejected.
class CountedOracle {
 public:
  using Evaluator = std::function<double(const Subset&)>;
  using SuccessPredicate = std::function<bool(const Subset&, double)>;

  CountedOracle(Evaluator evaluator, PartitionConstraint constraint)
      : evaluator_(std::move(evaluator)), constraint_(std::move(constraint)) {
    if (!evaluator_) throw std::invalid_argument("CountedOracle: null evaluator");
  }

  void set_budget(std::int64_t budget) {
    if (budget < 0) throw std::invalid_argument("CountedOracle: negative budget");
    budget_ = budget;
  }

  void set_success_predicate(SuccessPredicate p) { success_ = std::move(p); }
  bool has_success_predicate() const { return static_cast<bool>(success_); }

  bool is_success(const Subset& s, double value) const {
    return success_ && success_(s, value);
  }

  void enable_cache(bool on) { cache_enabled_ = on; }

  bool is_feasible(const Subset& s) const { return constraint_.is_feasible(s); }

  double evaluate(const Subset& s) {
    if (!constraint_.is_feasible(s)) return 0.0;
    if (cache_enabled_) {
      std::lock_guard<std::mutex> lock(mu_);
      auto it = cache_.find(s);
      if (it != cache_.end()) return it->second;
    }
    const std::int64_t ticket = count_.fetch_add(1, std::memory_order_relaxed);
    if (budget_ && ticket >= *budget_) {
      count_.fetch_sub(1, std::memory_order_relaxed);
      throw BudgetExhaustedError(ticket, *budget_, best_seen());
    }
    const double v = evaluator_(s);
    if (!std::isfinite(v)) {
      throw NumericError("CountedOracle: evaluator returned a non-finite value for {" +
                         s.to_string() + "}");
    }
    if (v < 0.0) negative_seen_.store(true, std::memory_order_relaxed);
    {
      std::lock_guard<std::mutex> lock(mu_);
      if (!best_ || v > best_->second) best_ = std::make_pair(s, v);
      if (cache_enabled_) cache_.emplace(s, v);
    }
    return v;
  }

  std::int64_t query_count() const { return count_.load(std::memory_order_relaxed); }
  std::optional<std::int64_t> budget() const { return budget_; }
  const PartitionConstraint& constraint() const { return constraint_; }
  bool negative_value_seen() const { return negative_seen_.load(std::memory_order_relaxed); }

  std::optional<std::pair<Subset, double>> best_seen() const {
    std::lock_guard<std::mutex> lock(mu_);
    return best_;
  }

 private:
  Evaluator evaluator_;
  PartitionConstraint constraint_;
  std::atomic<std::int64_t> count_{0};
  std::optional<std::int64_t> budget_;
  SuccessPredicate success_;
  std::atomic<bool> negative_seen_{false};
  bool cache_enabled_ = false;
  mutable std::mutex mu_;
  std::unordered_map<Subset, double, SubsetHash> cache_;
  std::optional<std::pair<Subset, double>> best_;
};

}  // namespace setmax
