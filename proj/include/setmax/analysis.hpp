#pragma once

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "setmax/constraint.hpp"
#include "setmax/rng.hpp"
#include "setmax/subset.hpp"

namespace setmax {

/// Raised when an exact enumeration would exceed its configured cap. Carries
/// the enumeration size the request would have needed.
class SizeLimitError : public std::runtime_error {
 public:
  SizeLimitError(const std::string& what, double required)
      : std::runtime_error(what + " (required enumeration size " +
                           std::to_string(required) + ")"),
        required_(required) {}
  double required_count() const { return required_; }

 private:
  double required_;
};

/// Set function backed by a value table indexed by bitmask (element i ->
/// bit i). Handy for small explicitly-specified functions.
class TabulatedFunction {
 public:
  explicit TabulatedFunction(std::vector<double> values) : values_(std::move(values)) {
    std::size_t n = values_.size();
    if (n == 0 || (n & (n - 1)) != 0) {
      throw std::invalid_argument("TabulatedFunction: table size must be a power of two");
    }
  }
  double operator()(const Subset& s) const { return values_.at(s.to_mask()); }
  const std::vector<double>& values() const { return values_; }

 private:
  std::vector<double> values_;
};

namespace detail {

template <class F>
std::vector<double> tabulate(F&& f, int n) {
  std::vector<double> tab(std::size_t(1) << n);
  for (std::uint64_t mask = 0; mask < tab.size(); ++mask) {
    tab[mask] = f(Subset::from_mask(mask));
  }
  return tab;
}

inline std::vector<std::uint64_t> block_masks(const PartitionConstraint& c) {
  std::vector<std::uint64_t> masks(c.num_blocks(), 0);
  for (int i = 0; i < c.num_blocks(); ++i) {
    for (int e : c.block(i)) masks[i] |= std::uint64_t(1) << e;
  }
  return masks;
}

inline double pairs_of(double m) { return m < 2 ? 0.0 : m * (m - 1) / 2.0; }

}  // namespace detail

struct OptResult {
  Subset argmax;
  double value = 0.0;
  double enumerated = 0.0;  // feasible subsets visited
};

/// Exhaustive maximization over the feasible lattice, visiting each block's
/// admissible picks in turn. Ties resolve to the lexicographically smallest
/// subset (ascending id sequences compared elementwise; the empty set sorts
/// first). Refuses lattices larger than `cap` feasible subsets.
template <class F>
OptResult brute_force_opt(F&& f, const PartitionConstraint& c,
                          double cap = static_cast<double>(1u << 20)) {
  const double count = c.feasible_count();
  if (count > cap) {
    throw SizeLimitError("brute_force_opt: feasible lattice exceeds cap", count);
  }
  OptResult best;
  bool have = false;
  std::vector<int> chosen;

  // Per-block choice lists: subsets of the block with size <= capacity,
  // enumerated as size-j combinations (blocks can be far larger than their
  // capacity, so submask enumeration is out).
  std::vector<std::vector<std::vector<int>>> choices(c.num_blocks());
  for (int i = 0; i < c.num_blocks(); ++i) {
    const auto& block = c.block(i);
    const int m = static_cast<int>(block.size());
    for (int take = 0; take <= c.capacity(i); ++take) {
      std::vector<int> idx(take);
      std::function<void(int, int)> combos = [&](int start, int depth) {
        if (depth == take) {
          std::vector<int> pick(take);
          for (int j = 0; j < take; ++j) pick[j] = block[idx[j]];
          choices[i].push_back(std::move(pick));
          return;
        }
        for (int at = start; at < m; ++at) {
          idx[depth] = at;
          combos(at + 1, depth + 1);
        }
      };
      combos(0, 0);
    }
  }

  std::function<void(int)> recurse = [&](int b) {
    if (b == c.num_blocks()) {
      Subset s{std::vector<int>(chosen)};
      const double v = f(s);
      best.enumerated += 1;
      if (!have || v > best.value || (v == best.value && s < best.argmax)) {
        best.argmax = std::move(s);
        best.value = v;
        have = true;
      }
      return;
    }
    for (const auto& pick : choices[b]) {
      chosen.insert(chosen.end(), pick.begin(), pick.end());
      recurse(b + 1);
      chosen.resize(chosen.size() - pick.size());
    }
  };
  recurse(0);
  return best;
}

struct SubmodularityWitness {
  Subset x;
  Subset y;
  int element = -1;
  double gain_x = 0.0;
  double gain_y = 0.0;
};

/// Exhaustive diminishing-returns check: looks for X subset of Y and e
/// outside Y with f(X+e) - f(X) < f(Y+e) - f(Y) - tol. Returns the first
/// violation in (e ascending, Y ascending, X ascending-submask) order, or
/// nothing if f is submodular. Exhaustive only; refuses ground sets above
/// `cap` elements.
template <class F>
std::optional<SubmodularityWitness> check_submodular(F&& f, int ground_size,
                                                     double tol = 0.0, int cap = 14) {
  if (ground_size < 0) throw std::domain_error("check_submodular: negative ground size");
  if (ground_size > cap) {
    throw SizeLimitError("check_submodular: ground set exceeds cap",
                         std::pow(2.0, ground_size));
  }
  const std::vector<double> tab = detail::tabulate(f, ground_size);
  const std::uint64_t full = ground_size == 64 ? ~0ULL : (1ULL << ground_size) - 1;
  for (int e = 0; e < ground_size; ++e) {
    const std::uint64_t ebit = 1ULL << e;
    for (std::uint64_t y = 0; y <= full; ++y) {
      if (y & ebit) continue;
      const double gain_y = tab[y | ebit] - tab[y];
      // Submasks of y in ascending numeric order.
      std::uint64_t x = 0;
      while (true) {
        const double gain_x = tab[x | ebit] - tab[x];
        if (gain_x < gain_y - tol) {
          return SubmodularityWitness{Subset::from_mask(x), Subset::from_mask(y), e,
                                      gain_x, gain_y};
        }
        if (x == y) break;
        x = (x - y) & y;
      }
    }
  }
  return std::nullopt;
}

struct MonotonicityWitness {
  Subset x;
  Subset y;
  double f_x = 0.0;
  double f_y = 0.0;
};

/// Exhaustive monotonicity check via single-element extensions (which
/// suffices): looks for X and e outside X with f(X+e) < f(X) - tol.
template <class F>
std::optional<MonotonicityWitness> check_monotone(F&& f, int ground_size,
                                                  double tol = 0.0, int cap = 14) {
  if (ground_size < 0) throw std::domain_error("check_monotone: negative ground size");
  if (ground_size > cap) {
    throw SizeLimitError("check_monotone: ground set exceeds cap",
                         std::pow(2.0, ground_size));
  }
  const std::vector<double> tab = detail::tabulate(f, ground_size);
  const std::uint64_t full = ground_size == 64 ? ~0ULL : (1ULL << ground_size) - 1;
  for (std::uint64_t x = 0; x <= full; ++x) {
    for (int e = 0; e < ground_size; ++e) {
      const std::uint64_t ebit = 1ULL << e;
      if (x & ebit) continue;
      if (tab[x | ebit] < tab[x] - tol) {
        return MonotonicityWitness{Subset::from_mask(x), Subset::from_mask(x | ebit),
                                   tab[x], tab[x | ebit]};
      }
    }
  }
  return std::nullopt;
}

struct SmIOptions {
  /// Exact enumeration is used up to this many ground elements.
  int exact_cap = 14;
  /// Above the cap, this many sampled (A, S) pairs estimate the index.
  std::optional<std::int64_t> sample_count;
  std::uint64_t seed = 0;
};

struct SmIReport {
  double lambda = 0.0;
  /// Argmin witness: the (S, A) pair attaining lambda (first in enumeration
  /// order among minimizers).
  Subset witness_s;
  Subset witness_a;
  /// True when the value came from exhaustive enumeration; sampled estimates
  /// are upper bounds of the true minimum and are reported non-certified.
  bool certified = false;
  std::int64_t pairs_checked = 0;
};

namespace detail {

template <class F>
double smi_phi(F&& f, const Subset& s, const Subset& a) {
  const double f_a = f(a);
  double total = 0.0;
  for (int x : s) total += f(a.with(x)) - f_a;
  Subset merged = a;
  for (int x : s) merged = merged.with(x);
  return total - (f(merged) - f_a);
}

}  // namespace detail

/// Submodularity index of f restricted to location sets A inside L and
/// perturbation sets S of size at most k disjoint from A:
///
///   lambda(L, k) = min over A in L, S disjoint from A, |S| <= k of
///                  sum_{x in S} [f(A+x) - f(A)] - [f(A+S) - f(A)]
///
/// Zero when f is modular, non-negative when f is submodular, and
/// monotonically non-increasing as L grows. k = 0 yields 0 by convention.
/// Evaluates the callable it is given as-is (no constraint is involved).
template <class F>
SmIReport smi(F&& f, const Subset& location, int k, int ground_size,
              const SmIOptions& opts = {}) {
  if (k < 0) throw std::domain_error("smi: negative k");
  if (ground_size < 0) throw std::domain_error("smi: negative ground size");
  for (int e : location) {
    if (e >= ground_size) throw std::domain_error("smi: location outside ground set");
  }
  SmIReport report;
  if (ground_size <= opts.exact_cap) {
    const std::vector<double> tab = detail::tabulate(f, ground_size);
    const std::uint64_t full =
        ground_size == 0 ? 0 : (ground_size == 64 ? ~0ULL : (1ULL << ground_size) - 1);
    const std::uint64_t lmask = location.to_mask();
    bool have = false;
    std::uint64_t a = 0;
    while (true) {  // submasks of the location set, ascending
      const std::uint64_t comp = full & ~a;
      const double f_a = tab[a];
      std::uint64_t s = 0;
      while (true) {  // submasks of the complement, ascending
        if (std::popcount(s) <= k) {
          double phi = -(tab[a | s] - f_a);
          std::uint64_t rest = s;
          while (rest) {
            const std::uint64_t bit = rest & (~rest + 1);
            phi += tab[a | bit] - f_a;
            rest ^= bit;
          }
          ++report.pairs_checked;
          if (!have || phi < report.lambda) {
            report.lambda = phi;
            report.witness_s = Subset::from_mask(s);
            report.witness_a = Subset::from_mask(a);
            have = true;
          }
        }
        if (s == comp) break;
        s = (s - comp) & comp;
      }
      if (a == lmask) break;
      a = (a - lmask) & lmask;
    }
    report.certified = true;
    return report;
  }
  if (!opts.sample_count) {
    throw SizeLimitError("smi: ground set exceeds exact cap and no sample count given",
                         std::pow(2.0, ground_size));
  }
  // Sampled estimate: an upper bound of the true minimum; never certified.
  SplitRng rng(derive_seed(opts.seed, 0x536d49));
  const std::vector<int>& loc = location.ids();
  bool have = false;
  for (std::int64_t it = 0; it < *opts.sample_count; ++it) {
    std::vector<int> a_ids;
    for (int e : loc) {
      if (rng.next_bool()) a_ids.push_back(e);
    }
    Subset a(std::move(a_ids));
    std::vector<int> pool;
    for (int e = 0; e < ground_size; ++e) {
      if (!a.contains(e)) pool.push_back(e);
    }
    std::vector<int> s_ids;
    const int take = std::min<int>(k, static_cast<int>(pool.size()));
    const int want = take > 0 ? rng.next_int(take + 1) : 0;
    for (int j = 0; j < want; ++j) {
      const int at = rng.next_int(static_cast<int>(pool.size()));
      s_ids.push_back(pool[at]);
      pool.erase(pool.begin() + at);
    }
    Subset s(std::move(s_ids));
    const double phi = detail::smi_phi(f, s, a);
    ++report.pairs_checked;
    if (!have || phi < report.lambda) {
      report.lambda = phi;
      report.witness_s = std::move(s);
      report.witness_a = std::move(a);
      have = true;
    }
  }
  report.certified = false;
  return report;
}

struct BoundReport {
  double lhs = 0.0;  // 2 f(S) + f(V\S), infeasible sets evaluating as 0
  double rhs = 0.0;  // f(C) + max(xi * lambda(V,2), delta * lambda(V,2) + lambda(S,|C\S|))
  double f_s = 0.0;
  double f_comp = 0.0;
  double f_opt = 0.0;
  double xi = 0.0;
  double delta = 0.0;
  double lambda_v2 = 0.0;
  double lambda_s = 0.0;
  /// Value certificate implied for f(S): (rhs - f(V\S)) / 2 <= f(S).
  double lower_bound = 0.0;
  bool holds = false;
  Subset s;
  Subset c_opt;
};

/// Checks the local-optimum value bound
///
///   2 f(S) + f(V\S) >= f(C) + max(xi * lambda(V,2),
///                                 delta * lambda(V,2) + lambda(S, |C\S|))
///
/// with xi = C(|S\C|,2) + C(|C\S|,2) + |V\(S u C)| * |S| + |C\S| * |S n C|
/// and delta = xi - C(|C\S|,2) + |C\S|, for S a local optimum and C the
/// constrained maximizer.
///
/// All evaluations (the index terms included) read f through the objective's
/// convention that constraint-violating subsets are worth 0; that is the
/// form of the inequality a search local optimum provably satisfies.
/// Comparison carries a 1e-12-scaled slack so last-ulp rounding in the sums
/// cannot flag a mathematically valid instance.
template <class F>
BoundReport theorem1_check(F&& f, const Subset& s, const Subset& c_opt,
                           const PartitionConstraint& con, const SmIOptions& opts = {}) {
  if (!con.is_feasible(s)) throw std::invalid_argument("theorem1_check: S infeasible");
  if (!con.is_feasible(c_opt)) throw std::invalid_argument("theorem1_check: C infeasible");
  const int n = con.ground_size();
  auto zeroed = [&](const Subset& q) { return con.is_feasible(q) ? f(q) : 0.0; };

  BoundReport r;
  r.s = s;
  r.c_opt = c_opt;
  int in_both = 0;
  for (int e : s) {
    if (c_opt.contains(e)) ++in_both;
  }
  const double s_minus_c = static_cast<double>(s.size()) - in_both;
  const double c_minus_s = static_cast<double>(c_opt.size()) - in_both;
  const double outside = n - (static_cast<double>(s.size()) + c_opt.size() - in_both);
  r.xi = detail::pairs_of(s_minus_c) + detail::pairs_of(c_minus_s) +
         outside * static_cast<double>(s.size()) + c_minus_s * in_both;
  r.delta = r.xi - detail::pairs_of(c_minus_s) + c_minus_s;

  Subset ground = con.complement(Subset{});
  r.lambda_v2 = smi(zeroed, ground, 2, n, opts).lambda;
  r.lambda_s = smi(zeroed, s, static_cast<int>(c_minus_s), n, opts).lambda;

  r.f_s = zeroed(s);
  r.f_comp = zeroed(con.complement(s));
  r.f_opt = zeroed(c_opt);
  r.lhs = 2.0 * r.f_s + r.f_comp;
  r.rhs = r.f_opt + std::max(r.xi * r.lambda_v2, r.delta * r.lambda_v2 + r.lambda_s);
  r.lower_bound = (r.rhs - r.f_comp) / 2.0;
  const double scale = std::max({1.0, std::fabs(r.lhs), std::fabs(r.rhs)});
  r.holds = r.lhs >= r.rhs - 1e-12 * scale;
  return r;
}

struct CorollaryReport {
  double f_s = 0.0;
  double f_comp = 0.0;  // f on V\S as given (not zeroed; see note below)
  double f_opt = 0.0;
  bool cor1_holds = false;     // f(S) >= f(C)/3 or f(V\S) >= f(C)/3
  bool cor2_applicable = false;  // some block has more than two elements
  bool cor2_holds = false;       // f(S) >= f(C)/2 (true when not applicable)
  Subset c_opt;
};

/// Submodular-case constant-factor checks for a local optimum S. Verifies
/// submodularity of f first and refuses non-submodular inputs. f(V\S) is
/// evaluated on the raw function even when V\S is infeasible: that is the
/// form in which the 1/3 disjunction is provable for a search local optimum
/// (zeroing the complement would also zero the guarantee's escape hatch).
template <class F>
CorollaryReport corollary_check(F&& f, const Subset& s, const PartitionConstraint& con,
                                double tol = 0.0, int cap = 14) {
  if (!con.is_feasible(s)) throw std::invalid_argument("corollary_check: S infeasible");
  if (auto witness = check_submodular(f, con.ground_size(), tol, cap)) {
    throw std::invalid_argument(
        "corollary_check: f is not submodular (witness X={" + witness->x.to_string() +
        "}, Y={" + witness->y.to_string() + "}, e=" + std::to_string(witness->element) +
        ")");
  }
  CorollaryReport r;
  OptResult opt = brute_force_opt(f, con);
  r.c_opt = opt.argmax;
  r.f_opt = opt.value;
  r.f_s = f(s);
  r.f_comp = f(con.complement(s));
  const double scale = std::max({1.0, std::fabs(r.f_opt), std::fabs(r.f_s)});
  const double slack = 1e-12 * scale;
  r.cor1_holds = r.f_s >= r.f_opt / 3.0 - slack || r.f_comp >= r.f_opt / 3.0 - slack;
  for (int i = 0; i < con.num_blocks(); ++i) {
    if (con.block(i).size() > 2) r.cor2_applicable = true;
  }
  r.cor2_holds = !r.cor2_applicable || r.f_s >= r.f_opt / 2.0 - slack;
  return r;
}

/// The multilinear-relaxation bound this work is compared against:
/// (1/alpha) * (1 - exp(-alpha * d_bar / d)), where d is the total capacity
/// and d_bar the largest block capacity. alpha = 0 returns the analytic
/// limit d_bar / d.
inline double prior_bound(double alpha, int d_bar, int d) {
  if (d_bar < 1 || d < d_bar) {
    throw std::domain_error("prior_bound: need 1 <= d_bar <= d");
  }
  if (alpha < 0.0) throw std::domain_error("prior_bound: negative alpha");
  const double ratio = static_cast<double>(d_bar) / d;
  if (alpha == 0.0) return ratio;
  return -std::expm1(-alpha * ratio) / alpha;
}

struct GridEntry {
  double alpha = 0.0;
  int d = 0;
  double prior_minus_third = 0.0;
  double prior_minus_half = 0.0;
};

/// Comparison grid of the prior bound (d_bar = 1) against the 1/3 and 1/2
/// constants, over alpha in {0.1..5.0 step 0.1} x d in {1..20} by default.
/// Rows are alpha-major.
inline std::vector<GridEntry> bound_comparison_grid(
    const std::vector<double>& alphas = {}, const std::vector<int>& ds = {},
    int d_bar = 1) {
  std::vector<double> as = alphas;
  if (as.empty()) {
    for (int i = 1; i <= 50; ++i) as.push_back(i / 10.0);
  }
  std::vector<int> dv = ds;
  if (dv.empty()) {
    for (int d = 1; d <= 20; ++d) dv.push_back(d);
  }
  std::vector<GridEntry> grid;
  grid.reserve(as.size() * dv.size());
  for (double alpha : as) {
    for (int d : dv) {
      const double p = prior_bound(alpha, d_bar, d);
      grid.push_back(GridEntry{alpha, d, p - 1.0 / 3.0, p - 0.5});
    }
  }
  return grid;
}

}  // namespace setmax
