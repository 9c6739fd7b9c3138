#pragma once

// Core data model shared by all modules: portfolio patterns, households,
// parameters, chain state, and run configuration.  All types are immutable
// value objects; ChainState is mutated only by the Gibbs engine.

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "ineq/indices.hpp"
#include "ineq/types.hpp"

namespace ineq {

inline constexpr int kComponents = 5;  // financial, dwelling, other real
                                       // estate, professional, remainder
inline constexpr int kPatterns = 8;

// Ownership pattern over the five components.  Components 1 and 5
// (0-based 0 and 4) are always owned; the three middle flags enumerate the
// eight admissible patterns by binary encoding.
struct PortfolioPattern {
  std::array<bool, kComponents> owned{};
  int pattern_id = 0;  // 1..8 = 1 + owned[1] + 2*owned[2] + 4*owned[3]
  int size = 0;        // number of owned components, in {2,3,4,5}
};

// Canonical pattern for an ownership vector; rejects vectors where the
// always-owned components are missing.
PortfolioPattern pattern_of(const std::array<bool, kComponents>& owned);

// 0-based indices of the owned components, ascending.
std::vector<int> owned_components(const PortfolioPattern& pattern);

// Closed euro interval; hi may be +infinity.
struct Interval {
  double lo = 0.0;
  double hi = kInf;

  double width() const { return hi - lo; }
  bool contains(double x, double tol = 0.0) const {
    return x >= lo - tol && x <= hi + tol;
  }
};

// One surveyed household: design weight, ownership pattern, per-component
// covariates (leading slot is the constant term), and the censoring
// information (brackets, tax data, global cap).
struct Household {
  std::string id;
  double weight = 0.0;
  PortfolioPattern pattern;
  // Indexed by component; meaningful only where pattern.owned is true.
  std::array<VecX, kComponents> covariates;
  std::array<Interval, kComponents> component_brackets;
  Interval total_bracket;                         // bracket on sum of W_l
  std::optional<Interval> financial_sum_bracket;  // declared subset sum
  double debt = 0.0;
  double nded_min = 0.0;
  double nded_max = kInf;
  std::optional<bool> pays_wealth_tax;
  double cap = 0.0;  // finite upper bound on total wealth, > 0
};

// A named invariant breach found by validate_household.
struct Violation {
  std::string field;
  std::string rule;
};

// Empty list when every type invariant holds.
std::vector<Violation> validate_household(const Household& h);

// Model parameters theta: slopes shared across patterns, pattern-specific
// intercepts, and one covariance matrix per pattern over its owned
// components (canonical ascending order).
struct ParameterSet {
  // Per component: coefficients of the non-constant covariates (dim_l - 1).
  std::array<VecX, kComponents> slopes;
  // intercepts[i][l] is defined iff pattern i+1 owns component l;
  // undefined entries hold NaN.
  std::array<std::array<double, kComponents>, kPatterns> intercepts{};
  // covariances[i] is p_i x p_i for pattern i+1.
  std::array<MatX, kPatterns> covariances;
};

// Gibbs state V = (theta, W_1..W_m, E).
struct ChainState {
  ParameterSet theta;
  // Per household: log W over its owned components, canonical order.
  std::vector<VecX> latent_log_wealth;
  double sampling_error = 0.0;  // E in model (I)
};

// Run-level configuration; JSON-serializable (see io module).
struct RunConfig {
  long long sweeps = 20000;   // T, total recorded sweeps
  long long burn_in = 1000;   // B, dropped sweeps
  std::uint64_t seed = 0;
  double tax_threshold = 720000.0;
  double dwelling_rebate = 0.8;  // multiplier on the dwelling in tax sums
  std::vector<IndexSpec> indices;
  double alpha = 0.05;  // posterior region level

  void validate() const;  // throws input_error on breach

  // Full default report row set: mean, median, tail quantiles, quantile
  // ratios, gini, theil, atkinson(1.5) and atkinson(2).
  static std::vector<IndexSpec> default_indices();
};

}  // namespace ineq
