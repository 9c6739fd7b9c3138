#pragma once

// Data-augmentation Gibbs sampler over the joint state (theta, W_1..W_m, E):
// block-ordered sweeps (covariances, coefficients, latent wealth, sampling
// error) and per-sweep evaluation of the requested indices on the imputed
// population totals.

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "ineq/constraints.hpp"
#include "ineq/domain.hpp"
#include "ineq/indices.hpp"
#include "ineq/io.hpp"
#include "ineq/random.hpp"
#include "ineq/types.hpp"

namespace ineq::gibbs {

// Column layout of the stacked coefficient vector under the shared-slope
// restriction: per-component slope columns first (shared across patterns),
// then one intercept column per (pattern, component) pair present in the
// data.  Labels look like "slope:c2:age" and "intercept:p5:c1".
struct DesignLayout {
  int columns = 0;
  std::vector<std::string> labels;
  std::array<std::vector<int>, kComponents> slope_columns;
  // -1 where the pattern is absent from the data or does not own l.
  std::array<std::array<int, kComponents>, kPatterns> intercept_column;

  DesignLayout() {
    for (auto& row : intercept_column) row.fill(-1);
  }
};

// One household ready for sampling: tightened constraints and the compressed
// design block (p_i rows in canonical component order; columns follow the
// pattern's active-column list).
struct PreparedHousehold {
  Household household;
  ConstraintSet constraints;
  MatX design;
  VecX log_feasible;  // log of a feasible point over owned components
};

struct PreparedData {
  std::vector<PreparedHousehold> households;
  // Household indices by 0-based pattern index (pattern_id - 1).
  std::array<std::vector<int>, kPatterns> groups;
  // Global column ids of each pattern's design block, shared by its members.
  std::array<std::vector<int>, kPatterns> active_columns;
  // dim_l: covariate count per component including the constant slot.
  std::array<int, kComponents> dims{};
  DesignLayout layout;

  // Number of owned components of pattern i (0-based index).
  int pattern_dim(int i) const;
  bool pattern_present(int i) const { return !groups[i].empty(); }
};

// Validates households, builds and tightens constraint sets, groups by
// pattern, enforces the minimum group size n_i > p_i + (slope columns used),
// lays out the stacked design, and checks per-component full column rank.
// Throws input_error on contract breaches, infeasible_error when a
// household's censoring region is empty.
PreparedData prepare(const io::Dataset& data, const RunConfig& cfg);

// Realized index values of one sweep (aligned with the spec list used to
// record it), with an optional flattened theta snapshot.
struct SweepRecord {
  long long sweep = 0;
  VecX values;
  std::optional<VecX> theta;
};

// Mean and variance of z_j given z_{-j} for N(mu, Q^-1), in precision form.
struct ConditionalNormal {
  double mean = 0.0;
  double variance = 0.0;
};
ConditionalNormal conditional_normal(const VecX& mu, const MatX& precision,
                                     int j, const VecX& z);

class GibbsSampler {
 public:
  // `jobs` threads are used inside update_wealth; results are independent of
  // the thread count because each household owns a dedicated RNG sub-stream.
  GibbsSampler(const PreparedData& data, const RunConfig& cfg, int jobs = 1);

  // Deterministic starting state: latent wealth at the feasible points,
  // coefficients by per-component OLS on those points, covariances from
  // pooled within-pattern residuals (ridged by 1e-6 I if singular), E = 0.
  void init();

  void update_covariances();  // Sigma_i ~ IW(n_i, S_i), per present pattern
  void update_coefficients(); // one joint Gaussian draw of the stacked vector
  void update_wealth();       // component-by-component truncated draws
  void update_error();        // E ~ N(0,1), fresh draw

  // One full sweep in block order, advancing the sweep index.
  void sweep();

  // Evaluates each index on the imputed totals t_k = sum_l W_k^l and adds
  // the sampling-error term: value = index(t) + sqrt(Vhat(t)) * E.
  SweepRecord record_sweep(const std::vector<IndexSpec>& specs,
                           bool include_theta = false) const;

  long long sweep_index() const { return sweep_index_; }
  const ChainState& state() const { return state_; }
  ChainState& state() { return state_; }

  // Gaussian full conditional of the stacked coefficient vector given the
  // current latents and covariances: precision and mean (GLS solution).
  void coefficient_conditional(VecX* mean, MatX* precision) const;

  // Stacked coefficient vector gamma assembled from the current theta.
  VecX stacked_coefficients() const;
  void set_stacked_coefficients(const VecX& gamma);

  // Rebuilds the cached per-pattern precisions from the current theta; call
  // after writing covariances into state() directly.
  void refresh_precision();

  // Flattened theta snapshot (gamma, then each present pattern's covariance
  // upper triangle) and the matching labels.
  static VecX flatten_theta(const ParameterSet& theta, const PreparedData& data);
  static std::vector<std::string> theta_labels(const PreparedData& data);

 private:
  // Conditional mean of log wealth (p_i rows) for household k under theta.
  VecX household_mean(int k) const;
  void update_household(int k, long long sweep_no);

  const PreparedData& data_;
  RunConfig cfg_;
  int jobs_ = 1;
  ChainState state_;
  long long sweep_index_ = 0;
  RngStream theta_rng_;
  RngStream error_rng_;
  std::vector<RngStream> household_rngs_;
  std::array<MatX, kPatterns> precision_;  // Sigma_i^-1 per present pattern
};

struct RunOptions {
  int jobs = 1;
  bool trace_theta = false;
  long long progress_stride = 0;     // 0 = silent
  std::ostream* progress = nullptr;  // where progress lines go
};

struct RunResult {
  std::vector<IndexSpec> specs;
  MatX series;       // sweeps x indices, every sweep recorded (no burn-in cut)
  MatX theta_trace;  // sweeps x theta-dim when traced, else 0 x 0
  std::vector<std::string> theta_labels;
};

// Executes cfg.sweeps full sweeps from the deterministic start and returns
// every sweep's record; errors carry the sweep index.
RunResult run(const PreparedData& data, const RunConfig& cfg,
              const RunOptions& opts = {});

}  // namespace ineq::gibbs
