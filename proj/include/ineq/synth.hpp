#pragma once

// Synthetic finite populations for verifying the estimator end to end:
// draw household wealth from the same lognormal pattern model the sampler
// assumes, select a design-weighted sample with unequal probabilities,
// censor it into brackets, and keep the truth on the side as the oracle.

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "ineq/domain.hpp"
#include "ineq/io.hpp"
#include "ineq/random.hpp"
#include "ineq/types.hpp"

namespace ineq::synth {

// One household-level covariate: uniform on [a, b], normal with mean a and
// standard deviation b, or bernoulli with success probability a.  The same
// drawn value enters every owned component's design vector.
struct CovariateSpec {
  enum class Kind { uniform, normal, bernoulli };

  std::string name;
  Kind kind = Kind::uniform;
  double a = 0.0;
  double b = 0.0;
};

// Ascending bracket thresholds t_0 < t_1 < ...; the brackets are
// [t_0, t_1), ..., [t_last, +inf).  An empty list means the value is
// observed exactly (degenerate bracket), and the singleton {0} means it is
// not observed at all (one bracket covering everything).
struct BracketSystem {
  std::vector<double> thresholds;

  // The bracket containing w; degenerate systems return [w, w].  Throws
  // input_error when w lies below the first threshold.
  Interval bracket_of(double w) const;
};

// Unequal-probability selection pressure: units with larger values of the
// named covariate get scores growing linearly in its population rank, from
// 1 up to `factor`.  An empty name keeps every score at 1 (uniform design).
struct Oversample {
  std::string covariate;
  double factor = 1.0;
};

struct SynthConfig {
  long long population_size = 10000;
  int sample_size = 500;
  ParameterSet parameters;  // truth: slopes, intercepts, covariances
  std::array<double, kPatterns> pattern_probabilities{0.125, 0.125, 0.125,
                                                      0.125, 0.125, 0.125,
                                                      0.125, 0.125};
  std::vector<CovariateSpec> covariates;
  std::array<BracketSystem, kComponents> component_systems;
  BracketSystem total_system;
  double cap = 50000000.0;  // global bound on total wealth, euros
  double tax_threshold = 720000.0;
  double dwelling_rebate = 0.8;
  double nded_fraction = 0.5;  // taxable share of professional wealth
  double debt_fraction = 0.0;  // deductible debt as a share of total wealth
  Oversample oversample;
  std::uint64_t seed = 0;

  SynthConfig();  // fills the default geometric bracket systems

  void validate() const;  // throws input_error on breach
};

SynthConfig read_synth_config(const std::string& path);
SynthConfig parse_synth_config(const std::string& json_text);
std::string synth_config_json(const SynthConfig& cfg);

// A finite population with its truth: households carry id, pattern and
// covariates (weight 1, censoring fields untouched); wealth holds the true
// component levels (zero where unowned) and total their row sums.
struct Population {
  std::vector<Household> units;
  MatX wealth;  // N x kComponents
  VecX total;   // N
  std::array<std::vector<std::string>, kComponents> covariate_names;
};

// Draws each unit's pattern, covariates and log-wealth vector from the
// configured truth; a unit whose total exceeds the cap is redrawn (noise
// only), so every generated total respects it.
Population generate_population(const SynthConfig& cfg, RngStream& rng);

// Positive selection scores for every unit under cfg.oversample.
VecX sampling_scores(const Population& population, const SynthConfig& cfg);

// A without-replacement unequal-probability sample: chosen units in
// population order with design weights 1/pi, plus their truth rows.
struct Sample {
  std::vector<int> unit_rows;          // indices into the population
  std::vector<Household> households;   // weight set to 1/pi
  MatX wealth;                         // per chosen unit, true levels
  VecX total;
  std::array<std::vector<std::string>, kComponents> covariate_names;
};

// Systematic proportional-to-score selection of sample_size units: units
// whose scaled score reaches 1 enter with certainty (weight 1), the rest
// are picked by a single uniform start over the cumulated probabilities.
// Selection depends only on scores, never on wealth.  Throws input_error
// on nonpositive or nonfinite scores.
Sample draw_with_scores(const Population& population, const VecX& scores,
                        int sample_size, RngStream& rng);

// sampling_scores + draw_with_scores under the configured design.
Sample draw_sample(const Population& population, const SynthConfig& cfg,
                   RngStream& rng);

// The estimator's input: every true component level replaced by its bracket
// from the configured system, the total bracketed likewise, the tax flag
// computed from the true taxable wealth (dwelling rebated, professional
// wealth entering through its taxable share, debt deducted), and NDED/DEBT
// disclosed as known constants.  The truth never leaks into the output.
io::Dataset apply_censoring(const Sample& sample, const SynthConfig& cfg);

// Each index evaluated on the full population with unit weights: the ground
// truth that coverage experiments compare against.
VecX true_indices(const Population& population,
                  const std::vector<IndexSpec>& specs);

// Oracle-side CSV of a sample's truth: id, true per-component levels (zero
// where unowned) and the true total.
std::string truth_csv(const Sample& sample);

}  // namespace ineq::synth
