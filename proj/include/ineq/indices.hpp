#pragma once

// Design-weighted inequality indices on a realized wealth vector, plus the
// plug-in variance of their linearized versions.  All functions are pure;
// the SortedSample overloads let callers sort once and evaluate many.

#include <string>
#include <vector>

#include "ineq/types.hpp"

namespace ineq {

// Positive values t_k with positive design weights w_k, equal lengths.
struct WeightedSample {
  VecX values;
  VecX weights;
};

// One quantity of interest: mean, quantile(p), quantile_ratio(p, q),
// gini, theil, or atkinson(epsilon).
struct IndexSpec {
  enum class Kind { mean, quantile, quantile_ratio, gini, theil, atkinson };

  Kind kind = Kind::mean;
  double p = 0.0;        // quantile / ratio numerator level
  double q = 0.0;        // ratio denominator level
  double epsilon = 0.0;  // atkinson aversion, > 0 and != 1

  static IndexSpec Mean();
  static IndexSpec Quantile(double p);
  static IndexSpec QuantileRatio(double p, double q);
  static IndexSpec Gini();
  static IndexSpec Theil();
  static IndexSpec Atkinson(double epsilon);

  // Compact stable name: "mean", "p50", "p90/p10", "gini", "theil",
  // "atkinson(1.5)".  parse() accepts exactly these spellings.
  std::string name() const;
  static IndexSpec parse(const std::string& text);

  void validate() const;  // throws input_error on bad parameters
};

// Ascending view of a WeightedSample with the cumulative sums every index
// needs: per-unit cumulative weights (stable ties), tie-group CDF values,
// and tie-group upper-tail value sums.
class SortedSample {
 public:
  explicit SortedSample(const WeightedSample& s);

  Eigen::Index size() const { return values_.size(); }
  double total_weight() const { return total_weight_; }
  double total_value() const { return total_value_; }  // sum of w*t
  double weighted_mean() const { return total_value_ / total_weight_; }

  const VecX& values() const { return values_; }    // ascending
  const VecX& weights() const { return weights_; }  // matching order
  const VecX& cum_weights() const { return cum_weights_; }
  // F(t_k) = sum of weights with value <= t_k, divided by total weight.
  const VecX& cdf_at() const { return cdf_at_; }
  // B(t_k) = sum of w*t over values >= t_k, divided by total weight.
  const VecX& upper_mean_at() const { return upper_mean_at_; }

 private:
  VecX values_, weights_, cum_weights_, cdf_at_, upper_mean_at_;
  double total_weight_ = 0.0, total_value_ = 0.0;
};

double weighted_gini(const SortedSample& s);
double weighted_gini(const WeightedSample& s);

// Smallest ascending value whose cumulative weight reaches p * total weight.
double weighted_quantile(const SortedSample& s, double p);
double weighted_quantile(const WeightedSample& s, double p);

double theil(const SortedSample& s);
double theil(const WeightedSample& s);

double atkinson(const SortedSample& s, double epsilon);
double atkinson(const WeightedSample& s, double epsilon);

double evaluate_index(const IndexSpec& spec, const SortedSample& s);
double evaluate_index(const IndexSpec& spec, const WeightedSample& s);

// Batch evaluation over one shared sort.
VecX evaluate_indices(const std::vector<IndexSpec>& specs,
                      const WeightedSample& s);

// With-replacement variance of the weighted total of the index's linearized
// variable z_k:  V = m/(m-1) * sum_k (w_k z_k - mean(w z))^2.  Quantile
// densities come from a Gaussian kernel estimate (Silverman bandwidth on
// log-values).  A degenerate sample (zero density scale) sets *diagnostic
// and returns 0.
double linearized_variance(const IndexSpec& spec, const SortedSample& s,
                           std::string* diagnostic = nullptr);
double linearized_variance(const IndexSpec& spec, const WeightedSample& s,
                           std::string* diagnostic = nullptr);

}  // namespace ineq
