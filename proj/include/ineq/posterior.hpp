#pragma once

// Decision-maker outputs computed from a recorded index series: ergodic
// posterior predictions, equal-tail posterior regions, convergence traces,
// a batch-means Monte Carlo error diagnostic, and the report table.  All
// functions are pure; a series column can be summarized independently of
// the others, so concurrent summarization across indices is safe.

#include <string>
#include <utility>
#include <vector>

#include "ineq/types.hpp"

namespace ineq::posterior {

// One report row: the quadratic-loss prediction (ergodic mean after
// burn-in) and the equal-tail region at level 1-alpha over the same
// n_used = T-B entries.  lower <= upper always; the prediction is not
// forced inside the region (it can exit an empirical quantile interval
// only pathologically).
struct PosteriorSummary {
  std::string name;
  double prediction = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  long long n_used = 0;
};

// Arithmetic mean of series entries after the first burn_in.  Summation is
// sequential in series order, so the result equals the last entry of
// running_mean_trace bitwise.  Throws input_error when burn-in is negative
// or no entries remain.
double posterior_mean(const Eigen::Ref<const VecX>& series, long long burn_in);

// Equal-tail region: the empirical alpha/2 and 1-alpha/2 quantiles of the
// post-burn-in entries, using the linear-interpolation quantile definition
// q(p) = x_(j) + frac * (x_(j+1) - x_(j)) with j = floor((n-1) p) over the
// ascending order statistics x_(0..n-1).  Requires at least 100 post-burn-in
// entries and alpha in (0, 1); throws input_error otherwise.
std::pair<double, double> symmetric_region(const Eigen::Ref<const VecX>& series,
                                           long long burn_in, double alpha);

// Cumulative mean over the first n post-burn-in entries, n = 1..T-B.
struct TracePoint {
  long long n = 0;
  double mean = 0.0;
};

// Convergence trace of the ergodic average; total on any input (burn-in is
// clamped to the series length, so an over-long burn-in yields an empty
// trace).  The last entry equals posterior_mean bitwise.
std::vector<TracePoint> running_mean_trace(const Eigen::Ref<const VecX>& series,
                                           long long burn_in);

struct BatchMeansDiagnostic {
  double mc_std_error = 0.0;  // standard error of the post-burn-in mean
  bool stabilized = false;    // first and last half agree within 3 SEs
};

// Batch-means Monte Carlo error estimate: the post-burn-in entries are cut
// into `batches` equal contiguous batches (a remainder shorter than one
// batch is dropped) and the mean's standard error is the batch-mean
// standard deviation over sqrt(batches).  The stabilization check compares
// the first half of the batch means against the last half (middle batch
// skipped when the count is odd): stabilized iff the half means differ by
// at most 3 * sqrt(se1^2 + se2^2), each half's standard error taken over
// its own batch means.  A constant series is stabilized with zero error.
// Requires batches >= 10 and at least `batches` post-burn-in entries.
BatchMeansDiagnostic batch_means_diagnostic(const Eigen::Ref<const VecX>& series,
                                            long long burn_in, int batches);

// Prediction, region and sample count for one named series.
PosteriorSummary summarize(const std::string& name,
                           const Eigen::Ref<const VecX>& series,
                           long long burn_in, double alpha);

// Report renderings, rows in the given order.  The CSV uses shortest
// round-trip doubles (columns index,prediction,lower,upper); the text table
// aligns columns and prints four decimals.  An empty row set renders the
// header alone.
std::string report_csv(const std::vector<PosteriorSummary>& rows);
std::string report_text(const std::vector<PosteriorSummary>& rows);

}  // namespace ineq::posterior
