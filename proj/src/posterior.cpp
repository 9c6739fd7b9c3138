#include "ineq/posterior.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <string>
#include <vector>

#include "ineq/io.hpp"

namespace ineq::posterior {

namespace {

// Post-burn-in view bounds with the module's precondition errors.
long long checked_tail_start(const Eigen::Ref<const VecX>& series,
                             long long burn_in) {
  if (burn_in < 0)
    throw input_error("burn-in must be nonnegative, got " +
                      std::to_string(burn_in));
  if (burn_in >= series.size())
    throw input_error("empty post-burn-in series: burn-in " +
                      std::to_string(burn_in) + " of " +
                      std::to_string(series.size()) + " entries");
  return burn_in;
}

// Sequential left-to-right sum; posterior_mean and running_mean_trace must
// share the association order so the trace ends at the mean bitwise.
double sequential_mean(const Eigen::Ref<const VecX>& series, long long from,
                       long long count) {
  double s = 0.0;
  for (long long i = 0; i < count; ++i) s += series[from + i];
  return s / static_cast<double>(count);
}

// Linear-interpolation empirical quantile over ascending order statistics.
double interpolated_quantile(const std::vector<double>& sorted, double p) {
  const auto n = static_cast<long long>(sorted.size());
  const double h = static_cast<double>(n - 1) * p;
  const auto j = static_cast<long long>(std::floor(h));
  const std::size_t lo = static_cast<std::size_t>(std::clamp<long long>(j, 0, n - 1));
  if (lo + 1 >= sorted.size()) return sorted[lo];
  const double frac = h - static_cast<double>(j);
  return sorted[lo] + frac * (sorted[lo + 1] - sorted[lo]);
}

double sample_sd(const std::vector<double>& xs) {
  const auto n = static_cast<double>(xs.size());
  double m = 0.0;
  for (const double x : xs) m += x;
  m /= n;
  double ss = 0.0;
  for (const double x : xs) ss += (x - m) * (x - m);
  return std::sqrt(ss / (n - 1.0));
}

std::string fixed4(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", x);
  return buf;
}

}  // namespace

double posterior_mean(const Eigen::Ref<const VecX>& series, long long burn_in) {
  const long long from = checked_tail_start(series, burn_in);
  return sequential_mean(series, from, series.size() - from);
}

std::pair<double, double> symmetric_region(const Eigen::Ref<const VecX>& series,
                                           long long burn_in, double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw input_error("region level alpha must lie in (0, 1), got " +
                      io::format_double(alpha));
  const long long from = checked_tail_start(series, burn_in);
  const long long n = series.size() - from;
  if (n < 100)
    throw input_error("too few samples for a posterior region: " +
                      std::to_string(n) + " after burn-in, need at least 100");
  std::vector<double> sorted(static_cast<std::size_t>(n));
  for (long long i = 0; i < n; ++i)
    sorted[static_cast<std::size_t>(i)] = series[from + i];
  std::sort(sorted.begin(), sorted.end());
  const double l = interpolated_quantile(sorted, alpha / 2.0);
  const double u = interpolated_quantile(sorted, 1.0 - alpha / 2.0);
  if (!(l <= u))
    throw internal_error("posterior region endpoints out of order");
  return {l, u};
}

std::vector<TracePoint> running_mean_trace(const Eigen::Ref<const VecX>& series,
                                           long long burn_in) {
  const long long from = std::clamp<long long>(burn_in, 0, series.size());
  std::vector<TracePoint> trace;
  trace.reserve(static_cast<std::size_t>(series.size() - from));
  double s = 0.0;
  for (long long i = from; i < series.size(); ++i) {
    s += series[i];
    const long long n = i - from + 1;
    trace.push_back({n, s / static_cast<double>(n)});
  }
  return trace;
}

BatchMeansDiagnostic batch_means_diagnostic(const Eigen::Ref<const VecX>& series,
                                            long long burn_in, int batches) {
  if (batches < 10)
    throw input_error("batch-means diagnostic needs at least 10 batches, got " +
                      std::to_string(batches));
  const long long from = checked_tail_start(series, burn_in);
  const long long n = series.size() - from;
  if (n < batches)
    throw input_error("post-burn-in series shorter than the batch count: " +
                      std::to_string(n) + " entries for " +
                      std::to_string(batches) + " batches");
  const long long b = n / batches;
  std::vector<double> means(static_cast<std::size_t>(batches));
  for (int j = 0; j < batches; ++j)
    means[static_cast<std::size_t>(j)] =
        sequential_mean(series, from + static_cast<long long>(j) * b, b);

  BatchMeansDiagnostic out;
  out.mc_std_error = sample_sd(means) / std::sqrt(static_cast<double>(batches));

  // Half-versus-half check on the batch means (middle batch skipped when the
  // count is odd); <= keeps a constant series stabilized.
  const std::size_t half = means.size() / 2;
  const std::vector<double> first(means.begin(), means.begin() + half);
  const std::vector<double> last(means.end() - static_cast<std::ptrdiff_t>(half),
                                 means.end());
  double m1 = 0.0, m2 = 0.0;
  for (std::size_t j = 0; j < half; ++j) {
    m1 += first[j];
    m2 += last[j];
  }
  m1 /= static_cast<double>(half);
  m2 /= static_cast<double>(half);
  const double se1 = sample_sd(first) / std::sqrt(static_cast<double>(half));
  const double se2 = sample_sd(last) / std::sqrt(static_cast<double>(half));
  out.stabilized = std::abs(m1 - m2) <= 3.0 * std::hypot(se1, se2);
  return out;
}

PosteriorSummary summarize(const std::string& name,
                           const Eigen::Ref<const VecX>& series,
                           long long burn_in, double alpha) {
  PosteriorSummary s;
  s.name = name;
  s.prediction = posterior_mean(series, burn_in);
  const auto [l, u] = symmetric_region(series, burn_in, alpha);
  s.lower = l;
  s.upper = u;
  s.n_used = series.size() - burn_in;
  return s;
}

std::string report_csv(const std::vector<PosteriorSummary>& rows) {
  std::string out = "index,prediction,lower,upper\n";
  for (const PosteriorSummary& r : rows) {
    out += r.name;
    out += ',';
    out += io::format_double(r.prediction);
    out += ',';
    out += io::format_double(r.lower);
    out += ',';
    out += io::format_double(r.upper);
    out += '\n';
  }
  return out;
}

std::string report_text(const std::vector<PosteriorSummary>& rows) {
  const std::array<std::string, 4> headers{"index", "prediction", "lower",
                                           "upper"};
  std::vector<std::array<std::string, 4>> cells;
  cells.reserve(rows.size());
  for (const PosteriorSummary& r : rows)
    cells.push_back(
        {r.name, fixed4(r.prediction), fixed4(r.lower), fixed4(r.upper)});

  std::array<std::size_t, 4> width{};
  for (std::size_t c = 0; c < 4; ++c) {
    width[c] = headers[c].size();
    for (const auto& row : cells) width[c] = std::max(width[c], row[c].size());
  }
  const auto emit = [&](std::string& out, const std::array<std::string, 4>& row) {
    // Name column left-aligned, numbers right-aligned, two-space gutter.
    out += row[0];
    out.append(width[0] - row[0].size(), ' ');
    for (std::size_t c = 1; c < 4; ++c) {
      out.append(2 + width[c] - row[c].size(), ' ');
      out += row[c];
    }
    out += '\n';
  };
  std::string out;
  emit(out, headers);
  for (const auto& row : cells) emit(out, row);
  return out;
}

}  // namespace ineq::posterior
