#include "ineq/indices.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <numeric>
#include <sstream>

#include "ineq/random.hpp"  // normal_pdf for the kernel density

namespace ineq {

namespace {

std::string format_level(double p) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "p%g", 100.0 * p);
  return buf;
}

double parse_level(const std::string& text) {
  if (text.size() < 2 || text[0] != 'p')
    throw input_error("unknown index spec: " + text);
  std::size_t used = 0;
  double pct;
  try {
    pct = std::stod(text.substr(1), &used);
  } catch (const std::exception&) {
    throw input_error("unknown index spec: " + text);
  }
  if (used + 1 != text.size())
    throw input_error("unknown index spec: " + text);
  return pct / 100.0;
}

}  // namespace

IndexSpec IndexSpec::Mean() { return {Kind::mean, 0, 0, 0}; }
IndexSpec IndexSpec::Quantile(double p) { return {Kind::quantile, p, 0, 0}; }
IndexSpec IndexSpec::QuantileRatio(double p, double q) {
  return {Kind::quantile_ratio, p, q, 0};
}
IndexSpec IndexSpec::Gini() { return {Kind::gini, 0, 0, 0}; }
IndexSpec IndexSpec::Theil() { return {Kind::theil, 0, 0, 0}; }
IndexSpec IndexSpec::Atkinson(double epsilon) {
  return {Kind::atkinson, 0, 0, epsilon};
}

std::string IndexSpec::name() const {
  switch (kind) {
    case Kind::mean:
      return "mean";
    case Kind::quantile:
      return format_level(p);
    case Kind::quantile_ratio:
      return format_level(p) + "/" + format_level(q);
    case Kind::gini:
      return "gini";
    case Kind::theil:
      return "theil";
    case Kind::atkinson: {
      char buf[48];
      std::snprintf(buf, sizeof(buf), "atkinson(%g)", epsilon);
      return buf;
    }
  }
  throw internal_error("index spec: unknown kind");
}

IndexSpec IndexSpec::parse(const std::string& text) {
  IndexSpec spec;
  if (text == "mean") {
    spec = Mean();
  } else if (text == "gini") {
    spec = Gini();
  } else if (text == "theil") {
    spec = Theil();
  } else if (text.rfind("atkinson(", 0) == 0 && text.back() == ')') {
    std::size_t used = 0;
    double eps;
    const std::string inner = text.substr(9, text.size() - 10);
    try {
      eps = std::stod(inner, &used);
    } catch (const std::exception&) {
      throw input_error("unknown index spec: " + text);
    }
    if (used != inner.size()) throw input_error("unknown index spec: " + text);
    spec = Atkinson(eps);
  } else if (const auto slash = text.find('/'); slash != std::string::npos) {
    spec = QuantileRatio(parse_level(text.substr(0, slash)),
                         parse_level(text.substr(slash + 1)));
  } else {
    spec = Quantile(parse_level(text));
  }
  spec.validate();
  return spec;
}

void IndexSpec::validate() const {
  switch (kind) {
    case Kind::quantile:
      if (!(p > 0.0 && p < 1.0))
        throw input_error("index spec: quantile level must lie in (0,1)");
      break;
    case Kind::quantile_ratio:
      if (!(p > 0.0 && p < 1.0 && q > 0.0 && q < 1.0))
        throw input_error("index spec: ratio levels must lie in (0,1)");
      break;
    case Kind::atkinson:
      if (!(epsilon > 0.0) || std::fabs(epsilon - 1.0) < 1e-12)
        throw input_error(
            "index spec: atkinson aversion must be positive and != 1");
      break;
    default:
      break;
  }
}

SortedSample::SortedSample(const WeightedSample& s) {
  const Eigen::Index m = s.values.size();
  if (m == 0) throw input_error("weighted sample: empty");
  if (s.weights.size() != m)
    throw input_error("weighted sample: values/weights length mismatch");
  for (Eigen::Index k = 0; k < m; ++k) {
    if (!(s.values[k] > 0.0) || !std::isfinite(s.values[k]))
      throw input_error("weighted sample: values must be positive and finite");
    if (!(s.weights[k] > 0.0) || !std::isfinite(s.weights[k]))
      throw input_error("weighted sample: weights must be positive and finite");
  }

  std::vector<Eigen::Index> order(m);
  std::iota(order.begin(), order.end(), Eigen::Index(0));
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return s.values[a] < s.values[b];
  });

  values_.resize(m);
  weights_.resize(m);
  for (Eigen::Index k = 0; k < m; ++k) {
    values_[k] = s.values[order[k]];
    weights_[k] = s.weights[order[k]];
  }

  cum_weights_.resize(m);
  double acc = 0.0;
  for (Eigen::Index k = 0; k < m; ++k) {
    acc += weights_[k];
    cum_weights_[k] = acc;
  }
  total_weight_ = acc;
  total_value_ = values_.cwiseProduct(weights_).sum();

  // Tie groups share F(t) (cumulative weight through the end of the group)
  // and B(t) (upper-tail value mean from the start of the group).
  cdf_at_.resize(m);
  upper_mean_at_.resize(m);
  VecX suffix_value(m + 1);
  suffix_value[m] = 0.0;
  for (Eigen::Index k = m - 1; k >= 0; --k)
    suffix_value[k] = suffix_value[k + 1] + weights_[k] * values_[k];
  Eigen::Index lo = 0;
  while (lo < m) {
    Eigen::Index hi = lo;
    while (hi + 1 < m && values_[hi + 1] == values_[lo]) ++hi;
    for (Eigen::Index k = lo; k <= hi; ++k) {
      cdf_at_[k] = cum_weights_[hi] / total_weight_;
      upper_mean_at_[k] = suffix_value[lo] / total_weight_;
    }
    lo = hi + 1;
  }
}

double weighted_gini(const SortedSample& s) {
  const Eigen::Index m = s.size();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < m; ++k)
    acc += (2.0 * s.cum_weights()[k] - s.weights()[k]) * s.weights()[k] *
           s.values()[k];
  return acc / (s.total_weight() * s.total_value()) - 1.0;
}

double weighted_quantile(const SortedSample& s, double p) {
  if (!(p > 0.0 && p < 1.0))
    throw input_error("weighted quantile: level must lie in (0,1)");
  const double target = p * s.total_weight();
  const VecX& cw = s.cum_weights();
  // First unit whose cumulative weight reaches the target.
  Eigen::Index lo = 0, hi = s.size() - 1;
  while (lo < hi) {
    const Eigen::Index mid = (lo + hi) / 2;
    if (cw[mid] >= target)
      hi = mid;
    else
      lo = mid + 1;
  }
  return s.values()[lo];
}

double theil(const SortedSample& s) {
  const double mu = s.weighted_mean();
  double acc = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k) {
    const double r = s.values()[k] / mu;
    acc += s.weights()[k] * r * std::log(r);
  }
  return acc / s.total_weight();
}

double atkinson(const SortedSample& s, double epsilon) {
  IndexSpec::Atkinson(epsilon).validate();
  const double one_minus = 1.0 - epsilon;
  double acc = 0.0;
  for (Eigen::Index k = 0; k < s.size(); ++k)
    acc += s.weights()[k] * std::pow(s.values()[k], one_minus);
  const double ede = std::pow(acc / s.total_weight(), 1.0 / one_minus);
  return 1.0 - ede / s.weighted_mean();
}

double evaluate_index(const IndexSpec& spec, const SortedSample& s) {
  spec.validate();
  switch (spec.kind) {
    case IndexSpec::Kind::mean:
      return s.weighted_mean();
    case IndexSpec::Kind::quantile:
      return weighted_quantile(s, spec.p);
    case IndexSpec::Kind::quantile_ratio: {
      const double denom = weighted_quantile(s, spec.q);
      if (denom == 0.0)
        throw input_error("quantile ratio: denominator quantile is zero");
      return weighted_quantile(s, spec.p) / denom;
    }
    case IndexSpec::Kind::gini:
      return weighted_gini(s);
    case IndexSpec::Kind::theil:
      return theil(s);
    case IndexSpec::Kind::atkinson:
      return atkinson(s, spec.epsilon);
  }
  throw internal_error("index spec: unknown kind");
}

VecX evaluate_indices(const std::vector<IndexSpec>& specs,
                      const WeightedSample& s) {
  const SortedSample sorted(s);
  VecX out(static_cast<Eigen::Index>(specs.size()));
  for (std::size_t i = 0; i < specs.size(); ++i)
    out[static_cast<Eigen::Index>(i)] = evaluate_index(specs[i], sorted);
  return out;
}

namespace {

// Kernel density of the value distribution at level x > 0: Gaussian KDE on
// log-values with Silverman's bandwidth, back-transformed.  Returns 0 and
// sets *diagnostic when the log-scale spread is degenerate.
double kde_density(const SortedSample& s, double x, std::string* diagnostic) {
  const Eigen::Index m = s.size();
  const double n_total = s.total_weight();
  VecX logs(m);
  for (Eigen::Index k = 0; k < m; ++k) logs[k] = std::log(s.values()[k]);

  const double log_mean = logs.cwiseProduct(s.weights()).sum() / n_total;
  double var = 0.0;
  for (Eigen::Index k = 0; k < m; ++k)
    var += s.weights()[k] * (logs[k] - log_mean) * (logs[k] - log_mean);
  const double sd = std::sqrt(var / n_total);

  // Weighted IQR of the logs; the log transform preserves the sort order,
  // so the cumulative weights can be reused directly.
  const double target25 = 0.25 * n_total, target75 = 0.75 * n_total;
  double q25 = logs[m - 1], q75 = logs[m - 1];
  for (Eigen::Index k = 0; k < m; ++k)
    if (s.cum_weights()[k] >= target25) {
      q25 = logs[k];
      break;
    }
  for (Eigen::Index k = 0; k < m; ++k)
    if (s.cum_weights()[k] >= target75) {
      q75 = logs[k];
      break;
    }

  double scale = 0.0;
  if (sd > 0.0) scale = sd;
  const double iqr_scale = (q75 - q25) / 1.34;
  if (iqr_scale > 0.0) scale = (scale > 0.0) ? std::min(scale, iqr_scale) : iqr_scale;
  if (!(scale > 0.0)) {
    if (diagnostic)
      *diagnostic = "degenerate sample: zero log-scale spread, density unavailable";
    return 0.0;
  }

  const double h = 0.9 * scale * std::pow(static_cast<double>(m), -0.2);
  const double y = std::log(x);
  double g = 0.0;
  for (Eigen::Index k = 0; k < m; ++k)
    g += s.weights()[k] * normal_pdf((y - logs[k]) / h);
  return g / (n_total * h * x);
}

// Linearized variable z_k of the index, in the sorted order of s.
// Influence of the quantile and ratio kinds requires a density; failure is
// reported through *degenerate.
VecX linearized_variable(const IndexSpec& spec, const SortedSample& s,
                         bool* degenerate, std::string* diagnostic) {
  const Eigen::Index m = s.size();
  const double n_total = s.total_weight();
  const double y_total = s.total_value();
  const double mu = s.weighted_mean();
  VecX z(m);

  switch (spec.kind) {
    case IndexSpec::Kind::mean: {
      for (Eigen::Index k = 0; k < m; ++k)
        z[k] = (s.values()[k] - mu) / n_total;
      return z;
    }
    case IndexSpec::Kind::quantile: {
      const double qp = weighted_quantile(s, spec.p);
      const double f = kde_density(s, qp, diagnostic);
      if (!(f > 0.0)) {
        *degenerate = true;
        return VecX::Zero(m);
      }
      for (Eigen::Index k = 0; k < m; ++k) {
        const double ind = (s.values()[k] <= qp) ? 1.0 : 0.0;
        z[k] = -(ind - spec.p) / (n_total * f);
      }
      return z;
    }
    case IndexSpec::Kind::quantile_ratio: {
      const VecX zp = linearized_variable(IndexSpec::Quantile(spec.p), s,
                                          degenerate, diagnostic);
      const VecX zq = linearized_variable(IndexSpec::Quantile(spec.q), s,
                                          degenerate, diagnostic);
      if (*degenerate) return VecX::Zero(m);
      const double qp = weighted_quantile(s, spec.p);
      const double qq = weighted_quantile(s, spec.q);
      return (zp / qq - (qp / (qq * qq)) * zq).eval();
    }
    case IndexSpec::Kind::gini: {
      const double g = weighted_gini(s);
      double a = 0.0;
      for (Eigen::Index k = 0; k < m; ++k)
        a += s.weights()[k] * s.values()[k] * s.cdf_at()[k];
      for (Eigen::Index k = 0; k < m; ++k) {
        const double t = s.values()[k];
        z[k] = (2.0 / y_total) * (t * s.cdf_at()[k] + s.upper_mean_at()[k] -
                                  a / n_total - 0.5 * (g + 1.0) * t);
      }
      return z;
    }
    case IndexSpec::Kind::theil: {
      const double t_index = theil(s);
      for (Eigen::Index k = 0; k < m; ++k) {
        const double r = s.values()[k] / mu;
        z[k] = (r * (std::log(r) - t_index - 1.0) + 1.0) / n_total;
      }
      return z;
    }
    case IndexSpec::Kind::atkinson: {
      const double one_minus = 1.0 - spec.epsilon;
      double pow_total = 0.0;
      for (Eigen::Index k = 0; k < m; ++k)
        pow_total += s.weights()[k] * std::pow(s.values()[k], one_minus);
      const double a_eps = atkinson(s, spec.epsilon);
      for (Eigen::Index k = 0; k < m; ++k) {
        const double t = s.values()[k];
        z[k] = (1.0 - a_eps) *
               ((t - mu) / (n_total * mu) -
                (std::pow(t, one_minus) / pow_total - 1.0 / n_total) / one_minus);
      }
      return z;
    }
  }
  throw internal_error("index spec: unknown kind");
}

}  // namespace

double linearized_variance(const IndexSpec& spec, const SortedSample& s,
                           std::string* diagnostic) {
  spec.validate();
  const Eigen::Index m = s.size();
  if (m < 2)
    throw input_error("linearized variance: needs at least two units");
  bool degenerate = false;
  const VecX z = linearized_variable(spec, s, &degenerate, diagnostic);
  if (degenerate) return 0.0;
  const VecX wz = s.weights().cwiseProduct(z);
  const double mean_wz = wz.mean();
  const double ss = (wz.array() - mean_wz).square().sum();
  return ss * static_cast<double>(m) / static_cast<double>(m - 1);
}

double weighted_gini(const WeightedSample& s) {
  return weighted_gini(SortedSample(s));
}
double weighted_quantile(const WeightedSample& s, double p) {
  return weighted_quantile(SortedSample(s), p);
}
double theil(const WeightedSample& s) { return theil(SortedSample(s)); }
double atkinson(const WeightedSample& s, double epsilon) {
  return atkinson(SortedSample(s), epsilon);
}
double evaluate_index(const IndexSpec& spec, const WeightedSample& s) {
  return evaluate_index(spec, SortedSample(s));
}
double linearized_variance(const IndexSpec& spec, const WeightedSample& s,
                           std::string* diagnostic) {
  return linearized_variance(spec, SortedSample(s), diagnostic);
}

}  // namespace ineq
