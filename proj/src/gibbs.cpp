#include "ineq/gibbs.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <ostream>
#include <thread>
#include <utility>

#include <Eigen/Dense>

namespace ineq::gibbs {

namespace {

// Width below which an inverted conditional interval is treated as a
// numerical graze (pinned at the midpoint) rather than an invariant breach.
constexpr double kGrazeTol = 1e-6;

std::string fmt(double x) { return io::format_double(x); }

std::array<bool, kComponents> owned_flags_of(int pattern_index) {
  return {true, (pattern_index & 1) != 0, (pattern_index & 2) != 0,
          (pattern_index & 4) != 0, true};
}

// Design rows for one component: households owning l stacked over the
// component's slope columns plus one intercept dummy per present pattern.
struct ComponentDesign {
  MatX X;
  VecX y;                        // log feasible point of component l
  std::vector<int> global_cols;  // layout column ids, X column order
  std::vector<int> members;      // household indices, X row order
};

ComponentDesign component_design(const PreparedData& data, int l) {
  ComponentDesign cd;
  for (int k = 0; k < static_cast<int>(data.households.size()); ++k)
    if (data.households[k].household.pattern.owned[l]) cd.members.push_back(k);
  if (cd.members.empty()) return cd;

  for (int col : data.layout.slope_columns[l]) cd.global_cols.push_back(col);
  for (int i = 0; i < kPatterns; ++i)
    if (data.layout.intercept_column[i][l] != -1)
      cd.global_cols.push_back(data.layout.intercept_column[i][l]);

  const int n = static_cast<int>(cd.members.size());
  const int cols = static_cast<int>(cd.global_cols.size());
  const int s = static_cast<int>(data.layout.slope_columns[l].size());
  cd.X = MatX::Zero(n, cols);
  cd.y = VecX::Zero(n);
  for (int r = 0; r < n; ++r) {
    const PreparedHousehold& ph = data.households[cd.members[r]];
    const VecX& x = ph.household.covariates[l];
    cd.X.block(r, 0, 1, s) = x.tail(s).transpose();
    // The intercept dummy of this household's pattern.
    const int own = data.layout.intercept_column[ph.household.pattern.pattern_id - 1][l];
    for (int c = s; c < cols; ++c)
      if (cd.global_cols[c] == own) cd.X(r, c) = 1.0;
    int j = 0;
    for (int q = 0; q < l; ++q)
      if (ph.household.pattern.owned[q]) ++j;
    cd.y[r] = ph.log_feasible[j];
  }
  return cd;
}

}  // namespace

int PreparedData::pattern_dim(int i) const {
  return 2 + (i & 1) + ((i >> 1) & 1) + ((i >> 2) & 1);
}

PreparedData prepare(const io::Dataset& data, const RunConfig& cfg) {
  cfg.validate();
  if (data.households.empty()) throw input_error("no households in dataset");

  PreparedData out;
  for (int l = 0; l < kComponents; ++l)
    out.dims[l] = 1 + static_cast<int>(data.covariate_names[l].size());

  out.households.reserve(data.households.size());
  for (const Household& h : data.households) {
    const auto violations = validate_household(h);
    if (!violations.empty()) {
      std::string msg = "household '" + h.id + "':";
      for (const Violation& v : violations)
        msg += " [" + v.field + ": " + v.rule + "]";
      throw input_error(msg);
    }
    for (int l = 0; l < kComponents; ++l) {
      if (!h.pattern.owned[l]) continue;
      if (h.covariates[l].size() != out.dims[l])
        throw input_error("household '" + h.id + "': component " +
                          std::to_string(l + 1) + " has " +
                          std::to_string(h.covariates[l].size()) +
                          " covariates, dataset declares " +
                          std::to_string(out.dims[l]));
    }

    PreparedHousehold ph;
    ph.household = h;
    try {
      ph.constraints = tighten(build_constraints(h, cfg));
    } catch (const infeasible_error& e) {
      throw infeasible_error("household '" + h.id + "': " + e.what());
    }
    VecX w;
    try {
      w = feasible_point(ph.constraints);
    } catch (const internal_error& e) {
      throw internal_error("household '" + h.id + "': " + e.what());
    }
    ph.log_feasible = VecX::Zero(h.pattern.size);
    int j = 0;
    for (int l = 0; l < kComponents; ++l) {
      if (!h.pattern.owned[l]) continue;
      if (!(w[l] > 0.0))
        throw internal_error("household '" + h.id + "': feasible point has a " +
                             "nonpositive owned component " + std::to_string(l + 1));
      ph.log_feasible[j++] = std::log(w[l]);
    }
    out.households.push_back(std::move(ph));
  }

  for (int k = 0; k < static_cast<int>(out.households.size()); ++k)
    out.groups[out.households[k].household.pattern.pattern_id - 1].push_back(k);

  // Minimum group size: with the improper prior, the covariance conditional
  // is proper only when the group provides more observations than parameters
  // its rows touch (p_i residual dimensions plus the slope columns used).
  for (int i = 0; i < kPatterns; ++i) {
    if (out.groups[i].empty()) continue;
    const auto owned = owned_flags_of(i);
    int slope_cols = 0;
    for (int l = 0; l < kComponents; ++l)
      if (owned[l]) slope_cols += out.dims[l] - 1;
    const int need = out.pattern_dim(i) + slope_cols;
    if (static_cast<int>(out.groups[i].size()) <= need)
      throw input_error(
          "pattern group too small for proper posterior (pattern " +
          std::to_string(i + 1) + ": " + std::to_string(out.groups[i].size()) +
          " households, needs more than " + std::to_string(need) + ")");
  }

  // Column layout: slopes for components that actually occur, then intercepts
  // per present (pattern, component) pair.
  DesignLayout& lay = out.layout;
  std::array<bool, kComponents> component_present{};
  for (int i = 0; i < kPatterns; ++i) {
    if (out.groups[i].empty()) continue;
    const auto owned = owned_flags_of(i);
    for (int l = 0; l < kComponents; ++l) component_present[l] = component_present[l] || owned[l];
  }
  for (int l = 0; l < kComponents; ++l) {
    if (!component_present[l]) continue;
    for (int j = 0; j < out.dims[l] - 1; ++j) {
      lay.slope_columns[l].push_back(lay.columns++);
      lay.labels.push_back("slope:c" + std::to_string(l + 1) + ":" +
                           data.covariate_names[l][static_cast<std::size_t>(j)]);
    }
  }
  for (int i = 0; i < kPatterns; ++i) {
    if (out.groups[i].empty()) continue;
    const auto owned = owned_flags_of(i);
    for (int l = 0; l < kComponents; ++l) {
      if (!owned[l]) continue;
      lay.intercept_column[i][l] = lay.columns++;
      lay.labels.push_back("intercept:p" + std::to_string(i + 1) + ":c" +
                           std::to_string(l + 1));
    }
  }

  // Per-pattern active columns (slopes of owned components, then own
  // intercepts) and each household's compressed design block.
  for (int i = 0; i < kPatterns; ++i) {
    if (out.groups[i].empty()) continue;
    const auto owned = owned_flags_of(i);
    std::vector<int>& active = out.active_columns[i];
    for (int l = 0; l < kComponents; ++l)
      if (owned[l])
        for (int col : lay.slope_columns[l]) active.push_back(col);
    for (int l = 0; l < kComponents; ++l)
      if (owned[l]) active.push_back(lay.intercept_column[i][l]);

    for (int k : out.groups[i]) {
      PreparedHousehold& ph = out.households[k];
      const int p = out.pattern_dim(i);
      ph.design = MatX::Zero(p, static_cast<int>(active.size()));
      int row = 0;
      for (int l = 0; l < kComponents; ++l) {
        if (!owned[l]) continue;
        for (int c = 0; c < static_cast<int>(active.size()); ++c) {
          const int col = active[c];
          if (col == lay.intercept_column[i][l]) ph.design(row, c) = 1.0;
          for (int j = 0; j < static_cast<int>(lay.slope_columns[l].size()); ++j)
            if (col == lay.slope_columns[l][j])
              ph.design(row, c) = ph.household.covariates[l][j + 1];
        }
        ++row;
      }
    }
  }

  // Full column rank per component; the stacked design is block-diagonal in
  // the components, so per-component rank implies a SPD joint precision.
  for (int l = 0; l < kComponents; ++l) {
    if (!component_present[l]) continue;
    const ComponentDesign cd = component_design(out, l);
    Eigen::ColPivHouseholderQR<MatX> qr(cd.X);
    if (qr.rank() < cd.X.cols()) {
      const auto& perm = qr.colsPermutation().indices();
      const int dependent = perm[static_cast<int>(qr.rank())];
      throw input_error("design for component " + std::to_string(l + 1) +
                        " is rank-deficient; collinear column: " +
                        lay.labels[static_cast<std::size_t>(
                            cd.global_cols[static_cast<std::size_t>(dependent)])]);
    }
  }
  return out;
}

ConditionalNormal conditional_normal(const VecX& mu, const MatX& precision,
                                     int j, const VecX& z) {
  const double qjj = precision(j, j);
  if (!(qjj > 0.0))
    throw internal_error("conditional normal: nonpositive diagonal precision");
  const VecX d = z - mu;
  const double cross = precision.row(j).dot(d) - qjj * d[j];
  return {mu[j] - cross / qjj, 1.0 / qjj};
}

GibbsSampler::GibbsSampler(const PreparedData& data, const RunConfig& cfg,
                           int jobs)
    : data_(data),
      cfg_(cfg),
      jobs_(std::max(1, jobs)),
      theta_rng_(cfg.seed, 1),
      error_rng_(cfg.seed, 2) {
  household_rngs_.reserve(data_.households.size());
  for (std::size_t k = 0; k < data_.households.size(); ++k)
    household_rngs_.emplace_back(cfg.seed, 100 + static_cast<std::uint64_t>(k));
}

VecX GibbsSampler::household_mean(int k) const {
  const PreparedHousehold& ph = data_.households[static_cast<std::size_t>(k)];
  const ParameterSet& th = state_.theta;
  const int i = ph.household.pattern.pattern_id - 1;
  VecX mu(ph.household.pattern.size);
  int j = 0;
  for (int l = 0; l < kComponents; ++l) {
    if (!ph.household.pattern.owned[l]) continue;
    double m = th.intercepts[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
    const int s = data_.dims[l] - 1;
    if (s > 0) m += th.slopes[l].dot(ph.household.covariates[l].tail(s));
    mu[j++] = m;
  }
  return mu;
}

void GibbsSampler::refresh_precision() {
  for (int i = 0; i < kPatterns; ++i) {
    if (!data_.pattern_present(i)) continue;
    const MatX& cov = state_.theta.covariances[static_cast<std::size_t>(i)];
    Eigen::LLT<MatX> llt(cov);
    if (llt.info() != Eigen::Success)
      throw internal_error("covariance for pattern " + std::to_string(i + 1) +
                           " is not positive definite");
    MatX q = llt.solve(MatX::Identity(cov.rows(), cov.cols()));
    precision_[static_cast<std::size_t>(i)] = 0.5 * (q + q.transpose());
  }
}

void GibbsSampler::init() {
  const int m = static_cast<int>(data_.households.size());
  state_ = ChainState{};
  state_.latent_log_wealth.resize(static_cast<std::size_t>(m));
  for (int k = 0; k < m; ++k)
    state_.latent_log_wealth[static_cast<std::size_t>(k)] =
        data_.households[static_cast<std::size_t>(k)].log_feasible;
  state_.sampling_error = 0.0;
  sweep_index_ = 0;

  for (auto& row : state_.theta.intercepts)
    row.fill(std::numeric_limits<double>::quiet_NaN());

  // Ordinary least squares of the log feasible points, per component.
  for (int l = 0; l < kComponents; ++l) {
    state_.theta.slopes[l] = VecX::Zero(data_.dims[l] - 1);
    const ComponentDesign cd = component_design(data_, l);
    if (cd.members.empty()) continue;
    const VecX beta = cd.X.colPivHouseholderQr().solve(cd.y);
    for (int c = 0; c < static_cast<int>(cd.global_cols.size()); ++c) {
      const int col = cd.global_cols[static_cast<std::size_t>(c)];
      bool is_slope = false;
      for (int j = 0; j < static_cast<int>(data_.layout.slope_columns[l].size()); ++j)
        if (data_.layout.slope_columns[l][static_cast<std::size_t>(j)] == col) {
          state_.theta.slopes[l][j] = beta[c];
          is_slope = true;
        }
      if (is_slope) continue;
      for (int i = 0; i < kPatterns; ++i)
        if (data_.layout.intercept_column[i][l] == col)
          state_.theta.intercepts[static_cast<std::size_t>(i)]
                                 [static_cast<std::size_t>(l)] = beta[c];
    }
  }

  // Pooled within-pattern residual covariances, ridged if singular.
  for (int i = 0; i < kPatterns; ++i) {
    if (!data_.pattern_present(i)) continue;
    const int p = data_.pattern_dim(i);
    MatX scatter = MatX::Zero(p, p);
    for (int k : data_.groups[static_cast<std::size_t>(i)]) {
      const VecX u = state_.latent_log_wealth[static_cast<std::size_t>(k)] -
                     household_mean(k);
      scatter.noalias() += u * u.transpose();
    }
    MatX cov = scatter / static_cast<double>(data_.groups[static_cast<std::size_t>(i)].size());
    if (Eigen::LLT<MatX>(cov).info() != Eigen::Success)
      cov += 1e-6 * MatX::Identity(p, p);
    if (Eigen::LLT<MatX>(cov).info() != Eigen::Success)
      throw internal_error("initial covariance for pattern " +
                           std::to_string(i + 1) + " singular even after ridge");
    state_.theta.covariances[static_cast<std::size_t>(i)] = std::move(cov);
  }
  refresh_precision();
}

void GibbsSampler::update_covariances() {
  for (int i = 0; i < kPatterns; ++i) {
    if (!data_.pattern_present(i)) continue;
    const auto& group = data_.groups[static_cast<std::size_t>(i)];
    const int p = data_.pattern_dim(i);
    MatX scatter = MatX::Zero(p, p);
    for (int k : group) {
      const VecX u = state_.latent_log_wealth[static_cast<std::size_t>(k)] -
                     household_mean(k);
      scatter.noalias() += u * u.transpose();
    }
    if (Eigen::LLT<MatX>(scatter).info() != Eigen::Success)
      throw internal_error("residual scatter matrix for pattern " +
                           std::to_string(i + 1) +
                           " is singular (degenerate latent state)");
    state_.theta.covariances[static_cast<std::size_t>(i)] = draw_inverse_wishart(
        theta_rng_, static_cast<double>(group.size()), scatter);
  }
  refresh_precision();
}

VecX GibbsSampler::stacked_coefficients() const {
  return flatten_theta(state_.theta, data_).head(data_.layout.columns);
}

void GibbsSampler::set_stacked_coefficients(const VecX& gamma) {
  if (gamma.size() != data_.layout.columns)
    throw internal_error("stacked coefficient vector has wrong dimension");
  for (int l = 0; l < kComponents; ++l)
    for (int j = 0; j < static_cast<int>(data_.layout.slope_columns[l].size()); ++j)
      state_.theta.slopes[l][j] =
          gamma[data_.layout.slope_columns[l][static_cast<std::size_t>(j)]];
  for (int i = 0; i < kPatterns; ++i)
    for (int l = 0; l < kComponents; ++l)
      if (data_.layout.intercept_column[i][l] != -1)
        state_.theta.intercepts[static_cast<std::size_t>(i)]
                               [static_cast<std::size_t>(l)] =
            gamma[data_.layout.intercept_column[i][l]];
}

void GibbsSampler::coefficient_conditional(VecX* mean, MatX* precision) const {
  const int D = data_.layout.columns;
  MatX lambda = MatX::Zero(D, D);
  VecX rhs = VecX::Zero(D);
  for (int i = 0; i < kPatterns; ++i) {
    if (!data_.pattern_present(i)) continue;
    const MatX& q = precision_[static_cast<std::size_t>(i)];
    const auto& active = data_.active_columns[static_cast<std::size_t>(i)];
    const int a = static_cast<int>(active.size());
    for (int k : data_.groups[static_cast<std::size_t>(i)]) {
      const PreparedHousehold& ph = data_.households[static_cast<std::size_t>(k)];
      const MatX bq = ph.design.transpose() * q;  // a x p
      const MatX local = bq * ph.design;          // a x a
      const VecX lrhs = bq * state_.latent_log_wealth[static_cast<std::size_t>(k)];
      for (int r = 0; r < a; ++r) {
        rhs[active[static_cast<std::size_t>(r)]] += lrhs[r];
        for (int c = 0; c < a; ++c)
          lambda(active[static_cast<std::size_t>(r)],
                 active[static_cast<std::size_t>(c)]) += local(r, c);
      }
    }
  }
  Eigen::LLT<MatX> llt(lambda);
  if (llt.info() != Eigen::Success) {
    Eigen::ColPivHouseholderQR<MatX> qr(lambda);
    std::string column = "(none identified)";
    if (qr.rank() < lambda.cols())
      column = data_.layout.labels[static_cast<std::size_t>(
          qr.colsPermutation().indices()[static_cast<int>(qr.rank())])];
    throw internal_error("coefficient precision singular; deficient column: " +
                         column);
  }
  *precision = std::move(lambda);
  *mean = llt.solve(rhs);
}

void GibbsSampler::update_coefficients() {
  VecX mean;
  MatX lambda;
  coefficient_conditional(&mean, &lambda);
  Eigen::LLT<MatX> llt(lambda);
  VecX z(mean.size());
  for (Eigen::Index d = 0; d < z.size(); ++d) z[d] = theta_rng_.standard_normal();
  // gamma = mean + U^-1 z has covariance (U' U)^-1 = Lambda^-1.
  const VecX gamma = mean + llt.matrixU().solve(z);
  set_stacked_coefficients(gamma);
}

void GibbsSampler::update_household(int k, long long /*sweep_no*/) {
  const PreparedHousehold& ph = data_.households[static_cast<std::size_t>(k)];
  const int i = ph.household.pattern.pattern_id - 1;
  const MatX& q = precision_[static_cast<std::size_t>(i)];
  RngStream& rng = household_rngs_[static_cast<std::size_t>(k)];
  const VecX mu = household_mean(k);
  VecX& z = state_.latent_log_wealth[static_cast<std::size_t>(k)];

  VecX w = VecX::Zero(kComponents);
  {
    int j = 0;
    for (int l = 0; l < kComponents; ++l)
      if (ph.household.pattern.owned[l]) w[l] = std::exp(z[j++]);
  }

  int j = 0;
  for (int l = 0; l < kComponents; ++l) {
    if (!ph.household.pattern.owned[l]) continue;
    const ConditionalNormal cn = conditional_normal(mu, q, j, z);
    const Interval iv = conditional_interval(ph.constraints, l, w);

    double level = -1.0;  // set when the draw collapses to a point
    double new_log = 0.0;
    if (iv.lo > iv.hi) {
      if (iv.lo - iv.hi > kGrazeTol)
        throw internal_error(
            "household '" + ph.household.id + "', component " +
            std::to_string(l + 1) + ": empty conditional interval [" +
            fmt(iv.lo) + ", " + fmt(iv.hi) + "]");
      level = 0.5 * (iv.lo + iv.hi);  // numerical graze: pin at the midpoint
    } else if (iv.hi - iv.lo <= 0.0) {
      level = iv.lo;  // degenerate interval: the component is observed exactly
    } else {
      const double lo_log = iv.lo <= 0.0 ? -kInf : std::log(iv.lo);
      const double hi_log = std::isinf(iv.hi) ? kInf : std::log(iv.hi);
      try {
        new_log = draw_truncated_normal(rng, cn.mean, std::sqrt(cn.variance),
                                        lo_log, hi_log);
      } catch (const internal_error& e) {
        throw internal_error("household '" + ph.household.id + "', component " +
                             std::to_string(l + 1) + ": " + e.what());
      }
    }
    if (level >= 0.0) {
      if (level <= 0.0)
        throw internal_error("household '" + ph.household.id + "', component " +
                             std::to_string(l + 1) +
                             ": owned component pinned at a nonpositive level");
      new_log = std::log(level);
      z[j] = new_log;
      w[l] = level;
    } else {
      z[j] = new_log;
      w[l] = std::exp(new_log);
    }
    ++j;
  }
}

void GibbsSampler::update_wealth() {
  const int m = static_cast<int>(data_.households.size());
  if (jobs_ <= 1 || m < 2) {
    for (int k = 0; k < m; ++k) update_household(k, sweep_index_);
    return;
  }
  const int jobs = std::min(jobs_, m);
  std::vector<std::exception_ptr> errors(static_cast<std::size_t>(jobs));
  std::vector<std::thread> threads;
  threads.reserve(static_cast<std::size_t>(jobs));
  const int chunk = (m + jobs - 1) / jobs;
  for (int t = 0; t < jobs; ++t) {
    const int begin = t * chunk;
    const int end = std::min(m, begin + chunk);
    threads.emplace_back([this, t, begin, end, &errors] {
      try {
        for (int k = begin; k < end; ++k) update_household(k, sweep_index_);
      } catch (...) {
        errors[static_cast<std::size_t>(t)] = std::current_exception();
      }
    });
  }
  for (auto& t : threads) t.join();
  for (const auto& e : errors)
    if (e) std::rethrow_exception(e);
}

void GibbsSampler::update_error() {
  state_.sampling_error = error_rng_.standard_normal();
}

void GibbsSampler::sweep() {
  ++sweep_index_;
  update_covariances();
  update_coefficients();
  update_wealth();
  update_error();
}

SweepRecord GibbsSampler::record_sweep(const std::vector<IndexSpec>& specs,
                                       bool include_theta) const {
  const int m = static_cast<int>(data_.households.size());
  WeightedSample sample;
  sample.values = VecX(m);
  sample.weights = VecX(m);
  for (int k = 0; k < m; ++k) {
    sample.values[k] =
        state_.latent_log_wealth[static_cast<std::size_t>(k)].array().exp().sum();
    sample.weights[k] = data_.households[static_cast<std::size_t>(k)].household.weight;
  }
  const SortedSample sorted(sample);

  SweepRecord rec;
  rec.sweep = sweep_index_;
  rec.values = VecX(static_cast<Eigen::Index>(specs.size()));
  for (std::size_t s = 0; s < specs.size(); ++s) {
    const double estimate = evaluate_index(specs[s], sorted);
    std::string diagnostic;
    const double variance = linearized_variance(specs[s], sorted, &diagnostic);
    const double value =
        estimate + std::sqrt(std::max(0.0, variance)) * state_.sampling_error;
    if (!std::isfinite(value))
      throw internal_error(
          "index '" + specs[s].name() + "' produced a non-finite value" +
          (diagnostic.empty() ? "" : " (" + diagnostic + ")"));
    rec.values[static_cast<Eigen::Index>(s)] = value;
  }
  if (include_theta) rec.theta = flatten_theta(state_.theta, data_);
  return rec;
}

VecX GibbsSampler::flatten_theta(const ParameterSet& theta,
                                 const PreparedData& data) {
  Eigen::Index n = data.layout.columns;
  for (int i = 0; i < kPatterns; ++i)
    if (data.pattern_present(i)) {
      const Eigen::Index p = data.pattern_dim(i);
      n += p * (p + 1) / 2;
    }
  VecX out = VecX::Zero(n);
  for (int l = 0; l < kComponents; ++l)
    for (int j = 0; j < static_cast<int>(data.layout.slope_columns[l].size()); ++j)
      out[data.layout.slope_columns[l][static_cast<std::size_t>(j)]] =
          theta.slopes[l].size() > j ? theta.slopes[l][j]
                                     : std::numeric_limits<double>::quiet_NaN();
  for (int i = 0; i < kPatterns; ++i)
    for (int l = 0; l < kComponents; ++l)
      if (data.layout.intercept_column[i][l] != -1)
        out[data.layout.intercept_column[i][l]] =
            theta.intercepts[static_cast<std::size_t>(i)][static_cast<std::size_t>(l)];
  Eigen::Index pos = data.layout.columns;
  for (int i = 0; i < kPatterns; ++i) {
    if (!data.pattern_present(i)) continue;
    const MatX& cov = theta.covariances[static_cast<std::size_t>(i)];
    const Eigen::Index p = data.pattern_dim(i);
    for (Eigen::Index r = 0; r < p; ++r)
      for (Eigen::Index c = r; c < p; ++c)
        out[pos++] = cov.size() > 0 ? cov(r, c)
                                    : std::numeric_limits<double>::quiet_NaN();
  }
  return out;
}

std::vector<std::string> GibbsSampler::theta_labels(const PreparedData& data) {
  std::vector<std::string> labels = data.layout.labels;
  for (int i = 0; i < kPatterns; ++i) {
    if (!data.pattern_present(i)) continue;
    const auto owned = owned_flags_of(i);
    std::vector<int> comps;
    for (int l = 0; l < kComponents; ++l)
      if (owned[l]) comps.push_back(l);
    for (std::size_t r = 0; r < comps.size(); ++r)
      for (std::size_t c = r; c < comps.size(); ++c)
        labels.push_back("sigma:p" + std::to_string(i + 1) + ":c" +
                         std::to_string(comps[r] + 1) + "c" +
                         std::to_string(comps[c] + 1));
  }
  return labels;
}

RunResult run(const PreparedData& data, const RunConfig& cfg,
              const RunOptions& opts) {
  GibbsSampler sampler(data, cfg, opts.jobs);
  sampler.init();

  const long long T = cfg.sweeps;
  const Eigen::Index S = static_cast<Eigen::Index>(cfg.indices.size());
  RunResult result;
  result.specs = cfg.indices;
  result.series = MatX::Zero(T, S);
  if (opts.trace_theta) {
    result.theta_labels = GibbsSampler::theta_labels(data);
    result.theta_trace =
        MatX::Zero(T, static_cast<Eigen::Index>(result.theta_labels.size()));
  }

  for (long long n = 1; n <= T; ++n) {
    try {
      sampler.sweep();
      const SweepRecord rec = sampler.record_sweep(cfg.indices, opts.trace_theta);
      result.series.row(n - 1) = rec.values.transpose();
      if (opts.trace_theta) result.theta_trace.row(n - 1) = rec.theta->transpose();
    } catch (const internal_error& e) {
      throw internal_error("sweep " + std::to_string(n) + ": " + e.what());
    } catch (const infeasible_error& e) {
      throw infeasible_error("sweep " + std::to_string(n) + ": " + e.what());
    }
    if (opts.progress && opts.progress_stride > 0 &&
        (n % opts.progress_stride == 0 || n == T)) {
      *opts.progress << "sweep " << n << "/" << T << std::endl;
    }
  }
  return result;
}

}  // namespace ineq::gibbs
