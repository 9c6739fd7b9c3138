#include "ineq/synth.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>
#include <json.hpp>

#include "ineq/indices.hpp"

namespace ineq::synth {

using nlohmann::json;

namespace {

constexpr int kMaxCapRedraws = 10000;

std::array<bool, kComponents> owned_flags(int pattern_index) {
  return {true, (pattern_index & 1) != 0, (pattern_index & 2) != 0,
          (pattern_index & 4) != 0, true};
}

void check_thresholds(const BracketSystem& sys, const std::string& what) {
  for (std::size_t j = 0; j < sys.thresholds.size(); ++j) {
    const double t = sys.thresholds[j];
    if (!std::isfinite(t) || t < 0.0)
      throw input_error(what + ": thresholds must be finite and nonnegative");
    if (j > 0 && !(t > sys.thresholds[j - 1]))
      throw input_error(what + ": thresholds must be strictly increasing");
  }
}

}  // namespace

Interval BracketSystem::bracket_of(double w) const {
  if (thresholds.empty()) return {w, w};
  if (w < thresholds.front())
    throw input_error("value " + io::format_double(w) +
                      " lies below the first bracket threshold " +
                      io::format_double(thresholds.front()));
  const auto it = std::upper_bound(thresholds.begin(), thresholds.end(), w);
  const std::size_t j = static_cast<std::size_t>(it - thresholds.begin()) - 1;
  return {thresholds[j],
          j + 1 < thresholds.size() ? thresholds[j + 1] : kInf};
}

SynthConfig::SynthConfig() {
  for (auto& sys : component_systems)
    sys.thresholds = {0, 15000, 30000, 60000, 120000, 240000, 480000};
  total_system.thresholds = {0, 75000, 150000, 300000, 450000};
}

void SynthConfig::validate() const {
  if (population_size < 1)
    throw input_error("population size must be positive");
  if (sample_size < 1) throw input_error("sample size must be positive");
  if (sample_size > population_size)
    throw input_error("sample size " + std::to_string(sample_size) +
                      " exceeds the population size " +
                      std::to_string(population_size));

  double prob_sum = 0.0;
  for (const double p : pattern_probabilities) {
    if (!(p >= 0.0) || !std::isfinite(p))
      throw input_error("pattern probabilities must be nonnegative");
    prob_sum += p;
  }
  if (std::abs(prob_sum - 1.0) > 1e-9)
    throw input_error("pattern probabilities must sum to 1, got " +
                      io::format_double(prob_sum));

  for (int l = 0; l < kComponents; ++l)
    check_thresholds(component_systems[static_cast<std::size_t>(l)],
                     "component " + std::to_string(l + 1) + " bracket system");
  check_thresholds(total_system, "total wealth bracket system");

  if (!(cap > 0.0) || !std::isfinite(cap))
    throw input_error("cap must be a positive finite amount");
  if (!(tax_threshold > 0.0) || !std::isfinite(tax_threshold))
    throw input_error("tax threshold must be a positive finite amount");
  if (!(dwelling_rebate > 0.0 && dwelling_rebate <= 1.0))
    throw input_error("dwelling rebate must lie in (0, 1]");
  if (!(nded_fraction >= 0.0 && nded_fraction <= 1.0))
    throw input_error("taxable professional-wealth fraction must lie in [0, 1]");
  if (!(debt_fraction >= 0.0 && debt_fraction < 1.0))
    throw input_error("debt fraction must lie in [0, 1)");

  for (std::size_t a = 0; a < covariates.size(); ++a) {
    const CovariateSpec& spec = covariates[a];
    if (spec.name.empty()) throw input_error("covariate names must be nonempty");
    for (std::size_t b = 0; b < a; ++b)
      if (covariates[b].name == spec.name)
        throw input_error("duplicate covariate name '" + spec.name + "'");
    switch (spec.kind) {
      case CovariateSpec::Kind::uniform:
        if (!(spec.a < spec.b))
          throw input_error("covariate '" + spec.name +
                            "': uniform needs a < b");
        break;
      case CovariateSpec::Kind::normal:
        if (!(spec.b > 0.0))
          throw input_error("covariate '" + spec.name +
                            "': normal needs a positive standard deviation");
        break;
      case CovariateSpec::Kind::bernoulli:
        if (!(spec.a >= 0.0 && spec.a <= 1.0))
          throw input_error("covariate '" + spec.name +
                            "': bernoulli needs a probability in [0, 1]");
        break;
    }
  }

  if (!(oversample.factor > 0.0) || !std::isfinite(oversample.factor))
    throw input_error("oversampling factor must be positive and finite");
  if (!oversample.covariate.empty()) {
    bool found = false;
    for (const CovariateSpec& spec : covariates)
      found = found || spec.name == oversample.covariate;
    if (!found)
      throw input_error("oversampling covariate '" + oversample.covariate +
                        "' is not among the configured covariates");
  }

  const auto ncov = static_cast<Eigen::Index>(covariates.size());
  for (int l = 0; l < kComponents; ++l)
    if (parameters.slopes[static_cast<std::size_t>(l)].size() != ncov)
      throw input_error("component " + std::to_string(l + 1) + " needs " +
                        std::to_string(ncov) + " slope coefficients, got " +
                        std::to_string(
                            parameters.slopes[static_cast<std::size_t>(l)].size()));
  for (int i = 0; i < kPatterns; ++i) {
    if (!(pattern_probabilities[static_cast<std::size_t>(i)] > 0.0)) continue;
    const PortfolioPattern pattern = pattern_of(owned_flags(i));
    const MatX& cov = parameters.covariances[static_cast<std::size_t>(i)];
    if (cov.rows() != pattern.size || cov.cols() != pattern.size)
      throw input_error("pattern " + std::to_string(i + 1) +
                        " needs a " + std::to_string(pattern.size) + "x" +
                        std::to_string(pattern.size) + " covariance matrix");
    if (!cov.allFinite() ||
        Eigen::LLT<MatX>(cov).info() != Eigen::Success)
      throw input_error("pattern " + std::to_string(i + 1) +
                        " covariance matrix is not positive definite");
    for (int l = 0; l < kComponents; ++l)
      if (pattern.owned[static_cast<std::size_t>(l)] &&
          !std::isfinite(
              parameters.intercepts[static_cast<std::size_t>(i)]
                                   [static_cast<std::size_t>(l)]))
        throw input_error("pattern " + std::to_string(i + 1) + ", component " +
                          std::to_string(l + 1) + ": intercept is undefined");
  }
}

Population generate_population(const SynthConfig& cfg, RngStream& rng) {
  cfg.validate();
  const auto n = cfg.population_size;
  const auto ncov = static_cast<Eigen::Index>(cfg.covariates.size());

  std::array<PortfolioPattern, kPatterns> patterns;
  std::array<MatX, kPatterns> chol;
  for (int i = 0; i < kPatterns; ++i) {
    patterns[static_cast<std::size_t>(i)] = pattern_of(owned_flags(i));
    if (cfg.pattern_probabilities[static_cast<std::size_t>(i)] > 0.0)
      chol[static_cast<std::size_t>(i)] =
          Eigen::LLT<MatX>(cfg.parameters.covariances[static_cast<std::size_t>(i)])
              .matrixL();
  }
  std::array<double, kPatterns> cum{};
  double acc = 0.0;
  for (int i = 0; i < kPatterns; ++i) {
    acc += cfg.pattern_probabilities[static_cast<std::size_t>(i)];
    cum[static_cast<std::size_t>(i)] = acc;
  }

  Population pop;
  pop.units.reserve(static_cast<std::size_t>(n));
  pop.wealth = MatX::Zero(n, kComponents);
  pop.total = VecX::Zero(n);
  for (int l = 0; l < kComponents; ++l)
    for (const CovariateSpec& spec : cfg.covariates)
      pop.covariate_names[static_cast<std::size_t>(l)].push_back(spec.name);

  for (long long k = 0; k < n; ++k) {
    const double up = rng.uniform();
    int i = 0;
    while (i + 1 < kPatterns && up > cum[static_cast<std::size_t>(i)]) ++i;
    const PortfolioPattern& pattern = patterns[static_cast<std::size_t>(i)];

    VecX covs(ncov);
    for (Eigen::Index c = 0; c < ncov; ++c) {
      const CovariateSpec& spec = cfg.covariates[static_cast<std::size_t>(c)];
      switch (spec.kind) {
        case CovariateSpec::Kind::uniform:
          covs[c] = spec.a + (spec.b - spec.a) * rng.uniform();
          break;
        case CovariateSpec::Kind::normal:
          covs[c] = spec.a + spec.b * rng.standard_normal();
          break;
        case CovariateSpec::Kind::bernoulli:
          covs[c] = rng.uniform() < spec.a ? 1.0 : 0.0;
          break;
      }
    }
    VecX design(1 + ncov);
    design[0] = 1.0;
    design.tail(ncov) = covs;

    VecX mu(pattern.size);
    int j = 0;
    for (int l = 0; l < kComponents; ++l) {
      if (!pattern.owned[static_cast<std::size_t>(l)]) continue;
      mu[j++] =
          cfg.parameters.intercepts[static_cast<std::size_t>(i)]
                                   [static_cast<std::size_t>(l)] +
          cfg.parameters.slopes[static_cast<std::size_t>(l)].dot(covs);
    }

    // Redraw the noise until the total respects the cap; the accepted
    // distribution is the model truncated to feasible totals.
    VecX w(pattern.size);
    double total = 0.0;
    int attempts = 0;
    for (;;) {
      VecX eta(pattern.size);
      for (int r = 0; r < pattern.size; ++r) eta[r] = rng.standard_normal();
      const VecX z = mu + chol[static_cast<std::size_t>(i)] * eta;
      w = z.array().exp().matrix();
      total = w.sum();
      if (total <= cfg.cap) break;
      if (++attempts >= kMaxCapRedraws)
        throw input_error("unit " + std::to_string(k + 1) + ": " +
                          std::to_string(kMaxCapRedraws) +
                          " redraws kept exceeding the cap; the configured "
                          "truth puts too much mass above it");
    }

    Household h;
    h.id = "u-" + std::to_string(k + 1);
    h.weight = 1.0;
    h.pattern = pattern;
    h.cap = cfg.cap;
    int r = 0;
    for (int l = 0; l < kComponents; ++l) {
      if (!pattern.owned[static_cast<std::size_t>(l)]) continue;
      h.covariates[static_cast<std::size_t>(l)] = design;
      pop.wealth(k, l) = w[r++];
    }
    pop.total[k] = total;
    pop.units.push_back(std::move(h));
  }
  return pop;
}

VecX sampling_scores(const Population& population, const SynthConfig& cfg) {
  const auto n = static_cast<Eigen::Index>(population.units.size());
  if (cfg.oversample.covariate.empty() || cfg.oversample.factor == 1.0)
    return VecX::Ones(n);

  const auto& names = population.covariate_names[0];
  const auto it =
      std::find(names.begin(), names.end(), cfg.oversample.covariate);
  if (it == names.end())
    throw input_error("oversampling covariate '" + cfg.oversample.covariate +
                      "' is not among the population covariates");
  const auto pos = 1 + (it - names.begin());  // skip the constant term

  VecX values(n);
  for (Eigen::Index k = 0; k < n; ++k)
    values[k] = population.units[static_cast<std::size_t>(k)].covariates[0][pos];
  std::vector<double> sorted(values.data(), values.data() + n);
  std::sort(sorted.begin(), sorted.end());

  // Score grows linearly in the covariate's population rank from 1 to the
  // factor, so selection pressure depends on covariates alone.
  VecX scores(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    const auto rank = std::upper_bound(sorted.begin(), sorted.end(), values[k]) -
                      sorted.begin();
    const double cdf = static_cast<double>(rank) / static_cast<double>(n);
    scores[k] = 1.0 + (cfg.oversample.factor - 1.0) * cdf;
  }
  return scores;
}

Sample draw_with_scores(const Population& population, const VecX& scores,
                        int sample_size, RngStream& rng) {
  const auto n = static_cast<Eigen::Index>(population.units.size());
  if (scores.size() != n)
    throw input_error("need one sampling score per population unit");
  if (sample_size < 1 || sample_size > n)
    throw input_error("sample size must lie in [1, population size]");
  for (Eigen::Index k = 0; k < n; ++k)
    if (!std::isfinite(scores[k]) || !(scores[k] > 0.0))
      throw input_error("degenerate sampling scores: unit " +
                        std::to_string(k + 1) +
                        " has score " + io::format_double(scores[k]));

  // Units whose scaled score reaches 1 enter with certainty; removing them
  // raises the remaining probabilities, so iterate to a fixed point.
  std::vector<char> certain(static_cast<std::size_t>(n), 0);
  int m_rem = sample_size;
  long long active = n;
  for (;;) {
    if (m_rem == 0) break;
    if (active == m_rem) {
      for (Eigen::Index k = 0; k < n; ++k)
        if (!certain[static_cast<std::size_t>(k)])
          certain[static_cast<std::size_t>(k)] = 1;
      m_rem = 0;
      break;
    }
    double s = 0.0;
    for (Eigen::Index k = 0; k < n; ++k)
      if (!certain[static_cast<std::size_t>(k)]) s += scores[k];
    bool changed = false;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (certain[static_cast<std::size_t>(k)]) continue;
      if (static_cast<double>(m_rem) * scores[k] >= s) {
        certain[static_cast<std::size_t>(k)] = 1;
        --m_rem;
        --active;
        changed = true;
        if (m_rem == 0) break;
      }
    }
    if (!changed) break;
  }

  VecX pi = VecX::Zero(n);
  double s = 0.0;
  for (Eigen::Index k = 0; k < n; ++k)
    if (!certain[static_cast<std::size_t>(k)]) s += scores[k];
  for (Eigen::Index k = 0; k < n; ++k)
    pi[k] = certain[static_cast<std::size_t>(k)]
                ? 1.0
                : static_cast<double>(m_rem) * scores[k] / s;

  // One systematic pass over the cumulated probabilities: unit k is chosen
  // when the running sum crosses an integer offset by the uniform start.
  std::vector<char> chosen = certain;
  if (m_rem > 0) {
    const double u = rng.uniform();
    double prev = -u;
    int picked = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
      if (certain[static_cast<std::size_t>(k)]) continue;
      const double cur = prev + pi[k];
      if (std::floor(cur) > std::floor(prev)) {
        chosen[static_cast<std::size_t>(k)] = 1;
        ++picked;
      }
      prev = cur;
    }
    if (picked != m_rem)
      throw internal_error("systematic selection picked " +
                           std::to_string(picked) + " units instead of " +
                           std::to_string(m_rem));
  }

  Sample out;
  out.covariate_names = population.covariate_names;
  out.unit_rows.reserve(static_cast<std::size_t>(sample_size));
  for (Eigen::Index k = 0; k < n; ++k)
    if (chosen[static_cast<std::size_t>(k)])
      out.unit_rows.push_back(static_cast<int>(k));
  const auto m = static_cast<Eigen::Index>(out.unit_rows.size());
  out.households.reserve(static_cast<std::size_t>(m));
  out.wealth = MatX::Zero(m, kComponents);
  out.total = VecX::Zero(m);
  for (Eigen::Index i = 0; i < m; ++i) {
    const int k = out.unit_rows[static_cast<std::size_t>(i)];
    Household h = population.units[static_cast<std::size_t>(k)];
    h.weight = 1.0 / pi[k];
    out.households.push_back(std::move(h));
    out.wealth.row(i) = population.wealth.row(k);
    out.total[i] = population.total[k];
  }
  return out;
}

Sample draw_sample(const Population& population, const SynthConfig& cfg,
                   RngStream& rng) {
  return draw_with_scores(population, sampling_scores(population, cfg),
                          cfg.sample_size, rng);
}

io::Dataset apply_censoring(const Sample& sample, const SynthConfig& cfg) {
  io::Dataset out;
  out.covariate_names = sample.covariate_names;
  out.households.reserve(sample.households.size());
  for (std::size_t i = 0; i < sample.households.size(); ++i) {
    Household h = sample.households[i];
    const auto row = static_cast<Eigen::Index>(i);
    for (int l = 0; l < kComponents; ++l)
      if (h.pattern.owned[static_cast<std::size_t>(l)])
        h.component_brackets[static_cast<std::size_t>(l)] =
            cfg.component_systems[static_cast<std::size_t>(l)].bracket_of(
                sample.wealth(row, l));
    h.total_bracket = cfg.total_system.bracket_of(sample.total[row]);

    // NDED and DEBT are disclosed as known constants of the record; the tax
    // flag follows from the true taxable wealth, so the truth satisfies the
    // constraint the flag induces.
    const double nded = cfg.nded_fraction * sample.wealth(row, 3);
    h.nded_min = nded;
    h.nded_max = nded;
    h.debt = cfg.debt_fraction * sample.total[row];
    const double taxable = sample.wealth(row, 0) +
                           cfg.dwelling_rebate * sample.wealth(row, 1) +
                           sample.wealth(row, 2) + nded +
                           sample.wealth(row, 4) - h.debt;
    h.pays_wealth_tax = taxable >= cfg.tax_threshold;
    h.cap = cfg.cap;
    out.households.push_back(std::move(h));
  }
  return out;
}

VecX true_indices(const Population& population,
                  const std::vector<IndexSpec>& specs) {
  const WeightedSample ws{population.total,
                          VecX::Ones(population.total.size())};
  return evaluate_indices(specs, ws);
}

std::string truth_csv(const Sample& sample) {
  std::string out = "id,true_w1,true_w2,true_w3,true_w4,true_w5,true_total\n";
  for (std::size_t i = 0; i < sample.households.size(); ++i) {
    const auto row = static_cast<Eigen::Index>(i);
    out += sample.households[i].id;
    for (int l = 0; l < kComponents; ++l) {
      out += ',';
      out += io::format_double(sample.wealth(row, l));
    }
    out += ',';
    out += io::format_double(sample.total[row]);
    out += '\n';
  }
  return out;
}

namespace {

json parse_json(const std::string& text, const std::string& what) {
  try {
    return json::parse(text);
  } catch (const json::exception& e) {
    throw input_error(what + ": invalid JSON: " + e.what());
  }
}

void reject_unknown_keys(const json& j, std::initializer_list<const char*> known,
                         const std::string& what) {
  for (const auto& [key, value] : j.items()) {
    bool ok = false;
    for (const char* k : known) ok = ok || key == k;
    if (!ok) throw input_error(what + ": unknown key '" + key + "'");
  }
}

template <class T>
T get_or(const json& j, const char* key, T fallback) {
  if (!j.contains(key)) return fallback;
  try {
    return j.at(key).get<T>();
  } catch (const json::exception& e) {
    throw input_error(std::string("synth config key '") + key + "': " +
                      e.what());
  }
}

std::vector<double> number_list(const json& arr, const std::string& what) {
  if (!arr.is_array()) throw input_error(what + ": expected an array");
  std::vector<double> out;
  for (const auto& item : arr) {
    if (!item.is_number()) throw input_error(what + ": expected numbers");
    out.push_back(item.get<double>());
  }
  return out;
}

CovariateSpec::Kind covariate_kind(const std::string& text) {
  if (text == "uniform") return CovariateSpec::Kind::uniform;
  if (text == "normal") return CovariateSpec::Kind::normal;
  if (text == "bernoulli") return CovariateSpec::Kind::bernoulli;
  throw input_error("synth config: unknown covariate kind '" + text +
                    "' (expected uniform, normal or bernoulli)");
}

std::string covariate_kind_name(CovariateSpec::Kind kind) {
  switch (kind) {
    case CovariateSpec::Kind::uniform: return "uniform";
    case CovariateSpec::Kind::normal: return "normal";
    case CovariateSpec::Kind::bernoulli: return "bernoulli";
  }
  throw internal_error("unreachable covariate kind");
}

}  // namespace

SynthConfig parse_synth_config(const std::string& json_text) {
  const json j = parse_json(json_text, "synth config");
  if (!j.is_object()) throw input_error("synth config: expected a JSON object");
  reject_unknown_keys(j,
                      {"population_size", "sample_size", "seed",
                       "pattern_probabilities", "covariates", "parameters",
                       "component_thresholds", "total_thresholds", "cap",
                       "tax_threshold", "dwelling_rebate", "nded_fraction",
                       "debt_fraction", "oversample"},
                      "synth config");
  SynthConfig cfg;
  cfg.population_size =
      get_or<long long>(j, "population_size", cfg.population_size);
  cfg.sample_size = get_or<int>(j, "sample_size", cfg.sample_size);
  cfg.seed = get_or<std::uint64_t>(j, "seed", cfg.seed);
  cfg.cap = get_or<double>(j, "cap", cfg.cap);
  cfg.tax_threshold = get_or<double>(j, "tax_threshold", cfg.tax_threshold);
  cfg.dwelling_rebate =
      get_or<double>(j, "dwelling_rebate", cfg.dwelling_rebate);
  cfg.nded_fraction = get_or<double>(j, "nded_fraction", cfg.nded_fraction);
  cfg.debt_fraction = get_or<double>(j, "debt_fraction", cfg.debt_fraction);

  if (j.contains("pattern_probabilities")) {
    const std::vector<double> probs = number_list(
        j.at("pattern_probabilities"), "synth config: pattern_probabilities");
    if (probs.size() != static_cast<std::size_t>(kPatterns))
      throw input_error("synth config: pattern_probabilities needs " +
                        std::to_string(kPatterns) + " entries");
    std::copy(probs.begin(), probs.end(), cfg.pattern_probabilities.begin());
  }

  if (j.contains("covariates")) {
    const json& arr = j.at("covariates");
    if (!arr.is_array())
      throw input_error("synth config: 'covariates' must be an array");
    for (const auto& item : arr) {
      if (!item.is_object())
        throw input_error("synth config: covariate entries must be objects");
      reject_unknown_keys(item, {"name", "kind", "a", "b"},
                          "synth config covariate");
      CovariateSpec spec;
      spec.name = get_or<std::string>(item, "name", "");
      spec.kind = covariate_kind(get_or<std::string>(item, "kind", "uniform"));
      spec.a = get_or<double>(item, "a", 0.0);
      spec.b = get_or<double>(item, "b", 0.0);
      cfg.covariates.push_back(std::move(spec));
    }
  }

  if (!j.contains("parameters"))
    throw input_error("synth config: missing key 'parameters'");
  cfg.parameters = io::parse_parameter_set(j.at("parameters").dump());

  if (j.contains("component_thresholds")) {
    const json& arr = j.at("component_thresholds");
    if (!arr.is_array() || arr.size() != static_cast<std::size_t>(kComponents))
      throw input_error("synth config: component_thresholds needs " +
                        std::to_string(kComponents) + " threshold lists");
    for (int l = 0; l < kComponents; ++l)
      cfg.component_systems[static_cast<std::size_t>(l)].thresholds =
          number_list(arr.at(static_cast<std::size_t>(l)),
                      "synth config: component_thresholds[" +
                          std::to_string(l) + "]");
  }
  if (j.contains("total_thresholds"))
    cfg.total_system.thresholds =
        number_list(j.at("total_thresholds"), "synth config: total_thresholds");

  if (j.contains("oversample")) {
    const json& o = j.at("oversample");
    if (!o.is_object())
      throw input_error("synth config: 'oversample' must be an object");
    reject_unknown_keys(o, {"covariate", "factor"}, "synth config oversample");
    cfg.oversample.covariate =
        get_or<std::string>(o, "covariate", cfg.oversample.covariate);
    cfg.oversample.factor = get_or<double>(o, "factor", cfg.oversample.factor);
  }

  cfg.validate();
  return cfg;
}

SynthConfig read_synth_config(const std::string& path) {
  try {
    return parse_synth_config(io::read_file(path));
  } catch (const input_error& e) {
    throw input_error(path + ": " + e.what());
  }
}

std::string synth_config_json(const SynthConfig& cfg) {
  json j;
  j["population_size"] = cfg.population_size;
  j["sample_size"] = cfg.sample_size;
  j["seed"] = cfg.seed;
  j["pattern_probabilities"] = cfg.pattern_probabilities;
  json covs = json::array();
  for (const CovariateSpec& spec : cfg.covariates) {
    json c;
    c["name"] = spec.name;
    c["kind"] = covariate_kind_name(spec.kind);
    c["a"] = spec.a;
    c["b"] = spec.b;
    covs.push_back(std::move(c));
  }
  j["covariates"] = std::move(covs);
  j["parameters"] = json::parse(io::parameter_set_json(cfg.parameters));
  json comp = json::array();
  for (const BracketSystem& sys : cfg.component_systems)
    comp.push_back(sys.thresholds);
  j["component_thresholds"] = std::move(comp);
  j["total_thresholds"] = cfg.total_system.thresholds;
  j["cap"] = cfg.cap;
  j["tax_threshold"] = cfg.tax_threshold;
  j["dwelling_rebate"] = cfg.dwelling_rebate;
  j["nded_fraction"] = cfg.nded_fraction;
  j["debt_fraction"] = cfg.debt_fraction;
  json o;
  o["covariate"] = cfg.oversample.covariate;
  o["factor"] = cfg.oversample.factor;
  j["oversample"] = std::move(o);
  return j.dump(2) + "\n";
}

}  // namespace ineq::synth
