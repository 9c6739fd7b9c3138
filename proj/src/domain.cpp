#include "ineq/domain.hpp"

#include <cmath>

namespace ineq {

PortfolioPattern pattern_of(const std::array<bool, kComponents>& owned) {
  if (!owned[0] || !owned[4])
    throw input_error(
        "portfolio pattern: components 1 and 5 are always owned");
  PortfolioPattern p;
  p.owned = owned;
  p.pattern_id = 1 + (owned[1] ? 1 : 0) + (owned[2] ? 2 : 0) + (owned[3] ? 4 : 0);
  p.size = 0;
  for (bool b : owned) p.size += b ? 1 : 0;
  return p;
}

std::vector<int> owned_components(const PortfolioPattern& pattern) {
  std::vector<int> out;
  out.reserve(pattern.size);
  for (int l = 0; l < kComponents; ++l)
    if (pattern.owned[l]) out.push_back(l);
  return out;
}

namespace {

bool valid_interval(const Interval& iv) {
  return !(iv.lo > iv.hi) && iv.lo >= 0.0 && !std::isnan(iv.lo) &&
         !std::isnan(iv.hi);
}

}  // namespace

std::vector<Violation> validate_household(const Household& h) {
  std::vector<Violation> out;
  const auto breach = [&](const std::string& field, const std::string& rule) {
    out.push_back({field, rule});
  };

  if (!(h.weight > 0.0) || !std::isfinite(h.weight))
    breach("weight", "nonpositive weight");
  if (!h.pattern.owned[0] || !h.pattern.owned[4])
    breach("pattern", "components 1 and 5 must be owned");
  if (h.pattern.pattern_id < 1 || h.pattern.pattern_id > kPatterns)
    breach("pattern", "pattern_id outside 1..8");

  for (int l = 0; l < kComponents; ++l) {
    if (!h.pattern.owned[l]) continue;
    const std::string field = "bracket_" + std::to_string(l + 1);
    const Interval& iv = h.component_brackets[l];
    if (iv.lo > iv.hi)
      breach(field, "inverted interval");
    else if (!valid_interval(iv))
      breach(field, "negative or NaN bound");
    if (h.covariates[l].size() < 1)
      breach("covariates_" + std::to_string(l + 1),
             "missing constant-term slot");
  }

  if (h.total_bracket.lo > h.total_bracket.hi)
    breach("total_bracket", "inverted interval");
  else if (!valid_interval(h.total_bracket))
    breach("total_bracket", "negative or NaN bound");
  if (h.financial_sum_bracket) {
    if (h.financial_sum_bracket->lo > h.financial_sum_bracket->hi)
      breach("financial_sum_bracket", "inverted interval");
    else if (!valid_interval(*h.financial_sum_bracket))
      breach("financial_sum_bracket", "negative or NaN bound");
  }

  if (h.debt < 0.0 || !std::isfinite(h.debt))
    breach("debt", "negative debt");
  if (h.nded_min < 0.0 || !std::isfinite(h.nded_min))
    breach("nded_min", "negative bound");
  if (h.nded_max < 0.0 || std::isnan(h.nded_max))
    breach("nded_max", "negative bound");
  if (h.nded_min > h.nded_max) breach("nded_min", "exceeds nded_max");
  if (!(h.cap > 0.0) || !std::isfinite(h.cap))
    breach("cap", "cap must be positive and finite");

  return out;
}

void RunConfig::validate() const {
  if (sweeps < 1) throw input_error("run config: T must be at least 1");
  if (burn_in < 0 || burn_in >= sweeps)
    throw input_error("run config: B must satisfy 0 <= B < T");
  if (!(alpha > 0.0 && alpha < 1.0))
    throw input_error("run config: alpha must lie in (0,1)");
  if (!(dwelling_rebate > 0.0 && dwelling_rebate <= 1.0))
    throw input_error("run config: dwelling rebate must lie in (0,1]");
  if (!(tax_threshold > 0.0) || !std::isfinite(tax_threshold))
    throw input_error("run config: tax threshold must be positive");
  for (const auto& spec : indices) spec.validate();
}

std::vector<IndexSpec> RunConfig::default_indices() {
  return {
      IndexSpec::Mean(),
      IndexSpec::Quantile(0.5),
      IndexSpec::Quantile(0.99),
      IndexSpec::Quantile(0.95),
      IndexSpec::Quantile(0.90),
      IndexSpec::Quantile(0.75),
      IndexSpec::Quantile(0.25),
      IndexSpec::Quantile(0.10),
      IndexSpec::QuantileRatio(0.95, 0.5),
      IndexSpec::QuantileRatio(0.99, 0.5),
      IndexSpec::QuantileRatio(0.75, 0.25),
      IndexSpec::QuantileRatio(0.90, 0.10),
      IndexSpec::QuantileRatio(0.90, 0.50),
      IndexSpec::Gini(),
      IndexSpec::Theil(),
      IndexSpec::Atkinson(1.5),
      IndexSpec::Atkinson(2.0),
  };
}

}  // namespace ineq
