#include "ineq/constraints.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace ineq {

namespace {

// Bound improvements smaller than this (euros) are not applied; keeps the
// fixed point idempotent and respects sub-cent precision at most.
constexpr double kTightenTol = 1e-6;
constexpr int kTightenRounds = 1000;

double clamped_term(const LinearConstraint& lc, int l, double w) {
  return (l == lc.clamp_component) ? std::min(w, lc.clamp_value) : w;
}

}  // namespace

double LinearConstraint::evaluate(const VecX& w) const {
  double acc = offset;
  for (int l = 0; l < kComponents; ++l)
    if (coeffs[l] != 0.0) acc += coeffs[l] * clamped_term(*this, l, w[l]);
  return acc;
}

double LinearConstraint::slack(const VecX& w) const {
  const double lhs = evaluate(w);
  return (sense == Sense::ge) ? lhs - bound : bound - lhs;
}

std::string LinearConstraint::describe() const {
  std::ostringstream os;
  bool first = true;
  for (int l = 0; l < kComponents; ++l) {
    if (coeffs[l] == 0.0) continue;
    if (!first) os << " + ";
    first = false;
    if (coeffs[l] != 1.0) os << coeffs[l] << "*";
    if (l == clamp_component && clamp_value != kInf)
      os << "min(W" << l + 1 << ", " << clamp_value << ")";
    else
      os << "W" << l + 1;
  }
  if (offset != 0.0) os << (offset > 0.0 ? " + " : " - ") << std::fabs(offset);
  os << (sense == Sense::ge ? " >= " : " <= ") << bound;
  if (!label.empty()) os << " [" << label << "]";
  return os.str();
}

ConstraintSet build_constraints(const Household& h, const RunConfig& cfg) {
  ConstraintSet c;
  c.pattern = h.pattern;

  for (int l = 0; l < kComponents; ++l) {
    if (!h.pattern.owned[l]) continue;
    c.boxes[l].lo = std::max(0.0, h.component_brackets[l].lo);
    c.boxes[l].hi = std::min(h.component_brackets[l].hi, h.cap);
  }

  const auto add_sum = [&](const Interval& iv, const std::array<bool, kComponents>& in,
                           const std::string& what) {
    if (iv.lo > 0.0) {
      LinearConstraint lc;
      for (int l = 0; l < kComponents; ++l)
        if (in[l] && h.pattern.owned[l]) lc.coeffs[l] = 1.0;
      lc.sense = LinearConstraint::Sense::ge;
      lc.bound = iv.lo;
      lc.label = what + " (lower)";
      c.linear.push_back(std::move(lc));
    }
    if (iv.hi < kInf) {
      LinearConstraint lc;
      for (int l = 0; l < kComponents; ++l)
        if (in[l] && h.pattern.owned[l]) lc.coeffs[l] = 1.0;
      lc.sense = LinearConstraint::Sense::le;
      lc.bound = iv.hi;
      lc.label = what + " (upper)";
      c.linear.push_back(std::move(lc));
    }
  };

  const std::array<bool, kComponents> all = {true, true, true, true, true};
  add_sum(h.total_bracket, all, "total wealth bracket");
  if (h.financial_sum_bracket) {
    // Declared subset sum: the collected components 1..4; the remainder is
    // bounded only through the total bracket.
    const std::array<bool, kComponents> collected = {true, true, true, true,
                                                     false};
    add_sum(*h.financial_sum_bracket, collected, "collected-components bracket");
  }

  if (h.pays_wealth_tax.has_value()) {
    LinearConstraint lc;
    lc.coeffs[0] = h.pattern.owned[0] ? 1.0 : 0.0;
    lc.coeffs[1] = h.pattern.owned[1] ? cfg.dwelling_rebate : 0.0;
    lc.coeffs[2] = h.pattern.owned[2] ? 1.0 : 0.0;
    if (*h.pays_wealth_tax) {
      // Taxable-wealth upper bound reaches the threshold: W1 + r*W2 + W3 +
      // min(W4, NDED_max) + W5 - DEBT >= threshold.
      if (h.pattern.owned[3]) {
        lc.coeffs[3] = 1.0;
        lc.clamp_component = 3;
        lc.clamp_value = h.nded_max;
      }
      lc.coeffs[4] = 1.0;
      lc.offset = -h.debt;
      lc.sense = LinearConstraint::Sense::ge;
      lc.bound = cfg.tax_threshold;
      lc.label = "wealth-tax payer floor";
    } else {
      // Taxable-wealth lower bound stays under the threshold: W1 + r*W2 +
      // W3 + NDED_min - DEBT <= threshold.
      lc.offset = h.nded_min - h.debt;
      lc.sense = LinearConstraint::Sense::le;
      lc.bound = cfg.tax_threshold;
      lc.label = "wealth-tax non-payer ceiling";
    }
    c.linear.push_back(std::move(lc));
  }

  {
    LinearConstraint lc;
    for (int l = 0; l < kComponents; ++l)
      if (h.pattern.owned[l]) lc.coeffs[l] = 1.0;
    lc.sense = LinearConstraint::Sense::le;
    lc.bound = h.cap;
    lc.label = "total wealth cap";
    c.linear.push_back(std::move(lc));
  }

  return c;
}

namespace {

std::string box_breach_message(const LinearConstraint& lc, int l,
                               const Interval& box) {
  std::ostringstream os;
  os << "component " << l + 1 << " box empty ([" << box.lo << ", " << box.hi
     << "]) after applying " << lc.describe();
  return os.str();
}

}  // namespace

std::optional<Infeasibility> try_tighten(ConstraintSet& c) {
  const auto owned = owned_components(c.pattern);
  for (int l : owned)
    if (c.boxes[l].lo > c.boxes[l].hi)
      return Infeasibility{"bracket for component " + std::to_string(l + 1),
                           c.boxes[l].hi - c.boxes[l].lo};

  for (int round = 0; round < kTightenRounds; ++round) {
    bool changed = false;
    for (const LinearConstraint& lc : c.linear) {
      for (int l : owned) {
        if (lc.coeffs[l] == 0.0) continue;
        Interval& box = c.boxes[l];
        if (lc.sense == LinearConstraint::Sense::ge) {
          // Others at their maximal contribution; solve for the minimum of
          // the remaining term.
          double rest = lc.offset;
          for (int j : owned)
            if (j != l && lc.coeffs[j] != 0.0)
              rest += lc.coeffs[j] * clamped_term(lc, j, c.boxes[j].hi);
          const double needed = (lc.bound - rest) / lc.coeffs[l];
          if (l == lc.clamp_component && needed > lc.clamp_value)
            // Up-set of min(W, C) above C is empty: unattainable even as
            // W -> infinity.
            return Infeasibility{lc.describe(),
                                 lc.coeffs[l] * (lc.clamp_value - needed)};
          if (needed > box.lo + kTightenTol) {
            box.lo = needed;
            changed = true;
            if (box.lo > box.hi)
              return Infeasibility{box_breach_message(lc, l, box),
                                   box.hi - box.lo};
          }
        } else {
          double rest = lc.offset;
          for (int j : owned)
            if (j != l && lc.coeffs[j] != 0.0)
              rest += lc.coeffs[j] * clamped_term(lc, j, c.boxes[j].lo);
          const double allowed = (lc.bound - rest) / lc.coeffs[l];
          if (l == lc.clamp_component && lc.clamp_value <= allowed)
            continue;  // min(W, C) <= allowed holds for every W
          if (allowed < box.hi - kTightenTol) {
            box.hi = allowed;
            changed = true;
            if (box.hi < box.lo)
              return Infeasibility{box_breach_message(lc, l, box),
                                   box.hi - box.lo};
          }
        }
      }
    }
    if (!changed) break;
  }
  return std::nullopt;
}

ConstraintSet tighten(const ConstraintSet& c) {
  ConstraintSet out = c;
  if (const auto bad = try_tighten(out))
    throw infeasible_error("infeasible censoring region: " + bad->constraint);
  return out;
}

Interval conditional_interval(const ConstraintSet& c, int l, const VecX& w) {
  if (l < 0 || l >= kComponents || !c.pattern.owned[l])
    throw internal_error("conditional interval: component not owned");
  Interval iv = c.boxes[l];
  for (const LinearConstraint& lc : c.linear) {
    if (lc.coeffs[l] == 0.0) continue;
    double rest = lc.offset;
    for (int j = 0; j < kComponents; ++j)
      if (j != l && lc.coeffs[j] != 0.0)
        rest += lc.coeffs[j] * clamped_term(lc, j, w[j]);
    if (lc.sense == LinearConstraint::Sense::ge) {
      const double needed = (lc.bound - rest) / lc.coeffs[l];
      if (l == lc.clamp_component && needed > lc.clamp_value)
        return {1.0, 0.0};  // empty: the clamped term cannot reach it
      iv.lo = std::max(iv.lo, needed);
    } else {
      const double allowed = (lc.bound - rest) / lc.coeffs[l];
      if (l == lc.clamp_component && lc.clamp_value <= allowed) continue;
      iv.hi = std::min(iv.hi, allowed);
    }
  }
  return iv;
}

bool satisfies_all(const ConstraintSet& c, const VecX& w, double tol) {
  for (int l = 0; l < kComponents; ++l) {
    if (!c.pattern.owned[l]) continue;
    if (!c.boxes[l].contains(w[l], tol)) return false;
  }
  for (const LinearConstraint& lc : c.linear)
    if (lc.slack(w) < -tol) return false;
  return true;
}

VecX feasible_point(const ConstraintSet& c) {
  // Sequential pinning with propagation: fix one owned component at a time
  // (midpoint first, fallback positions inside its current box otherwise)
  // and re-tighten the remainder before moving on.  Coordinatewise
  // projection can deadlock when a sum constraint needs several components
  // to move at once; propagation shifts the remaining boxes instead, so the
  // walk stays extendable at every step.
  ConstraintSet cur = c;
  if (try_tighten(cur))
    throw internal_error(
        "feasible_point: region is empty; expected a tightened feasible set");
  const auto owned = owned_components(c.pattern);
  VecX w = VecX::Zero(kComponents);
  for (int l : owned) {
    const Interval box = cur.boxes[l];  // finite: the cap bounds every box
    const std::array<double, 5> candidates = {
        0.5 * (box.lo + box.hi), 0.75 * box.lo + 0.25 * box.hi,
        0.25 * box.lo + 0.75 * box.hi, box.lo, box.hi};
    bool pinned = false;
    for (const double v : candidates) {
      ConstraintSet trial = cur;
      trial.boxes[l] = {v, v};
      if (!try_tighten(trial)) {
        cur = std::move(trial);
        w[l] = v;
        pinned = true;
        break;
      }
    }
    if (!pinned)
      throw internal_error("feasible_point: no extendable value for component " +
                           std::to_string(l + 1) +
                           " in a tightened feasible set");
  }
  // Propagation skips improvements under kTightenTol, so the pinned point can
  // sit that far outside a bound; accept sub-cent violations.
  if (!satisfies_all(c, w, kTightenTol))
    throw internal_error("feasible_point: constructed point violates a constraint");
  return w;
}

}  // namespace ineq
