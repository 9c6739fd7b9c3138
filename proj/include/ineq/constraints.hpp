#pragma once

// Non-rectangular censoring regions: per-component boxes intersected with
// monotone linear constraints (including the clamped tax terms), interval
// propagation to tighten bounds, and exact one-dimensional conditional
// intervals for the Gibbs updates.

#include <optional>
#include <string>
#include <vector>

#include "ineq/domain.hpp"
#include "ineq/types.hpp"

namespace ineq {

// sum_l c_l * term_l(W_l) + offset  {>=|<=}  bound, where term_l is W_l
// except for at most one clamped component, where it is min(W_l, clamp).
// All terms are nondecreasing in their component, so every conditional
// section of the feasible set is an interval.
struct LinearConstraint {
  enum class Sense { ge, le };

  VecX coeffs = VecX::Zero(kComponents);  // > 0 where included, else 0
  int clamp_component = -1;               // 0-based, -1 = none
  double clamp_value = kInf;
  double offset = 0.0;
  Sense sense = Sense::ge;
  double bound = 0.0;
  std::string label;

  double evaluate(const VecX& w) const;  // LHS including offset
  // Signed satisfaction margin: >= 0 iff the constraint holds at w.
  double slack(const VecX& w) const;
  std::string describe() const;
};

// A household's censoring region.  Boxes are meaningful only on owned
// components and have finite upper ends once the cap is applied.
struct ConstraintSet {
  PortfolioPattern pattern;
  std::array<Interval, kComponents> boxes{};
  std::vector<LinearConstraint> linear;
};

// Diagnostic for an empty censoring region: which constraint pinched the
// region shut and by how much (negative slack, euros).
struct Infeasibility {
  std::string constraint;
  double slack = 0.0;
};

// Assembles boxes (brackets capped by h.cap) and the linear constraints:
// total bracket, optional collected-components sum bracket, the wealth-tax
// floor or ceiling implied by pays_wealth_tax, and the global cap.
ConstraintSet build_constraints(const Household& h, const RunConfig& cfg);

// Interval propagation to a fixed point (bound changes below 1e-6 euro are
// not applied, which makes the result idempotent bit-for-bit).  Throws
// infeasible_error naming the binding constraint when a box empties.
ConstraintSet tighten(const ConstraintSet& c);

// Non-throwing variant: on infeasibility returns the diagnostic and leaves
// the partially tightened set in *c.
std::optional<Infeasibility> try_tighten(ConstraintSet& c);

// Exact section {W_l : all constraints hold} with the other components
// fixed at w (w[l] ignored), intersected with box l.  May come back empty
// (lo > hi) when w has drifted outside the feasible region.
Interval conditional_interval(const ConstraintSet& c, int l, const VecX& w);

// A point satisfying every constraint of a nonempty feasible set, built by
// pinning one component at a time (midpoint first) and re-tightening the
// rest, so sum constraints the other components must absorb shift their
// boxes before the next pin.  Throws internal_error if the set is empty or
// a constructed point fails validation (a bug signal on tightened input).
VecX feasible_point(const ConstraintSet& c);

// True when w lies in every box and satisfies every linear constraint with
// slack >= -tol.
bool satisfies_all(const ConstraintSet& c, const VecX& w, double tol);

}  // namespace ineq
