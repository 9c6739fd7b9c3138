#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstring>
#include <vector>

#include "ineq/constraints.hpp"
#include "ineq/random.hpp"

using namespace ineq;

namespace {

RunConfig base_config() {
  RunConfig cfg;
  cfg.indices = RunConfig::default_indices();
  return cfg;
}

Household minimal_household(std::optional<bool> pays_tax) {
  Household h;
  h.id = "hh";
  h.weight = 1.0;
  h.pattern = pattern_of({true, false, false, false, true});
  for (int l : owned_components(h.pattern)) h.covariates[l] = VecX::Ones(1);
  h.component_brackets[0] = {0.0, kInf};
  h.component_brackets[4] = {1000.0, 5000.0};
  h.pays_wealth_tax = pays_tax;
  h.cap = 5e7;
  return h;
}

// Random constraint set with a planted interior point, for property tests.
struct Planted {
  ConstraintSet set;
  VecX point;
};

Planted random_planted(RngStream& rng) {
  Planted out;
  std::array<bool, kComponents> owned = {true, rng.uniform() < 0.5,
                                         rng.uniform() < 0.5,
                                         rng.uniform() < 0.5, true};
  out.set.pattern = pattern_of(owned);
  out.point = VecX::Zero(kComponents);
  double total = 0.0;
  for (int l : owned_components(out.set.pattern)) {
    const double x = 100.0 + 900.0 * rng.uniform();
    out.point[l] = x;
    out.set.boxes[l].lo = std::max(0.0, x - 50.0 - 300.0 * rng.uniform());
    out.set.boxes[l].hi = x + 50.0 + 300.0 * rng.uniform();
    total += x;
  }
  // A generous cap keeps every box finite, as build_constraints would.
  {
    LinearConstraint cap;
    for (int l : owned_components(out.set.pattern)) cap.coeffs[l] = 1.0;
    cap.sense = LinearConstraint::Sense::le;
    cap.bound = total + 500.0 + 2000.0 * rng.uniform();
    cap.label = "cap";
    out.set.linear.push_back(cap);
  }
  // A few random constraints the point satisfies with positive slack.
  const int extra = 1 + static_cast<int>(2.9 * rng.uniform());
  for (int i = 0; i < extra; ++i) {
    LinearConstraint lc;
    double value = 0.0;
    for (int l : owned_components(out.set.pattern)) {
      if (rng.uniform() < 0.4) continue;
      lc.coeffs[l] = 0.25 + rng.uniform();
      double term = out.point[l];
      if (l == 3 && rng.uniform() < 0.5) {
        lc.clamp_component = 3;
        lc.clamp_value = 50.0 + 1000.0 * rng.uniform();
        term = std::min(term, lc.clamp_value);
      }
      value += lc.coeffs[l] * term;
    }
    if ((lc.coeffs.array() != 0.0).count() == 0) continue;
    lc.offset = -200.0 + 400.0 * rng.uniform();
    value += lc.offset;
    if (rng.uniform() < 0.5) {
      lc.sense = LinearConstraint::Sense::ge;
      lc.bound = value - 10.0 - 200.0 * rng.uniform();
    } else {
      lc.sense = LinearConstraint::Sense::le;
      lc.bound = value + 10.0 + 200.0 * rng.uniform();
    }
    lc.label = "extra";
    out.set.linear.push_back(std::move(lc));
  }
  return out;
}

const LinearConstraint* find_label(const ConstraintSet& c,
                                   const std::string& label) {
  for (const auto& lc : c.linear)
    if (lc.label == label) return &lc;
  return nullptr;
}

}  // namespace

TEST_CASE("build_constraints emits the wealth-tax floor for payers") {
  const auto h = minimal_household(true);
  const auto c = build_constraints(h, base_config());
  const auto* tax = find_label(c, "wealth-tax payer floor");
  REQUIRE(tax != nullptr);
  CHECK(tax->sense == LinearConstraint::Sense::ge);
  CHECK(tax->bound == 720000.0);
  CHECK(tax->coeffs[0] == 1.0);
  CHECK(tax->coeffs[4] == 1.0);
  CHECK(tax->coeffs[1] == 0.0);  // dwelling not owned
  CHECK(tax->coeffs[3] == 0.0);  // professional not owned
  CHECK(tax->offset == 0.0);
  // Boxes come from brackets, capped.
  CHECK(c.boxes[4].lo == 1000.0);
  CHECK(c.boxes[4].hi == 5000.0);
  CHECK(c.boxes[0].hi == 5e7);
}

TEST_CASE("unknown tax status adds no tax constraint") {
  const auto c = build_constraints(minimal_household(std::nullopt), base_config());
  CHECK(find_label(c, "wealth-tax payer floor") == nullptr);
  CHECK(find_label(c, "wealth-tax non-payer ceiling") == nullptr);
  CHECK(find_label(c, "total wealth cap") != nullptr);
}

TEST_CASE("dwelling carries the rebate coefficient in tax constraints") {
  Household h = minimal_household(true);
  h.pattern = pattern_of({true, true, false, false, true});
  h.covariates[1] = VecX::Ones(1);
  h.component_brackets[1] = {10000.0, 900000.0};
  const auto c = build_constraints(h, base_config());
  const auto* tax = find_label(c, "wealth-tax payer floor");
  REQUIRE(tax != nullptr);
  CHECK(tax->coeffs[1] == 0.8);

  h.pays_wealth_tax = false;
  h.nded_min = 2500.0;
  h.debt = 1000.0;
  const auto c2 = build_constraints(h, base_config());
  const auto* ceil = find_label(c2, "wealth-tax non-payer ceiling");
  REQUIRE(ceil != nullptr);
  CHECK(ceil->coeffs[1] == 0.8);
  CHECK(ceil->coeffs[4] == 0.0);  // remainder absent from the lower bound
  CHECK(ceil->offset == 2500.0 - 1000.0);
  CHECK(ceil->sense == LinearConstraint::Sense::le);
}

TEST_CASE("payer tax constraint clamps the professional component") {
  Household h = minimal_household(true);
  h.pattern = pattern_of({true, false, false, true, true});
  h.covariates[3] = VecX::Ones(1);
  h.component_brackets[3] = {0.0, kInf};
  h.nded_max = 100000.0;
  const auto c = build_constraints(h, base_config());
  const auto* tax = find_label(c, "wealth-tax payer floor");
  REQUIRE(tax != nullptr);
  CHECK(tax->clamp_component == 3);
  CHECK(tax->clamp_value == 100000.0);
}

TEST_CASE("tighten propagates a sum bracket into the boxes") {
  ConstraintSet c;
  c.pattern = pattern_of({true, false, false, false, true});
  c.boxes[0] = {0.0, 100.0};
  c.boxes[4] = {0.0, 100.0};
  LinearConstraint lo, hi;
  lo.coeffs[0] = lo.coeffs[4] = 1.0;
  lo.sense = LinearConstraint::Sense::ge;
  lo.bound = 150.0;
  hi.coeffs[0] = hi.coeffs[4] = 1.0;
  hi.sense = LinearConstraint::Sense::le;
  hi.bound = 200.0;
  c.linear = {lo, hi};

  const auto t = tighten(c);
  CHECK(t.boxes[0].lo == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(t.boxes[0].hi == 100.0);
  CHECK(t.boxes[4].lo == doctest::Approx(50.0).epsilon(1e-12));
  CHECK(t.boxes[4].hi == 100.0);
}

TEST_CASE("tighten reports infeasible sum constraints") {
  ConstraintSet c;
  c.pattern = pattern_of({true, false, false, false, true});
  c.boxes[0] = {0.0, 10.0};
  c.boxes[4] = {0.0, 10.0};
  LinearConstraint lc;
  lc.coeffs[0] = lc.coeffs[4] = 1.0;
  lc.sense = LinearConstraint::Sense::ge;
  lc.bound = 30.0;
  c.linear = {lc};
  CHECK_THROWS_AS((void)tighten(c), infeasible_error);

  ConstraintSet c2 = c;
  const auto bad = try_tighten(c2);
  REQUIRE(bad.has_value());
  CHECK(bad->slack < 0.0);
}

TEST_CASE("tighten raises the clamped component's floor") {
  // Payer: W1 + 0.8 W2 + W3 + min(W4, 100000) + W5 >= 720000, other terms
  // reach at most 650000, so min(W4, 100000) >= 70000.
  Household h;
  h.id = "clamp";
  h.weight = 1.0;
  h.pattern = pattern_of({true, true, true, true, true});
  for (int l : owned_components(h.pattern)) h.covariates[l] = VecX::Ones(1);
  h.component_brackets[0] = {0.0, 250000.0};
  h.component_brackets[1] = {0.0, 250000.0};  // 0.8 * 250000 = 200000
  h.component_brackets[2] = {0.0, 100000.0};
  h.component_brackets[3] = {0.0, kInf};
  h.component_brackets[4] = {0.0, 100000.0};
  h.nded_max = 100000.0;
  h.pays_wealth_tax = true;
  h.cap = 5e7;
  const auto t = tighten(build_constraints(h, base_config()));
  CHECK(t.boxes[3].lo == doctest::Approx(70000.0).epsilon(1e-12));

  // If the clamp cannot reach the required level, the region is empty.
  Household h2 = h;
  h2.component_brackets[4] = {0.0, 50000.0};  // others now reach 600000
  CHECK_THROWS_AS((void)tighten(build_constraints(h2, base_config())),
                  infeasible_error);
}

TEST_CASE("tighten is sound and idempotent on random planted sets") {
  RngStream rng(303, 1);
  int feasible_count = 0;
  for (int rep = 0; rep < 200; ++rep) {
    auto planted = random_planted(rng);
    ConstraintSet t = planted.set;
    const auto bad = try_tighten(t);
    REQUIRE(!bad.has_value());  // planted point guarantees feasibility
    ++feasible_count;
    // Soundness: the planted point survives tightening.
    CHECK(satisfies_all(t, planted.point, 1e-9));
    for (int l : owned_components(t.pattern))
      CHECK(t.boxes[l].contains(planted.point[l], 1e-9));
    // Idempotence, bit for bit.
    ConstraintSet t2 = t;
    const auto again = try_tighten(t2);
    REQUIRE(!again.has_value());
    for (int l : owned_components(t.pattern)) {
      CHECK(std::memcmp(&t.boxes[l].lo, &t2.boxes[l].lo, sizeof(double)) == 0);
      CHECK(std::memcmp(&t.boxes[l].hi, &t2.boxes[l].hi, sizeof(double)) == 0);
    }
  }
  CHECK(feasible_count == 200);
}

TEST_CASE("conditional interval: hand-checked sections") {
  ConstraintSet c;
  c.pattern = pattern_of({true, false, false, false, true});
  c.boxes[0] = {0.0, 100.0};
  c.boxes[4] = {0.0, 100.0};
  LinearConstraint lo, hi;
  lo.coeffs[0] = lo.coeffs[4] = 1.0;
  lo.sense = LinearConstraint::Sense::ge;
  lo.bound = 150.0;
  hi.coeffs[0] = hi.coeffs[4] = 1.0;
  hi.sense = LinearConstraint::Sense::le;
  hi.bound = 200.0;
  c.linear = {lo, hi};

  VecX w = VecX::Zero(kComponents);
  w[4] = 60.0;
  const auto iv = conditional_interval(c, 0, w);
  CHECK(iv.lo == doctest::Approx(90.0).epsilon(1e-12));
  CHECK(iv.hi == 100.0);

  SUBCASE("no linear constraints returns the box") {
    c.linear.clear();
    const auto box = conditional_interval(c, 0, w);
    CHECK(box.lo == 0.0);
    CHECK(box.hi == 100.0);
  }
  SUBCASE("unreachable clamped floor gives an empty section") {
    ConstraintSet cc;
    cc.pattern = pattern_of({true, false, false, true, true});
    cc.boxes[0] = {0.0, 500000.0};
    cc.boxes[3] = {0.0, 5e7};
    cc.boxes[4] = {0.0, 100000.0};
    LinearConstraint tax;
    tax.coeffs[0] = tax.coeffs[3] = tax.coeffs[4] = 1.0;
    tax.clamp_component = 3;
    tax.clamp_value = 100000.0;
    tax.sense = LinearConstraint::Sense::ge;
    tax.bound = 720000.0;
    cc.linear = {tax};
    VecX ww = VecX::Zero(kComponents);
    ww[0] = 400000.0;  // others contribute 400000 + 100000 < 720000 - 100000
    ww[4] = 100000.0;
    const auto empty = conditional_interval(cc, 3, ww);
    CHECK(empty.lo > empty.hi);
  }
}

TEST_CASE("conditional interval agrees with brute-force membership") {
  RngStream rng(304, 1);
  const double tol = 1e-6;
  for (int rep = 0; rep < 40; ++rep) {
    auto planted = random_planted(rng);
    ConstraintSet t = planted.set;
    REQUIRE(!try_tighten(t).has_value());
    const VecX w = planted.point;
    for (int l : owned_components(t.pattern)) {
      const auto iv = conditional_interval(t, l, w);
      const Interval& box = t.boxes[l];
      for (int g = 0; g <= 10000; ++g) {
        const double x =
            box.lo + (box.hi - box.lo) * static_cast<double>(g) / 10000.0;
        if (std::fabs(x - iv.lo) < 2.0 * tol || std::fabs(x - iv.hi) < 2.0 * tol)
          continue;  // boundary band
        VecX wx = w;
        wx[l] = x;
        const bool brute = satisfies_all(t, wx, tol);
        const bool in_iv = (iv.lo <= iv.hi) && x >= iv.lo - tol && x <= iv.hi + tol;
        REQUIRE(brute == in_iv);
      }
    }
  }
}

TEST_CASE("feasible_point lands inside the region") {
  SUBCASE("boxes only: midpoints") {
    ConstraintSet c;
    c.pattern = pattern_of({true, false, false, false, true});
    c.boxes[0] = {10.0, 30.0};
    c.boxes[4] = {100.0, 200.0};
    const VecX w = feasible_point(c);
    CHECK(w[0] == 20.0);
    CHECK(w[4] == 150.0);
  }
  SUBCASE("sum-constrained region") {
    ConstraintSet c;
    c.pattern = pattern_of({true, false, false, false, true});
    c.boxes[0] = {0.0, 100.0};
    c.boxes[4] = {0.0, 100.0};
    LinearConstraint lo;
    lo.coeffs[0] = lo.coeffs[4] = 1.0;
    lo.sense = LinearConstraint::Sense::ge;
    lo.bound = 150.0;
    c.linear = {lo};
    const auto t = tighten(c);
    const VecX w = feasible_point(t);
    CHECK(satisfies_all(t, w, 1e-9));
    CHECK(w[0] + w[4] >= 150.0 - 1e-9);
  }
  SUBCASE("random planted sets: slack at least -1e-9") {
    RngStream rng(305, 1);
    for (int rep = 0; rep < 200; ++rep) {
      auto planted = random_planted(rng);
      ConstraintSet t = planted.set;
      REQUIRE(!try_tighten(t).has_value());
      const VecX w = feasible_point(t);
      CHECK(satisfies_all(t, w, 1e-9));
    }
  }
  SUBCASE("infeasible set is a bug signal") {
    ConstraintSet c;
    c.pattern = pattern_of({true, false, false, false, true});
    c.boxes[0] = {0.0, 10.0};
    c.boxes[4] = {0.0, 10.0};
    LinearConstraint lc;
    lc.coeffs[0] = lc.coeffs[4] = 1.0;
    lc.sense = LinearConstraint::Sense::ge;
    lc.bound = 30.0;
    c.linear = {lc};
    CHECK_THROWS_AS((void)feasible_point(c), internal_error);
  }
}

TEST_CASE("constraint descriptions are human-readable") {
  LinearConstraint lc;
  lc.coeffs[0] = 1.0;
  lc.coeffs[1] = 0.8;
  lc.coeffs[3] = 1.0;
  lc.coeffs[4] = 1.0;
  lc.clamp_component = 3;
  lc.clamp_value = 100000.0;
  lc.offset = -5000.0;
  lc.sense = LinearConstraint::Sense::ge;
  lc.bound = 720000.0;
  lc.label = "wealth-tax payer floor";
  const std::string text = lc.describe();
  CHECK(text.find("0.8*W2") != std::string::npos);
  CHECK(text.find("min(W4, 100000)") != std::string::npos);
  CHECK(text.find(">= 720000") != std::string::npos);
  CHECK(text.find("wealth-tax payer floor") != std::string::npos);
}
