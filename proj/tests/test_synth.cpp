#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <array>
#include <cmath>
#include <string>
#include <vector>

#include "ineq/constraints.hpp"
#include "ineq/indices.hpp"
#include "ineq/io.hpp"
#include "ineq/random.hpp"
#include "ineq/synth.hpp"

using namespace ineq;
using synth::BracketSystem;
using synth::CovariateSpec;
using synth::SynthConfig;

namespace {

std::array<bool, kComponents> owned_of(int pattern_index) {
  return {true, (pattern_index & 1) != 0, (pattern_index & 2) != 0,
          (pattern_index & 4) != 0, true};
}

// All eight patterns, one uniform covariate, exchangeable covariances: the
// same truth the sampler-side tests use.
SynthConfig base_config() {
  SynthConfig cfg;
  const std::array<double, kComponents> base{10.4, 11.0, 10.2, 9.8, 10.0};
  cfg.covariates = {{"age", CovariateSpec::Kind::uniform, 25.0, 75.0}};
  for (int l = 0; l < kComponents; ++l)
    cfg.parameters.slopes[static_cast<std::size_t>(l)] = VecX::Constant(1, 0.01);
  for (int i = 0; i < kPatterns; ++i) {
    const auto pattern = pattern_of(owned_of(i));
    MatX cov = MatX::Constant(pattern.size, pattern.size, 0.25 * 0.3);
    cov.diagonal().setConstant(0.25);
    cfg.parameters.covariances[static_cast<std::size_t>(i)] = cov;
    for (int l = 0; l < kComponents; ++l)
      if (pattern.owned[static_cast<std::size_t>(l)])
        cfg.parameters.intercepts[static_cast<std::size_t>(i)]
                                 [static_cast<std::size_t>(l)] =
            base[static_cast<std::size_t>(l)] + 0.05 * i;
  }
  return cfg;
}

// Pattern 1 only, no covariates: total wealth is exp(N(10, 1)) plus a
// suppressed remainder of order exp(-20).
SynthConfig lognormal_config() {
  SynthConfig cfg;
  cfg.pattern_probabilities = {1, 0, 0, 0, 0, 0, 0, 0};
  MatX cov = MatX::Zero(2, 2);
  cov(0, 0) = 1.0;
  cov(1, 1) = 1e-12;
  cfg.parameters.covariances[0] = cov;
  cfg.parameters.intercepts[0][0] = 10.0;
  cfg.parameters.intercepts[0][4] = -20.0;
  return cfg;
}

}  // namespace

TEST_CASE("synth config validation rejects inconsistent settings") {
  CHECK_NOTHROW(base_config().validate());
  {
    SynthConfig cfg = base_config();
    cfg.pattern_probabilities[0] += 0.5;
    CHECK_THROWS_WITH_AS(cfg.validate(),
                         doctest::Contains("must sum to 1"), input_error);
  }
  {
    SynthConfig cfg = base_config();
    cfg.sample_size = 50000;
    cfg.population_size = 100;
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("exceeds"),
                         input_error);
  }
  {
    SynthConfig cfg = base_config();
    cfg.total_system.thresholds = {0, 1000, 1000};
    CHECK_THROWS_WITH_AS(cfg.validate(),
                         doctest::Contains("strictly increasing"), input_error);
  }
  {
    SynthConfig cfg = base_config();
    cfg.parameters.covariances[0] = MatX::Identity(3, 3);
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("2x2"), input_error);
  }
  {
    SynthConfig cfg = base_config();
    cfg.parameters.covariances[7] = -MatX::Identity(5, 5);
    CHECK_THROWS_WITH_AS(cfg.validate(),
                         doctest::Contains("not positive definite"),
                         input_error);
  }
  {
    SynthConfig cfg = base_config();
    cfg.parameters.intercepts[2][2] = std::nan("");
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("undefined"),
                         input_error);
  }
  {
    SynthConfig cfg = base_config();
    cfg.parameters.slopes[1] = VecX::Zero(3);
    CHECK_THROWS_WITH_AS(cfg.validate(),
                         doctest::Contains("slope coefficients"), input_error);
  }
  {
    SynthConfig cfg = base_config();
    cfg.oversample = {"income", 2.0};
    CHECK_THROWS_WITH_AS(cfg.validate(),
                         doctest::Contains("not among the configured"),
                         input_error);
  }
  {
    SynthConfig cfg = base_config();
    cfg.covariates.push_back(cfg.covariates[0]);
    cfg.parameters.slopes[0] = VecX::Zero(2);
    CHECK_THROWS_WITH_AS(cfg.validate(), doctest::Contains("duplicate"),
                         input_error);
  }
  {
    SynthConfig cfg = base_config();
    cfg.debt_fraction = 1.0;
    CHECK_THROWS_AS(cfg.validate(), input_error);
    cfg.debt_fraction = 0.0;
    cfg.dwelling_rebate = 0.0;
    CHECK_THROWS_AS(cfg.validate(), input_error);
    cfg.dwelling_rebate = 0.8;
    cfg.nded_fraction = 1.5;
    CHECK_THROWS_AS(cfg.validate(), input_error);
  }
}

TEST_CASE("synth config JSON round-trips strictly") {
  SynthConfig cfg = base_config();
  cfg.population_size = 777;
  cfg.sample_size = 55;
  cfg.seed = 31;
  cfg.oversample = {"age", 2.5};
  cfg.debt_fraction = 0.05;
  cfg.component_systems[2].thresholds = {0, 12345.5};
  const std::string text = synth::synth_config_json(cfg);
  const SynthConfig back = synth::parse_synth_config(text);
  CHECK(back.population_size == 777);
  CHECK(back.sample_size == 55);
  CHECK(back.seed == 31);
  CHECK(back.oversample.covariate == "age");
  CHECK(back.oversample.factor == 2.5);
  CHECK(back.debt_fraction == 0.05);
  CHECK(back.component_systems[2].thresholds ==
        std::vector<double>{0, 12345.5});
  CHECK(back.total_system.thresholds == cfg.total_system.thresholds);
  CHECK(back.covariates.size() == 1);
  CHECK(back.covariates[0].name == "age");
  CHECK(back.covariates[0].kind == CovariateSpec::Kind::uniform);
  CHECK(back.covariates[0].a == 25.0);
  CHECK(back.covariates[0].b == 75.0);
  for (int i = 0; i < kPatterns; ++i)
    CHECK((back.parameters.covariances[static_cast<std::size_t>(i)] -
           cfg.parameters.covariances[static_cast<std::size_t>(i)])
              .norm() == 0.0);
  CHECK(back.parameters.slopes[0][0] == 0.01);
  CHECK(back.parameters.intercepts[3][1] ==
        cfg.parameters.intercepts[3][1]);

  SUBCASE("rejections") {
    CHECK_THROWS_WITH_AS(
        (void)synth::parse_synth_config(R"({"parameters": {}, "bogus": 1})"),
        doctest::Contains("unknown key 'bogus'"), input_error);
    CHECK_THROWS_WITH_AS((void)synth::parse_synth_config(R"({"seed": 3})"),
                         doctest::Contains("missing key 'parameters'"),
                         input_error);
    CHECK_THROWS_WITH_AS((void)synth::parse_synth_config("]["),
                         doctest::Contains("invalid JSON"), input_error);
    std::string bad_kind = text;
    const auto at = bad_kind.find("uniform");
    REQUIRE(at != std::string::npos);
    bad_kind.replace(at, 7, "weibull");
    CHECK_THROWS_WITH_AS((void)synth::parse_synth_config(bad_kind),
                         doctest::Contains("unknown covariate kind"),
                         input_error);
  }
}

TEST_CASE("bracket systems map values to intervals") {
  const BracketSystem total{{0, 75000, 150000, 300000, 450000}};
  SUBCASE("top bracket is unbounded above the last threshold") {
    const Interval iv = total.bracket_of(500000.0);
    CHECK(iv.lo == 450000.0);
    CHECK(std::isinf(iv.hi));
  }
  SUBCASE("interior values and boundaries") {
    CHECK(total.bracket_of(0.0).lo == 0.0);
    CHECK(total.bracket_of(0.0).hi == 75000.0);
    CHECK(total.bracket_of(74999.99).hi == 75000.0);
    CHECK(total.bracket_of(75000.0).lo == 75000.0);
    CHECK(total.bracket_of(75000.0).hi == 150000.0);
  }
  SUBCASE("degenerate system observes the value exactly") {
    const BracketSystem exact{};
    const Interval iv = exact.bracket_of(123456.78);
    CHECK(iv.lo == 123456.78);
    CHECK(iv.hi == 123456.78);
  }
  SUBCASE("singleton zero system observes nothing") {
    const BracketSystem none{{0}};
    const Interval iv = none.bracket_of(9e7);
    CHECK(iv.lo == 0.0);
    CHECK(std::isinf(iv.hi));
  }
  SUBCASE("values below the first threshold are rejected") {
    const BracketSystem sys{{1000, 2000}};
    CHECK_THROWS_WITH_AS((void)sys.bracket_of(500.0),
                         doctest::Contains("below the first bracket"),
                         input_error);
  }
}

TEST_CASE("generated population follows the configured truth") {
  SUBCASE("vanishing noise pins totals at exp(x beta)") {
    SynthConfig cfg = base_config();
    cfg.population_size = 10000;
    cfg.sample_size = 100;
    for (int i = 0; i < kPatterns; ++i) {
      const int p = pattern_of(owned_of(i)).size;
      cfg.parameters.covariances[static_cast<std::size_t>(i)] =
          MatX::Identity(p, p) * 1e-8;
    }
    RngStream rng(9200, 1);
    const auto pop = synth::generate_population(cfg, rng);
    for (long long k = 0; k < cfg.population_size; ++k) {
      const Household& u = pop.units[static_cast<std::size_t>(k)];
      const int i = u.pattern.pattern_id - 1;
      double expected = 0.0;
      for (int l = 0; l < kComponents; ++l) {
        if (!u.pattern.owned[static_cast<std::size_t>(l)]) continue;
        const double mu =
            cfg.parameters.intercepts[static_cast<std::size_t>(i)]
                                     [static_cast<std::size_t>(l)] +
            cfg.parameters.slopes[static_cast<std::size_t>(l)][0] *
                u.covariates[static_cast<std::size_t>(l)][1];
        expected += std::exp(mu);
      }
      REQUIRE(std::abs(pop.total[k] - expected) / expected < 1e-3);
    }
  }
  SUBCASE("one-component population matches the lognormal gini") {
    SynthConfig cfg = lognormal_config();
    cfg.population_size = 100000;
    cfg.sample_size = 1;
    RngStream rng(9201, 1);
    const auto pop = synth::generate_population(cfg, rng);
    const VecX g = synth::true_indices(pop, {IndexSpec::Gini()});
    // Frozen realized value; the closed form is erf(1/2) = 0.5204998778.
    CHECK(g[0] == doctest::Approx(0.5185095205).epsilon(1e-6));
    CHECK(std::abs(g[0] - std::erf(0.5)) < 0.01);
  }
  SUBCASE("pattern frequencies follow the configured probabilities") {
    SynthConfig cfg = base_config();
    cfg.population_size = 100000;
    cfg.sample_size = 1;
    cfg.pattern_probabilities = {0.3, 0.1, 0.1, 0.05, 0.15, 0.1, 0.1, 0.1};
    RngStream rng(9202, 1);
    const auto pop = synth::generate_population(cfg, rng);
    std::array<long long, kPatterns> counts{};
    for (const Household& u : pop.units)
      counts[static_cast<std::size_t>(u.pattern.pattern_id - 1)]++;
    double worst = 0.0;
    for (int i = 0; i < kPatterns; ++i) {
      const double p = cfg.pattern_probabilities[static_cast<std::size_t>(i)];
      const double z =
          std::abs(static_cast<double>(
                       counts[static_cast<std::size_t>(i)]) -
                   1e5 * p) /
          std::sqrt(1e5 * p * (1 - p));
      worst = std::max(worst, z);
    }
    // Frozen realized maximum z across the eight patterns.
    CHECK(worst == doctest::Approx(1.6655).epsilon(1e-3));
    CHECK(worst < 3.0);
  }
  SUBCASE("structure: ids, weights, designs, truth layout") {
    SynthConfig cfg = base_config();
    cfg.population_size = 64;
    cfg.sample_size = 8;
    RngStream rng(9205, 1);
    const auto pop = synth::generate_population(cfg, rng);
    REQUIRE(pop.units.size() == 64);
    REQUIRE(pop.wealth.rows() == 64);
    for (long long k = 0; k < 64; ++k) {
      const Household& u = pop.units[static_cast<std::size_t>(k)];
      CHECK(u.id == "u-" + std::to_string(k + 1));
      CHECK(u.weight == 1.0);
      CHECK(validate_household(u).empty());
      double sum = 0.0;
      for (int l = 0; l < kComponents; ++l) {
        if (u.pattern.owned[static_cast<std::size_t>(l)]) {
          CHECK(pop.wealth(k, l) > 0.0);
          CHECK(u.covariates[static_cast<std::size_t>(l)][0] == 1.0);
          CHECK(u.covariates[static_cast<std::size_t>(l)].size() == 2);
        } else {
          CHECK(pop.wealth(k, l) == 0.0);
        }
        sum += pop.wealth(k, l);
      }
      CHECK(pop.total[k] == doctest::Approx(sum).epsilon(1e-15));
      CHECK(pop.total[k] <= cfg.cap);
    }
    CHECK(pop.covariate_names[0] == std::vector<std::string>{"age"});
    RngStream rng2(9205, 1);
    const auto again = synth::generate_population(cfg, rng2);
    CHECK((again.total - pop.total).norm() == 0.0);
  }
  SUBCASE("a cap that cuts the distribution forces redraws; an impossible"
          " cap errors") {
    SynthConfig cfg = base_config();
    cfg.population_size = 2000;
    cfg.sample_size = 20;
    cfg.cap = 200000.0;
    RngStream rng(9206, 1);
    const auto pop = synth::generate_population(cfg, rng);
    CHECK(pop.total.maxCoeff() <= 200000.0);
    SynthConfig impossible = base_config();
    impossible.population_size = 1;
    impossible.sample_size = 1;
    impossible.cap = 1.0;
    RngStream rng2(9206, 2);
    CHECK_THROWS_WITH_AS(
        (void)synth::generate_population(impossible, rng2),
        doctest::Contains("redraws kept exceeding the cap"), input_error);
  }
}

TEST_CASE("sampling scores follow the oversampling rank rule") {
  SynthConfig cfg = base_config();
  cfg.population_size = 500;
  cfg.sample_size = 50;
  RngStream rng(9207, 1);
  const auto pop = synth::generate_population(cfg, rng);
  SUBCASE("no oversampling gives unit scores") {
    const VecX s = synth::sampling_scores(pop, cfg);
    CHECK(s.size() == 500);
    CHECK(s.minCoeff() == 1.0);
    CHECK(s.maxCoeff() == 1.0);
  }
  SUBCASE("scores grow with the keyed covariate up to the factor") {
    SynthConfig over = cfg;
    over.oversample = {"age", 3.0};
    const VecX s = synth::sampling_scores(pop, over);
    CHECK(s.maxCoeff() == 3.0);  // the largest value has rank N
    CHECK(s.minCoeff() > 1.0);
    for (int a = 0; a < 500; ++a)
      for (int b = a + 1; b < a + 3 && b < 500; ++b) {
        const double xa = pop.units[static_cast<std::size_t>(a)].covariates[0][1];
        const double xb = pop.units[static_cast<std::size_t>(b)].covariates[0][1];
        if (xa < xb) CHECK(s[a] < s[b]);
        if (xa > xb) CHECK(s[a] > s[b]);
      }
  }
  SUBCASE("unknown covariate is rejected") {
    SynthConfig over = cfg;
    over.oversample = {"income", 2.0};
    CHECK_THROWS_WITH_AS((void)synth::sampling_scores(pop, over),
                         doctest::Contains("not among the population"),
                         input_error);
  }
}

TEST_CASE("systematic selection honors the inclusion probabilities") {
  SynthConfig cfg = base_config();
  cfg.population_size = 1000;
  cfg.sample_size = 100;
  RngStream gen(9208, 1);
  const auto pop = synth::generate_population(cfg, gen);

  SUBCASE("uniform scores give everyone weight N/m") {
    RngStream rng(9208, 2);
    const auto s =
        synth::draw_with_scores(pop, VecX::Ones(1000), 100, rng);
    REQUIRE(s.households.size() == 100);
    REQUIRE(s.unit_rows.size() == 100);
    for (std::size_t i = 1; i < s.unit_rows.size(); ++i)
      CHECK(s.unit_rows[i] > s.unit_rows[i - 1]);
    for (const Household& h : s.households) {
      CHECK(h.weight == s.households[0].weight);
      CHECK(h.weight == doctest::Approx(10.0).epsilon(1e-12));
    }
    for (std::size_t i = 0; i < s.unit_rows.size(); ++i) {
      const int k = s.unit_rows[i];
      CHECK((s.wealth.row(static_cast<Eigen::Index>(i)) -
             pop.wealth.row(k)).norm() == 0.0);
      CHECK(s.total[static_cast<Eigen::Index>(i)] == pop.total[k]);
      CHECK(s.households[i].id == pop.units[static_cast<std::size_t>(k)].id);
    }
  }
  SUBCASE("doubling a unit's score halves its weight when selected") {
    SynthConfig tiny = base_config();
    tiny.population_size = 10;
    tiny.sample_size = 2;
    RngStream g2(9209, 1);
    const auto small = synth::generate_population(tiny, g2);
    VecX flat = VecX::Ones(10);
    VecX bumped = flat;
    bumped[3] = 2.0;  // keep the total fixed so pi scales exactly
    bumped[6] = 0.5;
    bumped[7] = 0.5;
    RngStream ra(9209, 2);
    const auto sa = synth::draw_with_scores(small, flat, 2, ra);
    const double base_weight = sa.households[0].weight;  // 1/(2/10)
    bool seen = false;
    for (std::uint64_t stream = 10; stream < 80 && !seen; ++stream) {
      RngStream rb(9209, stream);
      const auto sb = synth::draw_with_scores(small, bumped, 2, rb);
      for (std::size_t i = 0; i < sb.unit_rows.size(); ++i)
        if (sb.unit_rows[i] == 3) {
          CHECK(sb.households[i].weight == base_weight / 2.0);
          seen = true;
        }
    }
    CHECK(seen);
  }
  SUBCASE("overweight units enter with certainty at weight 1") {
    SynthConfig tiny = base_config();
    tiny.population_size = 20;
    tiny.sample_size = 3;
    RngStream g2(9210, 1);
    const auto small = synth::generate_population(tiny, g2);
    VecX scores = VecX::Ones(20);
    scores[5] = 1000.0;
    RngStream rng(9210, 2);
    const auto s = synth::draw_with_scores(small, scores, 3, rng);
    REQUIRE(s.households.size() == 3);
    bool has5 = false;
    for (std::size_t i = 0; i < s.unit_rows.size(); ++i)
      if (s.unit_rows[i] == 5) {
        has5 = true;
        CHECK(s.households[i].weight == 1.0);
      } else {
        CHECK(s.households[i].weight == doctest::Approx(9.5).epsilon(1e-12));
      }
    CHECK(has5);
  }
  SUBCASE("drawing everyone is a census") {
    SynthConfig tiny = base_config();
    tiny.population_size = 5;
    tiny.sample_size = 5;
    RngStream g2(9211, 1);
    const auto small = synth::generate_population(tiny, g2);
    RngStream rng(9211, 2);
    const auto s = synth::draw_with_scores(small, VecX::Ones(5), 5, rng);
    REQUIRE(s.households.size() == 5);
    for (const Household& h : s.households) CHECK(h.weight == 1.0);
  }
  SUBCASE("degenerate scores are rejected") {
    RngStream rng(9208, 3);
    VecX s = VecX::Ones(1000);
    s[7] = 0.0;
    CHECK_THROWS_WITH_AS((void)synth::draw_with_scores(pop, s, 10, rng),
                         doctest::Contains("degenerate sampling scores"),
                         input_error);
    s[7] = -1.0;
    CHECK_THROWS_AS((void)synth::draw_with_scores(pop, s, 10, rng),
                    input_error);
    CHECK_THROWS_AS(
        (void)synth::draw_with_scores(pop, VecX::Ones(3), 2, rng),
        input_error);
    CHECK_THROWS_AS(
        (void)synth::draw_with_scores(pop, VecX::Ones(1000), 1001, rng),
        input_error);
  }
  SUBCASE("the weight sum estimates the population size without bias") {
    SynthConfig rep_cfg = base_config();
    rep_cfg.population_size = 2000;
    rep_cfg.sample_size = 200;
    rep_cfg.oversample = {"age", 3.0};
    rep_cfg.debt_fraction = 0.05;
    RngStream g2(9203, 1);
    const auto pop2 = synth::generate_population(rep_cfg, g2);
    const int reps = 100;
    std::vector<double> ht(reps);
    for (int r = 0; r < reps; ++r) {
      RngStream rng(9203, 100 + static_cast<std::uint64_t>(r));
      const auto s = synth::draw_sample(pop2, rep_cfg, rng);
      double wsum = 0.0;
      for (const Household& h : s.households) wsum += h.weight;
      ht[static_cast<std::size_t>(r)] = wsum;
    }
    double m = 0.0;
    for (double x : ht) m += x;
    m /= reps;
    double v = 0.0;
    for (double x : ht) v += (x - m) * (x - m);
    const double sd = std::sqrt(v / (reps - 1));
    // Frozen realized replication mean; the target is N = 2000.
    CHECK(m == doctest::Approx(1996.509485).epsilon(1e-5));
    CHECK(std::abs(m - 2000.0) <= 3.0 * sd / std::sqrt(100.0));
  }
}

TEST_CASE("censoring hides the truth but keeps it feasible") {
  SynthConfig cfg = base_config();
  cfg.population_size = 5000;
  cfg.sample_size = 400;
  cfg.oversample = {"age", 3.0};
  cfg.debt_fraction = 0.05;
  RngStream gen(9204, 1);
  const auto pop = synth::generate_population(cfg, gen);
  RngStream rng(9204, 2);
  const auto sample = synth::draw_sample(pop, cfg, rng);
  const io::Dataset data = synth::apply_censoring(sample, cfg);
  REQUIRE(data.households.size() == 400);

  SUBCASE("records disclose brackets, tax data and cap only") {
    for (std::size_t i = 0; i < data.households.size(); ++i) {
      const Household& h = data.households[i];
      const auto row = static_cast<Eigen::Index>(i);
      CHECK(validate_household(h).empty());
      CHECK(h.cap == cfg.cap);
      CHECK(h.nded_min == h.nded_max);
      CHECK(h.nded_min == 0.5 * sample.wealth(row, 3));
      CHECK(h.debt == 0.05 * sample.total[row]);
      const double taxable = sample.wealth(row, 0) +
                             0.8 * sample.wealth(row, 1) +
                             sample.wealth(row, 2) + h.nded_min +
                             sample.wealth(row, 4) - h.debt;
      REQUIRE(h.pays_wealth_tax.has_value());
      CHECK(*h.pays_wealth_tax == (taxable >= cfg.tax_threshold));
      for (int l = 0; l < kComponents; ++l) {
        if (!h.pattern.owned[static_cast<std::size_t>(l)]) continue;
        const Interval& iv = h.component_brackets[static_cast<std::size_t>(l)];
        CHECK(iv.lo <= sample.wealth(row, l));
        CHECK(sample.wealth(row, l) < iv.hi);
        CHECK(iv.width() > 0.0);  // truth is hidden, never leaked
      }
      CHECK(h.total_bracket.lo <= sample.total[row]);
      CHECK(sample.total[row] < h.total_bracket.hi);
    }
  }
  SUBCASE("every truth vector is feasible for its tightened region") {
    RunConfig rc;
    rc.tax_threshold = cfg.tax_threshold;
    rc.dwelling_rebate = cfg.dwelling_rebate;
    int inside = 0;
    for (std::size_t i = 0; i < data.households.size(); ++i) {
      const ConstraintSet c =
          tighten(build_constraints(data.households[i], rc));
      const VecX truth =
          sample.wealth.row(static_cast<Eigen::Index>(i)).transpose();
      if (satisfies_all(c, truth, 1e-6)) ++inside;
    }
    CHECK(inside == 400);
  }
  SUBCASE("degenerate systems reproduce the truth exactly") {
    SynthConfig exact = cfg;
    for (auto& sys : exact.component_systems) sys.thresholds.clear();
    exact.total_system.thresholds.clear();
    const io::Dataset obs = synth::apply_censoring(sample, exact);
    for (std::size_t i = 0; i < obs.households.size(); ++i) {
      const Household& h = obs.households[i];
      const auto row = static_cast<Eigen::Index>(i);
      for (int l = 0; l < kComponents; ++l) {
        if (!h.pattern.owned[static_cast<std::size_t>(l)]) continue;
        CHECK(h.component_brackets[static_cast<std::size_t>(l)].lo ==
              sample.wealth(row, l));
        CHECK(h.component_brackets[static_cast<std::size_t>(l)].hi ==
              sample.wealth(row, l));
      }
      CHECK(h.total_bracket.lo == sample.total[row]);
      CHECK(h.total_bracket.hi == sample.total[row]);
    }
  }
  SUBCASE("a large total lands in the unbounded top bracket") {
    bool seen_top = false;
    for (std::size_t i = 0; i < data.households.size(); ++i) {
      const auto row = static_cast<Eigen::Index>(i);
      if (sample.total[row] >= 450000.0) {
        CHECK(data.households[i].total_bracket.lo == 450000.0);
        CHECK(std::isinf(data.households[i].total_bracket.hi));
        seen_top = true;
      }
    }
    CHECK(seen_top);  // the truth generates some wealthy households
  }
}

TEST_CASE("true indices evaluate the population with unit weights") {
  SUBCASE("hand-built populations") {
    synth::Population pop;
    pop.total = (VecX(3) << 1.0, 2.0, 3.0).finished();
    const VecX g = synth::true_indices(
        pop, {IndexSpec::Gini(), IndexSpec::Mean(), IndexSpec::Quantile(0.5)});
    CHECK(g[0] == doctest::Approx(2.0 / 9.0).epsilon(1e-14));
    CHECK(g[1] == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g[2] == 2.0);
    pop.total = VecX::Constant(50, 42.0);
    const VecX e = synth::true_indices(pop, {IndexSpec::Gini()});
    CHECK(e[0] == doctest::Approx(0.0).epsilon(1e-12));
  }
  SUBCASE("design-weighted sample estimates converge on the truth") {
    SynthConfig cfg = base_config();
    cfg.population_size = 2000;
    cfg.sample_size = 200;
    cfg.oversample = {"age", 3.0};
    cfg.debt_fraction = 0.05;
    RngStream gen(9203, 1);
    const auto pop = synth::generate_population(cfg, gen);
    const VecX truth = synth::true_indices(pop, {IndexSpec::Gini()});
    CHECK(truth[0] == doctest::Approx(0.30627810).epsilon(1e-6));
    const int reps = 100;
    std::vector<double> est(reps);
    for (int r = 0; r < reps; ++r) {
      RngStream rng(9203, 100 + static_cast<std::uint64_t>(r));
      const auto s = synth::draw_sample(pop, cfg, rng);
      VecX weights(s.total.size());
      for (std::size_t i = 0; i < s.households.size(); ++i)
        weights[static_cast<Eigen::Index>(i)] = s.households[i].weight;
      est[static_cast<std::size_t>(r)] =
          weighted_gini(WeightedSample{s.total, weights});
    }
    double m = 0.0;
    for (double x : est) m += x;
    m /= reps;
    double v = 0.0;
    for (double x : est) v += (x - m) * (x - m);
    const double sd = std::sqrt(v / (reps - 1));
    // Frozen realized replication mean of the design-weighted gini.
    CHECK(m == doctest::Approx(0.30673956).epsilon(1e-6));
    CHECK(std::abs(m - truth[0]) <= 3.0 * sd / std::sqrt(100.0));
  }
}

TEST_CASE("truth CSV lists identifiers, levels and totals") {
  SynthConfig cfg = base_config();
  cfg.population_size = 30;
  cfg.sample_size = 3;
  RngStream gen(9212, 1);
  const auto pop = synth::generate_population(cfg, gen);
  RngStream rng(9212, 2);
  const auto sample = synth::draw_sample(pop, cfg, rng);
  const std::string csv = synth::truth_csv(sample);
  std::string expected = "id,true_w1,true_w2,true_w3,true_w4,true_w5,true_total\n";
  for (std::size_t i = 0; i < sample.households.size(); ++i) {
    expected += sample.households[i].id;
    for (int l = 0; l < kComponents; ++l) {
      expected += ',';
      expected +=
          io::format_double(sample.wealth(static_cast<Eigen::Index>(i), l));
    }
    expected += ',';
    expected += io::format_double(sample.total[static_cast<Eigen::Index>(i)]);
    expected += '\n';
  }
  CHECK(csv == expected);
}
