#include <gtest/gtest.h>

#include <random>

#include "gdv/indifference.hpp"
#include "gdv/superhedge.hpp"
#include "test_support.hpp"

using namespace gdv;

namespace {

double rel_entropy(double q1, double q2, double q3, const std::vector<double>& p) {
  double h = 0.0;
  const double q[3] = {q1, q2, q3};
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (q[i] > 0) h += q[i] * std::log(q[i] / p[i]);
  }
  return h;
}

// Entropic indifference price on the one-security Arrow-Debreu market by a
// dense 1-D grid over the segment q1 in [0.4, 0.6].
double ad1_entropic_oracle(const Claim& x, double gamma) {
  const std::vector<double> p = {0.5, 0.5};
  double sup = -1e300, minh = 1e300;
  for (int i = 0; i <= 200000; ++i) {
    const double q1 = 0.4 + 0.2 * i / 200000.0, q0 = 1.0 - q1;
    const double h = rel_entropy(q0, q1, 0.0, p) / gamma;
    sup = std::max(sup, -q0 * x[0] - q1 * x[1] - h);
    minh = std::min(minh, h);
  }
  return sup + minh;
}

IndifferencePricer ad_entropic() {
  return IndifferencePricer(testing_support::arrow_debreu_1(), RiskMeasure::entropic(Space({"w0", "w1"}, {0.5, 0.5}), 1.0));
}

}  // namespace

TEST(Indifference, ZeroClaimPricesAtZero) {
  const auto ad = testing_support::arrow_debreu_1();
  const auto q = consistent_set(ad);
  std::vector<IndifferencePricer> all = {
      ad_entropic(),
      IndifferencePricer(ad, RiskMeasure::worst_case(q)),
      IndifferencePricer(ad, RiskMeasure::finite_list(ad.space(), {Measure({0.3, 0.7}), Measure({0.5, 0.5})}, {0.1, 0.0})),
      IndifferencePricer(MarketCone::frictionless(Space::uniform(2)), RiskMeasure::quadratic_example(Space::uniform(2))),
  };
  for (const auto& p : all) EXPECT_NEAR(p.price(Claim::constant(2, 0.0)), 0.0, 1e-10) << p.base().kind();
}

TEST(Indifference, OffsetExamples) {
  const auto fr = MarketCone::frictionless(Space::uniform(2));
  EXPECT_NEAR(offset(fr, RiskMeasure::entropic(Space::uniform(2), 1.0)).value(), 0.0, 1e-12);
  EXPECT_NEAR(ad_entropic().offset().value(), 0.0, 1e-12);
  const auto ad = testing_support::arrow_debreu_1();
  EXPECT_NEAR(offset(ad, RiskMeasure::worst_case(consistent_set(ad))).value(), 0.0, 1e-12);
}

// Reference probability outside the consistent box: the offset is minus the
// smallest relative entropy over the box, found by a 2-D grid.
TEST(Indifference, OffsetAgainstGridOnTwoSecurityMarket) {
  const auto m = testing_support::arrow_debreu_2();
  const auto& p = m.space().probabilities();
  double minh = 1e300;
  for (int i = 0; i <= 1000; ++i) {
    for (int j = 0; j <= 1500; ++j) {
      const double q1 = 0.2 + 0.1 * i / 1000.0, q2 = 0.25 + 0.15 * j / 1500.0;
      minh = std::min(minh, rel_entropy(1.0 - q1 - q2, q1, q2, p));
    }
  }
  const double off = offset(m, RiskMeasure::entropic(m.space(), 1.0)).value();
  EXPECT_LT(off, -1e-3);
  EXPECT_NEAR(off, -minh, 1e-6);
}

TEST(Indifference, FrictionlessEntropicIsIdentity) {
  const auto sp = Space({"a", "b", "c"}, {0.2, 0.3, 0.5});
  const auto eta = RiskMeasure::entropic(sp, 1.0);
  const IndifferencePricer pr(MarketCone::frictionless(sp), eta);
  std::mt19937_64 rng(3);
  for (int k = 0; k < 20; ++k) {
    const Claim x = detail::random_claim(rng, 3);
    // log E[e^x] closed form
    double s = 0.0;
    for (std::size_t i = 0; i < 3; ++i) s += sp.p(i) * std::exp(x[i]);
    EXPECT_NEAR(pr.price(-x), std::log(s), 1e-9);
  }
}

TEST(Indifference, ArrowDebreuEntropicAskInsideBidAsk) {
  const auto pr = ad_entropic();
  const Claim ad1 = Claim::indicator(2, 1);
  const auto q = pr.quote(-ad1);
  EXPECT_EQ(q.method, "dual");
  EXPECT_GT(q.value, 0.4);
  EXPECT_LT(q.value, 0.6);
  EXPECT_NEAR(q.value, ad1_entropic_oracle(-ad1, 1.0), 1e-9);
  ASSERT_EQ(q.hedge.size(), 2u);
  // the hedge replays: rho(x + G lambda) - offset matches the price
  const double replay = pr.base()(-ad1 + pr.market().combine(q.hedge)) - pr.offset().value();
  EXPECT_NEAR(replay, q.value, 1e-6);
}

TEST(Indifference, ArrowDebreuEntropicMatchesSegmentOracle) {
  const auto pr = ad_entropic();
  std::mt19937_64 rng(5);
  for (int k = 0; k < 20; ++k) {
    const Claim x = detail::random_claim(rng, 2);
    EXPECT_NEAR(pr.price(x), ad1_entropic_oracle(x, 1.0), 1e-9);
  }
}

TEST(FixedPoint, Residuals) {
  std::mt19937_64 rng(7);
  std::vector<Claim> claims;
  for (int k = 0; k < 100; ++k) claims.push_back(detail::random_claim(rng, 2));
  const auto ad = testing_support::arrow_debreu_1();
  EXPECT_LE(fixed_point_residual(ad, RiskMeasure::worst_case(consistent_set(ad)), claims), 1e-7);
  EXPECT_LE(fixed_point_residual(MarketCone::frictionless(Space::uniform(2)),
                                 RiskMeasure::quadratic_example(Space::uniform(2)), claims),
            1e-6);
  EXPECT_GT(fixed_point_residual(ad, RiskMeasure::entropic(ad.space(), 1.0), claims), 1e-3);
}

TEST(Indifference, EmptyConsistentSetIsDegenerate) {
  const MarketCone m(Space::uniform(2), {Claim({1.0, 1.0})});
  for (const auto& rho : {RiskMeasure::entropic(Space::uniform(2), 1.0),
                          RiskMeasure::worst_case(MeasurePolytope::simplex(Space::uniform(2))),
                          RiskMeasure::finite_list(Space::uniform(2), {Measure({0.5, 0.5})}, {0.0})}) {
    const IndifferencePricer pr(m, rho);
    EXPECT_TRUE(pr.degenerate()) << rho.kind();
    EXPECT_TRUE(pr.offset().is_minus_infinity());
    try {
      pr.price(Claim({1.0, 0.0}));
      FAIL() << "expected degenerate offset error";
    } catch (const DegenerateOffsetError& e) {
      // replay: the ray is in M and rho decreases along it
      EXPECT_TRUE(cone_contains(m, e.ray()));
      EXPECT_LT(rho(10.0 * e.ray()), rho(e.ray()) - 1e-6);
    }
  }
}

TEST(Indifference, PenaltyOutsideConsistentSetIsDegenerate) {
  const auto m = testing_support::arbitrage_market();
  const IndifferencePricer pr(m, RiskMeasure::finite_list(m.space(), {Measure({0.5, 0.5})}, {0.0}));
  ASSERT_TRUE(pr.degenerate());
  EXPECT_TRUE(cone_contains(m, *pr.degenerate_ray()));
  EXPECT_GT(pr.degenerate_ray()->values()[0], 0.0);
}

TEST(Indifference, EntropicAsRiskMeasureMatches) {
  const auto m = testing_support::arrow_debreu_2();
  const IndifferencePricer pr(m, RiskMeasure::entropic(m.space(), 1.0));
  const auto rho = pr.as_risk_measure();
  ASSERT_TRUE(rho.has_value());
  std::mt19937_64 rng(11);
  for (int k = 0; k < 20; ++k) {
    const Claim x = detail::random_claim(rng, 3);
    EXPECT_NEAR(pr.price(x), (*rho)(x), 1e-9);
  }
}

// Properties on random markets with random finite_list and worst-case bases.
TEST(IndifferenceProperties, InvariantsOnRandomMarkets) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = 2 + trial % 4;
    const auto m = testing_support::random_market(rng, n, 1 + trial % 3);
    std::vector<Measure> qs;
    std::vector<double> cs;
    for (std::size_t i = 0; i < 3; ++i) {
      std::vector<double> w(n);
      double s = 0;
      for (double& v : w) s += (v = u(rng) + 0.05);
      for (double& v : w) v /= s;
      qs.push_back(Measure::from_solver(w));
      cs.push_back(i == 0 ? 0.0 : 0.5 * u(rng));
    }
    const auto rho = RiskMeasure::finite_list(m.space(), qs, cs);
    const IndifferencePricer pr(m, rho);
    if (pr.degenerate()) {
      EXPECT_TRUE(cone_contains(m, *pr.degenerate_ray()));
      continue;
    }
    ++checked;
    const double off = pr.offset().value();
    for (int k = 0; k < 10; ++k) {
      const Claim x = detail::random_claim(rng, n);
      const double ix = pr.price(x);
      EXPECT_LE(ix, rho(x) - off + 1e-9);
      EXPECT_NEAR(ix, pr.dual_price(x), 1e-7);
      std::vector<double> lam(m.generators().size());
      for (double& l : lam) l = 2.0 * u(rng);
      const Claim mm = m.combine(lam) - Claim::constant(n, u(rng));
      EXPECT_LE(pr.price(-mm), 1e-8);
    }
    const auto rep = check_axioms([&](const Claim& x) { return pr.price(x); }, n, 15, 200 + trial, 1e-8);
    EXPECT_TRUE(rep.passed()) << rep.violations.front().axiom;

    const IndifferencePricer wc(m, RiskMeasure::worst_case(consistent_set(m)));
    for (int k = 0; k < 5; ++k) {
      const Claim x = detail::random_claim(rng, n);
      // I of the dual superhedging functional is itself
      EXPECT_NEAR(wc.price(x), superhedging_cost(m, x).value(), 1e-8);
      EXPECT_NEAR(wc.price(x), wc.dual_price(x), 1e-8);
    }
  }
  EXPECT_GT(checked, 20);
}

TEST(IndifferenceProperties, EntropicCashInvarianceAndConvexity) {
  const auto m = testing_support::arrow_debreu_2();
  const IndifferencePricer pr(m, RiskMeasure::entropic(m.space(), 2.0));
  const auto rep = check_axioms([&](const Claim& x) { return pr.price(x); }, 3, 30, 17, 1e-8);
  EXPECT_TRUE(rep.passed()) << (rep.passed() ? "" : rep.violations.front().axiom);
}

// Reference probability outside the bid-ask box: the entropy minimizer sits
// on the face q1 = ask, so the indifference ask reaches the upper bound.
TEST(Indifference, AskReachesBoundWhenReferenceOutsideBox) {
  const auto m = testing_support::arrow_debreu_2();
  const IndifferencePricer pr(m, RiskMeasure::entropic(m.space(), 1.0));
  const Claim ad1 = Claim::indicator(3, 1);
  EXPECT_NEAR(pr.price(-ad1), 0.3, 1e-9);
  EXPECT_LT(-pr.price(ad1), 0.3 - 1e-3);
}
